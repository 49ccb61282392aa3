#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "alignkit/alignment.hpp"

namespace alignkit {

/// Gold links of one sentence. Both vectors sorted and duplicate-free; every
/// sure link is also possible.
struct GoldSentence {
  std::vector<Link> sure;
  std::vector<Link> possible;
};

/// Keyed by the 1-based sentence id used in the gold file.
struct GoldAlignment {
  std::map<std::size_t, GoldSentence> sentences;
};

/// Link counts that every metric is computed from.
struct LinkCounts {
  std::size_t hypothesis = 0;         // |A|
  std::size_t sure = 0;               // |S|
  std::size_t hypothesis_sure = 0;    // |A n S|
  std::size_t hypothesis_possible = 0;  // |A n P|

  LinkCounts& operator+=(const LinkCounts& other);
};

struct Metrics {
  double aer = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

/// Links must be sorted and unique (AlignmentSet::links() and GoldSentence are).
LinkCounts count_links(std::span<const Link> hypothesis, std::span<const Link> sure,
                       std::span<const Link> possible);

Metrics metrics_from_counts(const LinkCounts& counts);

/// 1 - (|A n S| + |A n P|) / (|A| + |S|); 0 when |A| + |S| = 0.
double aer(std::span<const Link> hypothesis, std::span<const Link> sure,
           std::span<const Link> possible);

/// precision = |A n P| / |A| (1 if A empty), recall = |A n S| / |S| (1 if S
/// empty), F1 their harmonic mean (0 if both are 0).
Metrics precision_recall(std::span<const Link> hypothesis, std::span<const Link> sure,
                         std::span<const Link> possible);

/// Reads "sentence_id src_pos tgt_pos [S|P]" lines, 1-based positions, flag
/// defaulting to S. Blank lines are ignored. Throws FormatError with the line.
GoldAlignment parse_gold(std::istream& in);

/// Writes every link as a sure gold link; sentence k gets id k + 1.
void write_gold(std::ostream& out, std::span<const AlignmentSet> alignments);

struct SentenceReport {
  std::size_t id = 0;
  LinkCounts counts;
  Metrics metrics;
};

struct EvalReport {
  std::vector<SentenceReport> sentences;
  LinkCounts totals;
  /// Computed from pooled counts, not averaged per sentence.
  Metrics corpus;
  std::size_t evaluated = 0;
  /// Hypothesis sentences without any gold entry (skipped).
  std::vector<std::size_t> missing_gold;
  /// Gold sentence ids beyond the last hypothesis line (skipped).
  std::vector<std::size_t> missing_hypothesis;
};

/// hypotheses[k] is sentence id k + 1.
EvalReport evaluate_corpus(std::span<const AlignmentSet> hypotheses, const GoldAlignment& gold);

/// "metric<TAB>value" lines.
void write_report_tsv(std::ostream& out, const EvalReport& report);
void write_report_summary(std::ostream& out, const EvalReport& report);
/// Header line, then "id aer precision recall f1" per evaluated sentence.
void write_sentence_tsv(std::ostream& out, const EvalReport& report);

}  // namespace alignkit
