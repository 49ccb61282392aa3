#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"

namespace alignkit {

/// Tag carried by tokens without a label.
inline constexpr std::string_view kOutsideTag = "O";

struct LabeledSpan {
  std::size_t first = 0;  // inclusive
  std::size_t last = 0;   // inclusive
  std::string label;

  friend bool operator==(const LabeledSpan&, const LabeledSpan&) = default;
};

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;  // empty, or one per token
  std::vector<LabeledSpan> spans;
};

/// Each target position takes the majority tag among the source positions
/// linked to it (ties: tag of the leftmost such source token); unlinked
/// target positions get "O". Throws DimensionError if A does not fit (|tags|, n).
std::vector<std::string> project_token_labels(std::span<const std::string> source_tags,
                                              const AlignmentSet& alignment,
                                              std::size_t target_length);

/// Each span maps to the hull of the target positions linked to it; spans
/// with an empty image are dropped, and overlaps are resolved in favour of
/// the span that starts earlier on the source side. Output sorted by start.
std::vector<LabeledSpan> project_spans(std::span<const LabeledSpan> source_spans,
                                       const AlignmentSet& alignment, std::size_t target_length);

/// A dependency arc between two token positions.
struct Arc {
  std::size_t head = 0;
  std::size_t dependent = 0;
  std::string label;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Projects arc endpoints to their leftmost linked target position; arcs
/// with an unlinked endpoint are dropped.
std::vector<Arc> project_arcs(std::span<const Arc> source_arcs, const AlignmentSet& alignment);

/// "token/TAG token/TAG ..." (split at the last '/'); a token without '/'
/// gets "O".
LabeledSentence parse_tagged_line(std::string_view line, std::size_t line_no = 0);
std::string format_tagged(std::span<const std::string> tokens, std::span<const std::string> tags);

/// Span records "sent_id<TAB>start<TAB>end<TAB>label": 1-based sentence ids,
/// 0-based inclusive token positions.
struct SpanRecord {
  std::size_t sentence = 0;
  LabeledSpan span;
};
std::vector<SpanRecord> read_span_records(std::istream& in);
void write_span_records(std::ostream& out, std::span<const SpanRecord> records);

struct ProjectedCorpus {
  std::vector<LabeledSentence> sentences;  // target tokens, projected tags/spans
};

/// Per-sentence projection over a whole corpus. The three inputs must have
/// the same number of records; otherwise FormatError names the first record
/// (1-based) missing from one of them. Span records must refer to existing
/// sentences.
ProjectedCorpus project_corpus(std::span<const RawPair> bitext,
                               std::span<const AlignmentSet> alignments,
                               std::span<const LabeledSentence> annotations);

}  // namespace alignkit
