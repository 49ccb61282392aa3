#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alignkit/alignment.hpp"

namespace alignkit {

inline constexpr std::size_t kDefaultMaxPhraseLength = 7;

/// Inclusive token span.
struct TokenSpan {
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  std::size_t length() const { return static_cast<std::size_t>(last - first) + 1; }
  friend auto operator<=>(const TokenSpan&, const TokenSpan&) = default;
};

struct PhrasePair {
  TokenSpan source;
  TokenSpan target;

  friend auto operator<=>(const PhrasePair&, const PhrasePair&) = default;
};

/// Every rectangle that contains at least one link, has no link leaving it
/// on either axis, and whose spans are at most max_length long. Spans that
/// absorb unaligned boundary words are included. Sorted by (j1, j2, i1, i2).
std::vector<PhrasePair> extract_consistent_phrases(const AlignmentSet& alignment,
                                                   std::size_t max_length = kDefaultMaxPhraseLength);

/// Surface strings of a phrase pair (tokens joined by single spaces).
std::pair<std::string, std::string> realize(const PhrasePair& phrase,
                                            std::span<const std::string> source_tokens,
                                            std::span<const std::string> target_tokens);

struct PhraseEntry {
  std::string source;
  std::string target;
  std::uint64_t count = 0;
  double target_given_source = 0.0;  // p(tgt|src)
  double source_given_target = 0.0;  // p(src|tgt)
};

/// Relative-frequency phrase table in both directions.
class PhraseTable {
 public:
  void add(const std::string& source, const std::string& target, std::uint64_t count = 1);
  void merge(const PhraseTable& other);

  /// Entries sorted by (source, target) with both conditional probabilities.
  std::vector<PhraseEntry> entries() const;

  std::size_t size() const { return pair_counts_.size(); }
  bool empty() const { return pair_counts_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts_;
  std::map<std::string, std::uint64_t> source_counts_;
  std::map<std::string, std::uint64_t> target_counts_;
};

/// Aggregates surface phrase pairs (one count per occurrence).
PhraseTable build_phrase_table(std::span<const std::pair<std::string, std::string>> extracted);

/// "src ||| tgt ||| p(tgt|src) p(src|tgt) count" per entry.
void write_phrase_table(std::ostream& out, const PhraseTable& table);

}  // namespace alignkit
