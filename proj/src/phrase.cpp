#include "alignkit/phrase.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "alignkit/error.hpp"

namespace alignkit {

std::vector<PhrasePair> extract_consistent_phrases(const AlignmentSet& alignment,
                                                   std::size_t max_length) {
  if (max_length == 0) throw ConfigError("maximum phrase length must be >= 1");
  const std::size_t m = alignment.source_length();
  const std::size_t n = alignment.target_length();
  std::vector<PhrasePair> out;
  if (alignment.empty()) return out;

  std::vector<std::vector<std::uint32_t>> by_source(m);
  std::vector<std::vector<std::uint32_t>> by_target(n);
  for (const Link l : alignment.links()) {
    by_source[l.source].push_back(l.target);
    by_target[l.target].push_back(l.source);
  }

  for (std::size_t j1 = 0; j1 < m; ++j1) {
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    std::size_t hi = 0;
    for (std::size_t j2 = j1; j2 < m && j2 - j1 < max_length; ++j2) {
      for (const auto i : by_source[j2]) {
        lo = std::min<std::size_t>(lo, i);
        hi = std::max<std::size_t>(hi, i);
      }
      if (lo > hi) continue;                // no link yet
      if (hi - lo + 1 > max_length) break;  // only widens as j2 grows

      // Every link into [lo, hi] must come from [j1, j2].
      bool consistent = true;
      for (std::size_t i = lo; i <= hi && consistent; ++i) {
        for (const auto j : by_target[i]) {
          if (j < j1 || j > j2) {
            consistent = false;
            break;
          }
        }
      }
      if (!consistent) continue;

      // Extend over unaligned target words on either side.
      for (std::size_t i1 = lo + 1; i1-- > 0;) {
        if (i1 < lo && !by_target[i1].empty()) break;
        if (hi - i1 + 1 > max_length) break;
        for (std::size_t i2 = hi; i2 < n; ++i2) {
          if (i2 > hi && !by_target[i2].empty()) break;
          if (i2 - i1 + 1 > max_length) break;
          out.push_back({{static_cast<std::uint32_t>(j1), static_cast<std::uint32_t>(j2)},
                         {static_cast<std::uint32_t>(i1), static_cast<std::uint32_t>(i2)}});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::string, std::string> realize(const PhrasePair& phrase,
                                            std::span<const std::string> source_tokens,
                                            std::span<const std::string> target_tokens) {
  auto join = [](std::span<const std::string> tokens, TokenSpan span) {
    if (span.last >= tokens.size()) throw DimensionError("phrase span outside the sentence");
    std::string s;
    for (std::size_t k = span.first; k <= span.last; ++k) {
      if (k > span.first) s += ' ';
      s += tokens[k];
    }
    return s;
  };
  return {join(source_tokens, phrase.source), join(target_tokens, phrase.target)};
}

void PhraseTable::add(const std::string& source, const std::string& target, std::uint64_t count) {
  if (count == 0) return;
  pair_counts_[{source, target}] += count;
  source_counts_[source] += count;
  target_counts_[target] += count;
}

void PhraseTable::merge(const PhraseTable& other) {
  for (const auto& [key, count] : other.pair_counts_) add(key.first, key.second, count);
}

std::vector<PhraseEntry> PhraseTable::entries() const {
  std::vector<PhraseEntry> out;
  out.reserve(pair_counts_.size());
  for (const auto& [key, count] : pair_counts_) {
    const auto src_total = static_cast<double>(source_counts_.at(key.first));
    const auto tgt_total = static_cast<double>(target_counts_.at(key.second));
    out.push_back({key.first, key.second, count, static_cast<double>(count) / src_total,
                   static_cast<double>(count) / tgt_total});
  }
  return out;
}

PhraseTable build_phrase_table(std::span<const std::pair<std::string, std::string>> extracted) {
  PhraseTable table;
  for (const auto& [source, target] : extracted) table.add(source, target);
  return table;
}

void write_phrase_table(std::ostream& out, const PhraseTable& table) {
  for (const auto& e : table.entries()) {
    out << e.source << " ||| " << e.target << " ||| " << e.target_given_source << ' '
        << e.source_given_target << ' ' << e.count << '\n';
  }
}

}  // namespace alignkit
