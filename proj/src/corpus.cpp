#include "alignkit/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "alignkit/error.hpp"
#include "alignkit/parallel.hpp"

namespace alignkit {
namespace {

const std::string& unknown_token() {
  static const std::string kToken(kUnknownToken);
  return kToken;
}

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t k = 0;
  while (k < n) {
    const unsigned char lead = bytes[k];
    if (lead < 0x80) {
      ++k;
      continue;
    }
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      return k;
    }
    if (k + extra >= n) return k;
    for (std::size_t e = 1; e <= extra; ++e) {
      if ((bytes[k + e] & 0xC0) != 0x80) return k;
      cp = (cp << 6) | (bytes[k + e] & 0x3F);
    }
    static constexpr std::uint32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return k;
    k += extra + 1;
  }
  return std::string_view::npos;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

using CountMap = std::unordered_map<std::string, std::uint64_t>;

}  // namespace

const std::string& Vocabulary::token(WordId id) const {
  if (id == kUnknownId || id > tokens_.size()) return unknown_token();
  return tokens_[id - 1];
}

WordId Vocabulary::id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnknownId : it->second;
}

bool Vocabulary::contains(std::string_view token) const { return id(token) != kUnknownId; }

std::uint64_t Vocabulary::count(WordId id) const {
  if (id == kUnknownId || id > counts_.size()) return 0;
  return counts_[id - 1];
}

std::vector<WordId> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const WordId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const WordId i : ids) out.push_back(token(i));
  return out;
}

Vocabulary Vocabulary::from_ranked(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                   std::size_t threshold) {
  Vocabulary vocab;
  vocab.threshold_ = threshold;
  vocab.tokens_.reserve(entries.size());
  vocab.counts_.reserve(entries.size());
  for (auto& [token, count] : entries) {
    const auto id = static_cast<WordId>(vocab.tokens_.size() + 1);
    if (!vocab.index_.emplace(token, id).second) {
      throw FormatError("duplicate vocabulary token '" + token + "'");
    }
    vocab.tokens_.push_back(std::move(token));
    vocab.counts_.push_back(count);
  }
  return vocab;
}

std::vector<std::string> tokenize(std::string_view line, bool lowercase) {
  if (const auto bad = find_invalid_utf8(line); bad != std::string_view::npos) {
    throw EncodingError("invalid UTF-8 at byte " + std::to_string(bad));
  }
  std::vector<std::string> tokens;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && is_space(line[k])) ++k;
    const std::size_t start = k;
    while (k < line.size() && !is_space(line[k])) ++k;
    if (k > start) {
      std::string token(line.substr(start, k - start));
      if (lowercase) std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> sentences,
                            std::size_t max_size, unsigned threads) {
  if (max_size == 0) throw ConfigError("vocabulary size must be at least 1");

  auto partial = parallel_chunks(
      sentences.size(), threads, [] { return CountMap{}; },
      [&](CountMap& counts, std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
          for (const auto& token : sentences[s]) ++counts[token];
        }
      });
  CountMap merged = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) {
    for (const auto& [token, count] : partial[w]) merged[token] += count;
  }

  std::vector<std::pair<std::string, std::uint64_t>> ranked(merged.begin(), merged.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);
  return Vocabulary::from_ranked(std::move(ranked), max_size);
}

SentencePair encode(std::span<const std::string> source, std::span<const std::string> target,
                    const Vocabulary& source_vocab, const Vocabulary& target_vocab) {
  if (source.empty() || target.empty()) {
    throw DegeneratePairError(source.empty() ? "empty source side" : "empty target side");
  }
  return SentencePair{source_vocab.encode(source), target_vocab.encode(target)};
}

Bitext reversed(const Bitext& bitext) {
  Bitext out;
  out.pairs.reserve(bitext.pairs.size());
  for (const auto& p : bitext.pairs) out.pairs.push_back(SentencePair{p.target, p.source});
  out.source_vocab = bitext.target_vocab;
  out.target_vocab = bitext.source_vocab;
  return out;
}

std::vector<RawPair> read_raw_lines(std::istream& in, const LoadOptions& options,
                                    LoadReport* report) {
  std::vector<RawPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto sep = line.find(kPairSeparator);
    if (sep == std::string::npos) {
      throw FormatError("missing \" ||| \" separator", line_no);
    }
    RawPair pair;
    try {
      pair.source = tokenize(std::string_view(line).substr(0, sep), options.lowercase);
      pair.target =
          tokenize(std::string_view(line).substr(sep + kPairSeparator.size()), options.lowercase);
    } catch (const EncodingError& e) {
      throw EncodingError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if ((pair.source.empty() || pair.target.empty()) && report != nullptr) {
      report->skipped_lines.push_back(line_no);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<RawPair> read_raw_pairs(std::istream& in, const LoadOptions& options,
                                    LoadReport* report) {
  auto lines = read_raw_lines(in, options, report);
  std::erase_if(lines, [](const RawPair& p) { return p.source.empty() || p.target.empty(); });
  return lines;
}

Bitext encode_pairs(std::span<const RawPair> raw, Vocabulary source_vocab,
                    Vocabulary target_vocab) {
  Bitext bitext;
  bitext.pairs.reserve(raw.size());
  for (const auto& p : raw) {
    bitext.pairs.push_back(encode(p.source, p.target, source_vocab, target_vocab));
  }
  bitext.source_vocab = std::move(source_vocab);
  bitext.target_vocab = std::move(target_vocab);
  return bitext;
}

Bitext load_bitext(std::istream& in, const LoadOptions& options, LoadReport* report) {
  const auto raw = read_raw_pairs(in, options, report);
  std::vector<std::vector<std::string>> sources;
  std::vector<std::vector<std::string>> targets;
  sources.reserve(raw.size());
  targets.reserve(raw.size());
  for (const auto& p : raw) {
    sources.push_back(p.source);
    targets.push_back(p.target);
  }
  auto source_vocab = build_vocabulary(sources, options.max_vocabulary, options.threads);
  auto target_vocab = build_vocabulary(targets, options.max_vocabulary, options.threads);
  return encode_pairs(raw, std::move(source_vocab), std::move(target_vocab));
}

Bitext load_bitext(std::istream& in, Vocabulary source_vocab, Vocabulary target_vocab,
                   const LoadOptions& options, LoadReport* report) {
  const auto raw = read_raw_pairs(in, options, report);
  return encode_pairs(raw, std::move(source_vocab), std::move(target_vocab));
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (WordId id = 1; id < vocab.size(); ++id) {
    out << id << '\t' << vocab.token(id) << '\t' << vocab.count(id) << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) throw FormatError("expected id<TAB>token<TAB>count", line_no);
    try {
      std::size_t used = 0;
      const auto id = std::stoull(line.substr(0, tab1), &used);
      if (used != tab1) throw std::invalid_argument("id");
      const std::string count_text = line.substr(tab2 + 1);
      const auto count = std::stoull(count_text, &used);
      if (used != count_text.size()) throw std::invalid_argument("count");
      if (id != entries.size() + 1) throw FormatError("ids must ascend from 1 without gaps", line_no);
      entries.emplace_back(line.substr(tab1 + 1, tab2 - tab1 - 1), count);
    } catch (const std::logic_error&) {
      throw FormatError("non-integer id or count", line_no);
    }
  }
  return Vocabulary::from_ranked(std::move(entries));
}

}  // namespace alignkit
