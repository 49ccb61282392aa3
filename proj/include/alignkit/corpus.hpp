#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace alignkit {

using WordId = std::uint32_t;

/// Id reserved for out-of-vocabulary tokens in every vocabulary.
inline constexpr WordId kUnknownId = 0;
inline constexpr std::string_view kUnknownToken = "UNK";
inline constexpr std::size_t kUnlimitedVocabulary = std::numeric_limits<std::size_t>::max();

/// Frequency-ranked token <-> id bijection for one language.
///
/// Id 0 is UNK. Ids 1..size()-1 are assigned by descending corpus frequency,
/// ties broken by byte-wise token order, and never exceed the threshold T.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Token for an id; UNK for id 0 and for ids past the end.
  const std::string& token(WordId id) const;
  WordId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  std::uint64_t count(WordId id) const;

  /// Number of ids including UNK.
  std::size_t size() const { return tokens_.size() + 1; }
  std::size_t threshold() const { return threshold_; }

  const std::string& language() const { return language_; }
  void set_language(std::string language) { language_ = std::move(language); }

  std::vector<WordId> encode(std::span<const std::string> tokens) const;
  std::vector<std::string> decode(std::span<const WordId> ids) const;

  /// Builds from explicit (token, count) entries listed in id order 1, 2, ...
  /// Throws FormatError on duplicates.
  static Vocabulary from_ranked(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                std::size_t threshold = kUnlimitedVocabulary);

 private:
  std::string language_;
  std::size_t threshold_ = kUnlimitedVocabulary;
  std::vector<std::string> tokens_;  // tokens_[id - 1]
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
};

/// Splits on runs of ASCII whitespace. Lowercasing is ASCII-only.
/// Throws EncodingError when the line is not valid UTF-8.
std::vector<std::string> tokenize(std::string_view line, bool lowercase = false);

/// Keeps the max_size most frequent tokens. max_size must be >= 1.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> sentences,
                            std::size_t max_size = kUnlimitedVocabulary, unsigned threads = 1);

/// Id-encoded sentence pair; both sides non-empty.
struct SentencePair {
  std::vector<WordId> source;
  std::vector<WordId> target;

  std::size_t source_length() const { return source.size(); }
  std::size_t target_length() const { return target.size(); }
};

/// Throws DegeneratePairError when either side is empty.
SentencePair encode(std::span<const std::string> source, std::span<const std::string> target,
                    const Vocabulary& source_vocab, const Vocabulary& target_vocab);

/// Tokenized but not yet encoded pair, in file order.
struct RawPair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

struct Bitext {
  std::vector<SentencePair> pairs;
  Vocabulary source_vocab;
  Vocabulary target_vocab;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// The source and target sides swapped, for training the reverse direction.
Bitext reversed(const Bitext& bitext);

enum class BitextFormat {
  /// "source ||| target", one pair per line.
  pipe_separated,
};

inline constexpr std::string_view kPairSeparator = " ||| ";

struct LoadOptions {
  BitextFormat format = BitextFormat::pipe_separated;
  bool lowercase = false;
  std::size_t max_vocabulary = kUnlimitedVocabulary;
  unsigned threads = 1;
};

/// Pairs skipped while loading: 1-based line numbers of pairs with an empty side.
struct LoadReport {
  std::vector<std::size_t> skipped_lines;
};

/// Every line of a "source ||| target" stream, tokenized, including pairs
/// with an empty side (their 1-based line numbers go to report->skipped_lines).
std::vector<RawPair> read_raw_lines(std::istream& in, const LoadOptions& options = {},
                                    LoadReport* report = nullptr);

/// Reads and tokenizes "source ||| target" lines. Empty-sided pairs are
/// dropped and reported; a line without the separator is a FormatError.
std::vector<RawPair> read_raw_pairs(std::istream& in, const LoadOptions& options = {},
                                    LoadReport* report = nullptr);

/// Reads a bitext and builds both vocabularies in the same pass.
Bitext load_bitext(std::istream& in, const LoadOptions& options = {}, LoadReport* report = nullptr);

/// Reads a bitext against pre-built vocabularies (unknown tokens become UNK).
Bitext load_bitext(std::istream& in, Vocabulary source_vocab, Vocabulary target_vocab,
                   const LoadOptions& options = {}, LoadReport* report = nullptr);

Bitext encode_pairs(std::span<const RawPair> raw, Vocabulary source_vocab, Vocabulary target_vocab);

/// TSV "id<TAB>token<TAB>count" for ids >= 1, ascending.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

}  // namespace alignkit
