#include "alignkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "alignkit/error.hpp"

namespace alignkit {

void SynthConfig::validate() const {
  if (vocabulary < 1) throw ConfigError("synthetic vocabulary must be >= 1");
  if (min_length < 1 || max_length < min_length) {
    throw ConfigError("synthetic lengths need 1 <= min <= max");
  }
  if (!(swap_prob >= 0.0 && swap_prob <= 1.0)) throw ConfigError("swap probability must be in [0, 1]");
  if (!(null_rate >= 0.0 && null_rate <= 1.0)) throw ConfigError("null rate must be in [0, 1]");
  if (!(zipf >= 0.0) || !std::isfinite(zipf)) throw ConfigError("zipf exponent must be >= 0");
}

SynthCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  // Source word lexicon[k] translates target word k. Fillers live in their own
  // vocabulary range so they never collide with a translation.
  std::vector<std::size_t> lexicon(config.vocabulary);
  std::iota(lexicon.begin(), lexicon.end(), std::size_t{0});
  std::shuffle(lexicon.begin(), lexicon.end(), rng);

  std::vector<double> weights(config.vocabulary);
  for (std::size_t k = 0; k < config.vocabulary; ++k) {
    weights[k] = 1.0 / std::pow(static_cast<double>(k + 1), config.zipf);
  }
  std::discrete_distribution<std::size_t> word(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> length(config.min_length, config.max_length);
  std::uniform_int_distribution<std::size_t> filler(0, std::max<std::size_t>(1, config.vocabulary / 10) - 1);
  std::bernoulli_distribution swap(config.swap_prob);
  std::bernoulli_distribution insert(config.null_rate);

  SynthCorpus corpus;
  corpus.pairs.reserve(config.pairs);
  corpus.gold.reserve(config.pairs);
  for (std::size_t p = 0; p < config.pairs; ++p) {
    const std::size_t n = length(rng);
    RawPair pair;
    std::vector<std::size_t> source_words(n);
    std::vector<std::size_t> origin(n);  // target position of each source word
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t w = word(rng);
      pair.target.push_back("t" + std::to_string(w));
      source_words[i] = lexicon[w];
      origin[i] = i;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (swap(rng)) {
        std::swap(source_words[k], source_words[k + 1]);
        std::swap(origin[k], origin[k + 1]);
      }
    }
    std::vector<Link> links;
    for (std::size_t k = 0; k < n; ++k) {
      links.push_back({static_cast<std::uint32_t>(pair.source.size()),
                       static_cast<std::uint32_t>(origin[k])});
      pair.source.push_back("s" + std::to_string(source_words[k]));
      if (insert(rng)) pair.source.push_back("x" + std::to_string(filler(rng)));
    }
    corpus.gold.emplace_back(pair.source.size(), n, std::move(links));
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

}  // namespace alignkit
