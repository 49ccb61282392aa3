#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"

namespace alignkit {

/// Synthetic parallel corpus generator with known alignments.
///
/// Target sentences draw words from a Zipfian distribution; each target word
/// is translated through a random one-to-one lexicon, adjacent source words
/// are swapped with probability `swap_prob` (one left-to-right sweep), and
/// after each source word an unaligned filler word is inserted with
/// probability `null_rate`.
struct SynthConfig {
  std::size_t pairs = 1000;
  std::size_t vocabulary = 500;
  std::size_t min_length = 4;
  std::size_t max_length = 12;
  double swap_prob = 0.1;
  double null_rate = 0.05;
  /// Exponent of the Zipfian word distribution; 0 is uniform.
  double zipf = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthCorpus {
  std::vector<RawPair> pairs;
  /// Gold links (source position, target position) per pair.
  std::vector<AlignmentSet> gold;
};

SynthCorpus generate_synthetic(const SynthConfig& config);

}  // namespace alignkit
