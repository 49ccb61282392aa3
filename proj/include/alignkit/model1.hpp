#pragma once

#include <cstddef>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"
#include "alignkit/ttable.hpp"

namespace alignkit {

inline constexpr double kDefaultFloor = 1e-12;

struct Model1Config {
  std::size_t iterations = 5;
  bool use_null = true;
  /// Constant standing in for the source-length probability Pr(m|n).
  double epsilon = 1.0;
  /// Lower bound applied to expected counts before normalization and to
  /// unseen (e, f) pairs at decode time.
  double floor = kDefaultFloor;
  /// Data-parallel workers; 0 = hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct EmStep {
  TranslationTable table;
  /// Corpus log-likelihood under the input parameters.
  double log_likelihood = 0.0;
};

struct TrainedTable {
  TranslationTable table;
  /// One entry per EM iteration, evaluated before that iteration's M-step.
  std::vector<double> log_likelihoods;
};

namespace model1 {

/// t(.|e) uniform over the source ids co-occurring with e; NULL co-occurs
/// with every source id of the bitext. Throws ConfigError on an empty bitext.
TranslationTable init_uniform(const Bitext& bitext, bool use_null);

/// One EM iteration. Throws NumericError when a source token has no
/// probability mass under the input table.
EmStep em_step(const Bitext& bitext, const TranslationTable& table, const Model1Config& config);

TrainedTable train(const Bitext& bitext, const Model1Config& config);

/// Per-position posteriors, row-major m x cells where cells = n (+1 for NULL,
/// stored last when use_null is set).
std::vector<double> posteriors(const SentencePair& pair, const TranslationTable& table,
                               const Model1Config& config);

/// a_j = argmax_i t(f_j|e_i); ties go to the smaller target position and NULL
/// loses every tie.
AlignmentFunction posterior_align(const SentencePair& pair, const TranslationTable& table,
                                  bool use_null, double floor = kDefaultFloor);

/// log eps - m log(n [+1]) + sum_j log sum_i t(f_j|e_i), floored lookups.
double sentence_log_prob(const SentencePair& pair, const TranslationTable& table,
                         const Model1Config& config);

}  // namespace model1
}  // namespace alignkit
