#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"
#include "alignkit/model1.hpp"
#include "alignkit/ttable.hpp"

namespace alignkit {

/// Diagonal alignment prior of the reparameterized Model 2:
///   p(NULL) = p0
///   p(i)    = (1 - p0) exp(tension * h(i)) / Z_j,  h(i) = -|j/m - i/n|
/// with 1-based j and i. Both hyperparameters are held fixed during EM.
struct DiagonalPrior {
  double tension = 4.0;
  double null_prob = 0.08;

  /// Throws ConfigError unless tension >= 0 and 0 <= null_prob < 1.
  void validate() const;
};

struct Model2Config {
  Model1Config lexical;
  DiagonalPrior prior;
};

struct Model2Params {
  TranslationTable table;
  DiagonalPrior prior;
  bool use_null = true;
};

struct Model2Step {
  Model2Params params;
  double log_likelihood = 0.0;
};

struct TrainedModel2 {
  Model2Params params;
  std::vector<double> log_likelihoods;
};

namespace model2 {

/// Prior for 1-based source position j and target i in 0..n (0 = NULL).
/// Throws DimensionError on out-of-range indices.
double prior_prob(std::size_t j, std::size_t i, std::size_t m, std::size_t n,
                  const DiagonalPrior& prior);

/// The whole prior row for position j: out[i-1] for targets, then out[n] =
/// NULL when use_null. Without NULL the row is the pure softmax (p0 = 0).
void prior_row(std::size_t j, std::size_t m, std::size_t n, const DiagonalPrior& prior,
               bool use_null, std::span<double> out);

Model2Step em_step(const Bitext& bitext, const Model2Params& params, const Model1Config& config);

TrainedModel2 train(const Bitext& bitext, const Model2Config& config);

/// Row-major m x cells posteriors (NULL last).
std::vector<double> posteriors(const SentencePair& pair, const Model2Params& params,
                               double floor = kDefaultFloor);

/// a_j = argmax_i p(i) t(f_j|e_i); NULL competes with mass p0 and loses ties.
AlignmentFunction align(const SentencePair& pair, const Model2Params& params,
                        double floor = kDefaultFloor);

double sentence_log_prob(const SentencePair& pair, const Model2Params& params,
                         const Model1Config& config);

}  // namespace model2
}  // namespace alignkit
