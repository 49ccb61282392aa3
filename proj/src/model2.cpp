#include "alignkit/model2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alignkit/error.hpp"
#include "lexical_em.hpp"

namespace alignkit {

void DiagonalPrior::validate() const {
  if (!(tension >= 0.0) || !std::isfinite(tension)) throw ConfigError("tension must be >= 0");
  if (!(null_prob >= 0.0 && null_prob < 1.0)) throw ConfigError("null probability must be in [0, 1)");
}

namespace model2 {
namespace {

double diagonal_score(std::size_t j, std::size_t i, std::size_t m, std::size_t n) {
  return -std::abs(static_cast<double>(j) / static_cast<double>(m) -
                   static_cast<double>(i) / static_cast<double>(n));
}

detail::LexicalModel lexical(const Model2Params& params, double epsilon, double floor) {
  const DiagonalPrior prior = params.prior;
  const bool use_null = params.use_null;
  return detail::LexicalModel{
      &params.table, use_null, epsilon, floor,
      [prior, use_null](std::size_t j, std::size_t m, std::size_t n, std::span<double> out) {
        prior_row(j, m, n, prior, use_null, out);
      }};
}

}  // namespace

void prior_row(std::size_t j, std::size_t m, std::size_t n, const DiagonalPrior& prior,
               bool use_null, std::span<double> out) {
  if (m == 0 || n == 0 || j < 1 || j > m) {
    throw DimensionError("prior position j=" + std::to_string(j) + " outside 1.." +
                         std::to_string(m));
  }
  if (out.size() != n + (use_null ? 1 : 0)) throw DimensionError("prior row has the wrong size");

  // Softmax shifted by its maximum so large tensions cannot underflow to 0/0.
  double best = -1.0;
  for (std::size_t i = 1; i <= n; ++i) best = std::max(best, diagonal_score(j, i, m, n));
  double z = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    out[i - 1] = std::exp(prior.tension * (diagonal_score(j, i, m, n) - best));
    z += out[i - 1];
  }
  const double p0 = use_null ? prior.null_prob : 0.0;
  const double mass = (1.0 - p0) / z;
  for (std::size_t i = 0; i < n; ++i) out[i] *= mass;
  if (use_null) out[n] = p0;
}

double prior_prob(std::size_t j, std::size_t i, std::size_t m, std::size_t n,
                  const DiagonalPrior& prior) {
  if (i > n) {
    throw DimensionError("prior target i=" + std::to_string(i) + " outside 0.." + std::to_string(n));
  }
  std::vector<double> row(n + 1);
  prior_row(j, m, n, prior, true, row);
  return i == 0 ? row[n] : row[i - 1];
}

Model2Step em_step(const Bitext& bitext, const Model2Params& params, const Model1Config& config) {
  params.prior.validate();
  const auto model = lexical(params, config.epsilon, config.floor);
  auto estep = detail::lexical_e_step(bitext, model, config.threads);
  Model2Step out{params, estep.log_likelihood};
  out.params.table.normalize_counts(estep.counts, config.floor);
  return out;
}

TrainedModel2 train(const Bitext& bitext, const Model2Config& config) {
  config.lexical.validate();
  config.prior.validate();
  TrainedModel2 out{
      Model2Params{model1::init_uniform(bitext, config.lexical.use_null), config.prior,
                   config.lexical.use_null},
      {}};
  out.log_likelihoods.reserve(config.lexical.iterations);
  for (std::size_t it = 0; it < config.lexical.iterations; ++it) {
    auto step = em_step(bitext, out.params, config.lexical);
    out.params = std::move(step.params);
    out.log_likelihoods.push_back(step.log_likelihood);
  }
  return out;
}

std::vector<double> posteriors(const SentencePair& pair, const Model2Params& params, double floor) {
  return detail::lexical_posteriors(lexical(params, 1.0, floor), pair);
}

AlignmentFunction align(const SentencePair& pair, const Model2Params& params, double floor) {
  return detail::lexical_argmax(lexical(params, 1.0, floor), pair);
}

double sentence_log_prob(const SentencePair& pair, const Model2Params& params,
                         const Model1Config& config) {
  return detail::lexical_log_prob(lexical(params, config.epsilon, config.floor), pair);
}

}  // namespace model2
}  // namespace alignkit
