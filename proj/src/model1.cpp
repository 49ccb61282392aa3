#include "alignkit/model1.hpp"

#include <cmath>

#include "alignkit/error.hpp"
#include "lexical_em.hpp"

namespace alignkit {

void Model1Config::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be > 0");
  if (!(floor > 0.0) || floor >= 1.0) throw ConfigError("floor must be in (0, 1)");
}

namespace model1 {
namespace {

detail::LexicalModel lexical(const TranslationTable& table, bool use_null, double epsilon,
                             double floor) {
  return detail::LexicalModel{&table, use_null, epsilon, floor, {}};
}

}  // namespace

TranslationTable init_uniform(const Bitext& bitext, bool use_null) {
  if (bitext.empty()) throw ConfigError("cannot initialize a model from an empty bitext");
  return TranslationTable::from_cooccurrence(bitext, use_null);
}

EmStep em_step(const Bitext& bitext, const TranslationTable& table, const Model1Config& config) {
  const auto model = lexical(table, config.use_null, config.epsilon, config.floor);
  auto estep = detail::lexical_e_step(bitext, model, config.threads);
  EmStep out{table, estep.log_likelihood};
  out.table.normalize_counts(estep.counts, config.floor);
  return out;
}

TrainedTable train(const Bitext& bitext, const Model1Config& config) {
  config.validate();
  TrainedTable out{init_uniform(bitext, config.use_null), {}};
  out.log_likelihoods.reserve(config.iterations);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    auto step = em_step(bitext, out.table, config);
    out.table = std::move(step.table);
    out.log_likelihoods.push_back(step.log_likelihood);
  }
  return out;
}

std::vector<double> posteriors(const SentencePair& pair, const TranslationTable& table,
                               const Model1Config& config) {
  return detail::lexical_posteriors(lexical(table, config.use_null, config.epsilon, config.floor),
                                    pair);
}

AlignmentFunction posterior_align(const SentencePair& pair, const TranslationTable& table,
                                  bool use_null, double floor) {
  return detail::lexical_argmax(lexical(table, use_null, 1.0, floor), pair);
}

double sentence_log_prob(const SentencePair& pair, const TranslationTable& table,
                         const Model1Config& config) {
  return detail::lexical_log_prob(lexical(table, config.use_null, config.epsilon, config.floor),
                                  pair);
}

}  // namespace model1
}  // namespace alignkit
