#include "lexical_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alignkit/alignment.hpp"
#include "alignkit/error.hpp"
#include "alignkit/kernels.hpp"
#include "alignkit/parallel.hpp"

namespace alignkit::detail {
namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

double uniform_log_prior(const LexicalModel& model, const SentencePair& pair) {
  if (model.prior) return 0.0;
  const double cells = static_cast<double>(cell_count(pair.target.size(), model.use_null));
  return -static_cast<double>(pair.source.size()) * std::log(cells);
}

}  // namespace

void fill_weights(const LexicalModel& model, const SentencePair& pair, double fallback,
                  std::vector<double>& weights, std::vector<std::size_t>* slots) {
  const std::size_t m = pair.source.size();
  const std::size_t n = pair.target.size();
  const std::size_t cells = cell_count(n, model.use_null);
  weights.resize(m * cells);
  if (slots != nullptr) slots->resize(m * cells);

  const TranslationTable& table = *model.table;
  for (std::size_t j = 0; j < m; ++j) {
    double* row = weights.data() + j * cells;
    for (std::size_t c = 0; c < cells; ++c) {
      const auto slot = table.slot(cell_row(pair, c), pair.source[j]);
      row[c] = slot ? table.probs()[*slot] : fallback;
      if (slots != nullptr) (*slots)[j * cells + c] = slot ? *slot : kNoSlot;
    }
    if (model.prior) {
      thread_local std::vector<double> prior_row;
      prior_row.resize(cells);
      model.prior(j + 1, m, n, prior_row);
      kernels::multiply({row, cells}, {row, cells}, prior_row);
    }
  }
}

LexicalEStep lexical_e_step(const Bitext& bitext, const LexicalModel& model, unsigned threads) {
  const std::size_t entries = model.table->entry_count();
  auto partial = parallel_chunks(
      bitext.pairs.size(), threads,
      [&] { return LexicalEStep{std::vector<double>(entries, 0.0), 0.0}; },
      [&](LexicalEStep& acc, std::size_t begin, std::size_t end) {
        std::vector<double> weights;
        std::vector<std::size_t> slots;
        for (std::size_t p = begin; p < end; ++p) {
          const SentencePair& pair = bitext.pairs[p];
          fill_weights(model, pair, model.floor, weights, &slots);
          const std::size_t cells = cell_count(pair.target.size(), model.use_null);
          double pair_ll = std::log(model.epsilon) + uniform_log_prior(model, pair);
          for (std::size_t j = 0; j < pair.source.size(); ++j) {
            const std::span<double> row(weights.data() + j * cells, cells);
            const double total = kernels::sum(row);
            if (!(total > 0.0) || !std::isfinite(total)) {
              throw NumericError("pair " + std::to_string(p + 1) + ": source position " +
                                 std::to_string(j + 1) + " has no probability mass");
            }
            pair_ll += std::log(total);
            kernels::scale(row, 1.0 / total);
            const std::size_t* row_slots = slots.data() + j * cells;
            for (std::size_t c = 0; c < cells; ++c) {
              if (row_slots[c] != kNoSlot) acc.counts[row_slots[c]] += row[c];
            }
          }
          acc.log_likelihood += pair_ll;
        }
      });

  LexicalEStep merged = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) {
    kernels::axpy(1.0, partial[w].counts, merged.counts);
    merged.log_likelihood += partial[w].log_likelihood;
  }
  return merged;
}

std::vector<double> lexical_posteriors(const LexicalModel& model, const SentencePair& pair) {
  std::vector<double> weights;
  fill_weights(model, pair, model.floor, weights, nullptr);
  const std::size_t cells = cell_count(pair.target.size(), model.use_null);
  for (std::size_t j = 0; j < pair.source.size(); ++j) {
    const std::span<double> row(weights.data() + j * cells, cells);
    const double total = kernels::sum(row);
    if (total > 0.0) kernels::scale(row, 1.0 / total);
  }
  return weights;
}

double lexical_log_prob(const LexicalModel& model, const SentencePair& pair) {
  std::vector<double> weights;
  fill_weights(model, pair, model.floor, weights, nullptr);
  const std::size_t cells = cell_count(pair.target.size(), model.use_null);
  double ll = std::log(model.epsilon) + uniform_log_prior(model, pair);
  for (std::size_t j = 0; j < pair.source.size(); ++j) {
    const double total = kernels::sum({weights.data() + j * cells, cells});
    ll += std::log(std::max(total, std::numeric_limits<double>::min()));
  }
  return ll;
}

AlignmentFunction lexical_argmax(const LexicalModel& model, const SentencePair& pair) {
  std::vector<double> weights;
  fill_weights(model, pair, model.floor, weights, nullptr);
  const std::size_t n = pair.target.size();
  const std::size_t cells = cell_count(n, model.use_null);
  AlignmentFunction out(pair.source.size(), n);
  for (std::size_t j = 0; j < pair.source.size(); ++j) {
    const std::size_t best = kernels::argmax({weights.data() + j * cells, cells});
    if (best < n) out.set(j, static_cast<std::uint32_t>(best));
  }
  return out;
}

}  // namespace alignkit::detail
