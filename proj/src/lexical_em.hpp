#pragma once

// E-step machinery shared by Model 1 and the diagonal Model 2. Both are
// "independent position" models: each source word picks a target cell
// independently, weighted by an optional per-position prior.

#include <functional>
#include <span>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"
#include "alignkit/ttable.hpp"

namespace alignkit::detail {

/// Fills out[c] (cells = n [+1 NULL]) with the prior for 1-based source
/// position j. An empty function means the uniform prior, folded into the
/// likelihood as -m log(cells).
using PriorRow =
    std::function<void(std::size_t j, std::size_t m, std::size_t n, std::span<double> out)>;

struct LexicalModel {
  const TranslationTable* table = nullptr;
  bool use_null = true;
  double epsilon = 1.0;
  double floor = 1e-12;
  PriorRow prior;
};

inline std::size_t cell_count(std::size_t n, bool use_null) { return n + (use_null ? 1 : 0); }

inline TargetRow cell_row(const SentencePair& pair, std::size_t cell) {
  return cell < pair.target.size() ? row_of(pair.target[cell]) : kNullRow;
}

/// Unnormalized weights w_c = prior_c * t(f_j | cell c) for one pair, row-major
/// m x cells. Lookups of unstored pairs use `fallback`. slots (optional)
/// receives the table slot of each cell or SIZE_MAX.
void fill_weights(const LexicalModel& model, const SentencePair& pair, double fallback,
                  std::vector<double>& weights, std::vector<std::size_t>* slots);

struct LexicalEStep {
  std::vector<double> counts;
  double log_likelihood = 0.0;
};

/// E-step over the whole bitext with a deterministic ordered merge.
LexicalEStep lexical_e_step(const Bitext& bitext, const LexicalModel& model, unsigned threads);

/// Normalized posteriors for a single pair (m x cells), with the same floor
/// treatment as decoding.
std::vector<double> lexical_posteriors(const LexicalModel& model, const SentencePair& pair);

/// Per-pair log-likelihood with floored lookups.
double lexical_log_prob(const LexicalModel& model, const SentencePair& pair);

/// argmax per source position; targets before NULL so NULL loses ties.
AlignmentFunction lexical_argmax(const LexicalModel& model, const SentencePair& pair);

}  // namespace alignkit::detail
