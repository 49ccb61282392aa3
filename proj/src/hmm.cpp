#include "alignkit/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "alignkit/error.hpp"
#include "alignkit/kernels.hpp"
#include "alignkit/parallel.hpp"

namespace alignkit {

JumpTable JumpTable::uniform(std::size_t width, double null_prob) {
  JumpTable table;
  table.width = width;
  table.null_prob = null_prob;
  table.probs.assign(2 * width + 1, 1.0 / static_cast<double>(2 * width + 1));
  return table;
}

std::size_t JumpTable::bucket(long jump) const {
  const long w = static_cast<long>(width);
  return static_cast<std::size_t>(std::clamp(jump, -w, w) + w);
}

void JumpTable::validate() const {
  if (probs.size() != 2 * width + 1) throw ConfigError("jump table must have 2w+1 buckets");
  for (const double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("jump probabilities must be >= 0");
  }
  if (!(null_prob >= 0.0 && null_prob < 1.0)) throw ConfigError("null probability must be in [0, 1)");
}

void HmmConfig::validate() const {
  if (!(null_prob >= 0.0 && null_prob < 1.0)) throw ConfigError("null probability must be in [0, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be > 0");
  if (!(floor > 0.0) || floor >= 1.0) throw ConfigError("floor must be in (0, 1)");
}

Model1Config HmmConfig::model1_config() const {
  Model1Config c;
  c.iterations = model1_iterations;
  c.use_null = use_null;
  c.epsilon = epsilon;
  c.floor = floor;
  c.threads = threads;
  return c;
}

namespace hmm {
namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

// Dense per-pair quantities. Word emissions occupy columns 0..n-1 and the NULL
// emission column n of an m x (n+1) matrix.
struct Lattice {
  std::size_t m = 0;
  std::size_t n = 0;
  bool use_null = false;
  double stay = 0.0;  // p0, or 0 without NULL
  double move = 1.0;  // 1 - stay
  std::vector<double> emit;
  std::vector<std::size_t> slots;
  std::vector<double> jump;  // n x n, jump[i * n + r] = J(i - r)

  std::size_t states() const { return use_null ? 2 * n : n; }
  const double* emit_row(std::size_t j) const { return emit.data() + j * (n + 1); }
  std::span<const double> jump_row(std::size_t i) const { return {jump.data() + i * n, n}; }
};

void build_lattice(const SentencePair& pair, const HmmParams& params, double floor,
                   bool with_slots, Lattice& lat) {
  lat.m = pair.source.size();
  lat.n = pair.target.size();
  lat.use_null = params.use_null;
  lat.stay = params.use_null ? params.jumps.null_prob : 0.0;
  lat.move = 1.0 - lat.stay;
  const std::size_t m = lat.m;
  const std::size_t n = lat.n;
  lat.emit.assign(m * (n + 1), 0.0);
  if (with_slots) lat.slots.assign(m * (n + 1), kNoSlot);

  const TranslationTable& table = params.table;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t c = 0; c <= n; ++c) {
      if (c == n && !params.use_null) continue;
      const TargetRow row = c < n ? row_of(pair.target[c]) : kNullRow;
      const auto slot = table.slot(row, pair.source[j]);
      lat.emit[j * (n + 1) + c] = slot ? table.probs()[*slot] : floor;
      if (with_slots && slot) lat.slots[j * (n + 1) + c] = *slot;
    }
  }

  // Each origin column renormalized over the n positions that exist.
  lat.jump.resize(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lat.jump[i * n + r] = params.jumps.prob(static_cast<long>(i) - static_cast<long>(r));
      z += lat.jump[i * n + r];
    }
    for (std::size_t i = 0; i < n; ++i) lat.jump[i * n + r] /= z;
  }
}

double checked_log(double scale, std::size_t j) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw NumericError("source position " + std::to_string(j + 1) + " has no probability mass");
  }
  return std::log(scale);
}

// Combined mass per remembered position: word state r plus its NULL companion.
void remembered_mass(const Lattice& lat, std::span<const double> prev, std::span<double> out) {
  for (std::size_t r = 0; r < lat.n; ++r) out[r] = prev[r] + (lat.use_null ? prev[lat.n + r] : 0.0);
}

// Scaled forward pass; alpha is m x states, rows normalized. Returns log Z.
double forward(const Lattice& lat, std::vector<double>& alpha) {
  const std::size_t m = lat.m;
  const std::size_t n = lat.n;
  const std::size_t S = lat.states();
  alpha.assign(m * S, 0.0);
  std::vector<double> mass(n);

  double log_z = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::span<double> cur(alpha.data() + j * S, S);
    const double* e = lat.emit_row(j);
    if (j == 0) {
      for (std::size_t i = 0; i < n; ++i) cur[i] = lat.move / static_cast<double>(n) * e[i];
      if (lat.use_null) {
        for (std::size_t r = 0; r < n; ++r) cur[n + r] = lat.stay / static_cast<double>(n) * e[n];
      }
    } else {
      remembered_mass(lat, {alpha.data() + (j - 1) * S, S}, mass);
      for (std::size_t i = 0; i < n; ++i) {
        cur[i] = lat.move * e[i] * kernels::dot(lat.jump_row(i), mass);
      }
      if (lat.use_null) {
        for (std::size_t r = 0; r < n; ++r) cur[n + r] = lat.stay * e[n] * mass[r];
      }
    }
    const double c = kernels::sum(cur);
    log_z += checked_log(c, j);
    kernels::scale(cur, 1.0 / c);
  }
  return log_z;
}

// Scaled backward pass with its own scale factors. Returns log Z.
double backward(const Lattice& lat, std::vector<double>& beta) {
  const std::size_t m = lat.m;
  const std::size_t n = lat.n;
  const std::size_t S = lat.states();
  beta.assign(m * S, 1.0);
  std::vector<double> weighted(n);
  std::vector<double> into(n);

  double log_scales = 0.0;
  for (std::size_t j = m - 1; j-- > 0;) {
    const std::span<const double> next(beta.data() + (j + 1) * S, S);
    const double* e = lat.emit_row(j + 1);
    kernels::multiply(weighted, {e, n}, next.first(n));
    std::fill(into.begin(), into.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) kernels::axpy(weighted[i], lat.jump_row(i), into);

    const std::span<double> cur(beta.data() + j * S, S);
    for (std::size_t r = 0; r < n; ++r) {
      const double b = lat.move * into[r] + (lat.use_null ? lat.stay * e[n] * next[n + r] : 0.0);
      cur[r] = b;
      if (lat.use_null) cur[n + r] = b;
    }
    const double d = kernels::sum(cur);
    log_scales += checked_log(d, j);
    kernels::scale(cur, 1.0 / d);
  }

  const double* e0 = lat.emit_row(0);
  double start = 0.0;
  for (std::size_t i = 0; i < n; ++i) start += lat.move / static_cast<double>(n) * e0[i] * beta[i];
  if (lat.use_null) {
    for (std::size_t r = 0; r < n; ++r) {
      start += lat.stay / static_cast<double>(n) * e0[n] * beta[n + r];
    }
  }
  return checked_log(start, 0) + log_scales;
}

struct Workspace {
  Lattice lat;
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Fills posteriors from a lattice whose alpha/beta are already computed.
void collect_posteriors(const Workspace& ws, HmmPosteriors& out, std::size_t width) {
  const Lattice& lat = ws.lat;
  const std::size_t m = lat.m;
  const std::size_t n = lat.n;
  const std::size_t S = lat.states();
  out.source_length = m;
  out.target_length = n;
  out.state_count = S;
  out.states.resize(m * S);
  for (std::size_t j = 0; j < m; ++j) {
    const std::span<double> row(out.states.data() + j * S, S);
    kernels::multiply(row, {ws.alpha.data() + j * S, S}, {ws.beta.data() + j * S, S});
    const double total = kernels::sum(row);
    kernels::scale(row, 1.0 / total);
  }

  out.transitions.assign(m > 1 ? (m - 1) * n * n : 0, 0.0);
  out.null_transitions.assign(m > 1 ? (m - 1) * n : 0, 0.0);
  out.jump_counts.assign(2 * width + 1, 0.0);
  out.origin_counts.assign(n, 0.0);
  std::vector<double> mass(n);
  std::vector<double> weighted(n);
  for (std::size_t j = 1; j < m; ++j) {
    remembered_mass(lat, {ws.alpha.data() + (j - 1) * S, S}, mass);
    const double* e = lat.emit_row(j);
    const double* b = ws.beta.data() + j * S;
    kernels::multiply(weighted, {e, n}, {b, n});

    double* xi = out.transitions.data() + (j - 1) * n * n;
    double* xi_null = out.null_transitions.data() + (j - 1) * n;
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        xi[r * n + i] = mass[r] * lat.move * lat.jump[i * n + r] * weighted[i];
      }
      total += kernels::sum({xi + r * n, n});
      if (lat.use_null) {
        xi_null[r] = mass[r] * lat.stay * e[n] * b[n + r];
        total += xi_null[r];
      }
    }
    kernels::scale({xi, n * n}, 1.0 / total);
    if (lat.use_null) kernels::scale({xi_null, n}, 1.0 / total);
    const long w = static_cast<long>(width);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        const long d = std::clamp(static_cast<long>(i) - static_cast<long>(r), -w, w);
        out.jump_counts[static_cast<std::size_t>(d + w)] += xi[r * n + i];
      }
      out.origin_counts[r] += kernels::sum({xi + r * n, n});
    }
  }
}

struct BaumWelchAcc {
  std::vector<double> counts;
  JumpStatistics jumps;
  double log_likelihood = 0.0;
};

void add_into(std::vector<double>& to, std::span<const double> from) {
  if (to.size() < from.size()) to.resize(from.size(), 0.0);
  kernels::axpy(1.0, from, {to.data(), from.size()});
}

// sum_{i<n} J(i - r)
double origin_mass(const JumpTable& jumps, std::size_t r, std::size_t n) {
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += jumps.prob(static_cast<long>(i) - static_cast<long>(r));
  return z;
}

double jump_objective(const JumpStatistics& stats, const JumpTable& jumps) {
  double v = 0.0;
  for (std::size_t d = 0; d < jumps.probs.size(); ++d) {
    if (stats.buckets[d] > 0.0) v += stats.buckets[d] * std::log(jumps.probs[d]);
  }
  for (std::size_t n = 1; n < stats.contexts.size(); ++n) {
    for (std::size_t r = 0; r < stats.contexts[n].size(); ++r) {
      const double c = stats.contexts[n][r];
      if (c > 0.0) v -= c * std::log(origin_mass(jumps, r, n));
    }
  }
  return v;
}

}  // namespace

double log_forward(const SentencePair& pair, const HmmParams& params, double floor) {
  Lattice lat;
  build_lattice(pair, params, floor, false, lat);
  std::vector<double> alpha;
  return forward(lat, alpha);
}

HmmPosteriors forward_backward(const SentencePair& pair, const HmmParams& params, double floor) {
  Workspace ws;
  build_lattice(pair, params, floor, false, ws.lat);
  HmmPosteriors out;
  out.log_z_forward = forward(ws.lat, ws.alpha);
  out.log_z_backward = backward(ws.lat, ws.beta);
  collect_posteriors(ws, out, params.jumps.width);
  return out;
}

double transition_prob(const JumpTable& jumps, std::size_t i, std::size_t r, std::size_t n) {
  if (i >= n || r >= n) throw DimensionError("transition position out of range");
  return jumps.prob(static_cast<long>(i) - static_cast<long>(r)) / origin_mass(jumps, r, n);
}

// Minorizing -log Z by its tangent at the current table gives the closed-form
// update J(d) = N(d) / sum_ctx M(ctx) c_d(ctx) / Z_ctx, where c_d counts the
// positions of the context falling into bucket d.
JumpTable maximize_jumps(const JumpStatistics& stats, const JumpTable& current, double floor,
                         std::size_t max_steps) {
  const std::size_t buckets = current.probs.size();
  if (stats.buckets.size() != buckets) throw DimensionError("jump statistics do not match the table");
  auto finish = [&](JumpTable& t) {
    double total = 0.0;
    for (double& p : t.probs) {
      p = std::max(p, floor);
      total += p;
    }
    for (double& p : t.probs) p /= total;
  };

  JumpTable best = current;
  finish(best);
  double best_value = jump_objective(stats, best);
  JumpTable cur = best;
  std::vector<double> denom(buckets);
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::fill(denom.begin(), denom.end(), 0.0);
    for (std::size_t n = 1; n < stats.contexts.size(); ++n) {
      for (std::size_t r = 0; r < stats.contexts[n].size(); ++r) {
        const double c = stats.contexts[n][r];
        if (!(c > 0.0)) continue;
        const double w = c / origin_mass(cur, r, n);
        for (std::size_t i = 0; i < n; ++i) {
          denom[cur.bucket(static_cast<long>(i) - static_cast<long>(r))] += w;
        }
      }
    }
    JumpTable next = cur;
    for (std::size_t d = 0; d < buckets; ++d) {
      if (denom[d] > 0.0) next.probs[d] = stats.buckets[d] / denom[d];
    }
    finish(next);
    const double value = jump_objective(stats, next);
    // Flooring can cost a hair of objective; never hand back a worse table.
    if (!(value > best_value)) break;
    const bool settled = value - best_value <= 1e-12 * std::max(1.0, std::fabs(value));
    best = next;
    best_value = value;
    cur = std::move(next);
    if (settled) break;
  }
  return best;
}

HmmStep baum_welch_step(const Bitext& bitext, const HmmParams& params, const HmmConfig& config) {
  params.jumps.validate();
  const std::size_t buckets = params.jumps.probs.size();
  const double log_eps = std::log(config.epsilon);
  auto partial = parallel_chunks(
      bitext.pairs.size(), config.threads,
      [&] {
        return BaumWelchAcc{std::vector<double>(params.table.entry_count(), 0.0),
                            JumpStatistics{std::vector<double>(buckets, 0.0), {}}, 0.0};
      },
      [&](BaumWelchAcc& acc, std::size_t begin, std::size_t end) {
        Workspace ws;
        HmmPosteriors post;
        for (std::size_t p = begin; p < end; ++p) {
          const SentencePair& pair = bitext.pairs[p];
          build_lattice(pair, params, config.floor, true, ws.lat);
          double log_z = 0.0;
          try {
            log_z = forward(ws.lat, ws.alpha);
            backward(ws.lat, ws.beta);
          } catch (const NumericError& e) {
            throw NumericError("pair " + std::to_string(p + 1) + ": " + e.what());
          }
          collect_posteriors(ws, post, params.jumps.width);
          acc.log_likelihood += log_eps + log_z;

          const std::size_t n = ws.lat.n;
          const std::size_t S = ws.lat.states();
          for (std::size_t j = 0; j < ws.lat.m; ++j) {
            const double* g = post.states.data() + j * S;
            const std::size_t* slots = ws.lat.slots.data() + j * (n + 1);
            for (std::size_t i = 0; i < n; ++i) {
              if (slots[i] != kNoSlot) acc.counts[slots[i]] += g[i];
            }
            if (ws.lat.use_null && slots[n] != kNoSlot) {
              acc.counts[slots[n]] += kernels::sum({g + n, n});
            }
          }
          kernels::axpy(1.0, post.jump_counts, acc.jumps.buckets);
          if (acc.jumps.contexts.size() <= n) acc.jumps.contexts.resize(n + 1);
          add_into(acc.jumps.contexts[n], post.origin_counts);
        }
      });

  BaumWelchAcc merged = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) {
    kernels::axpy(1.0, partial[w].counts, merged.counts);
    kernels::axpy(1.0, partial[w].jumps.buckets, merged.jumps.buckets);
    auto& ctx = merged.jumps.contexts;
    if (ctx.size() < partial[w].jumps.contexts.size()) ctx.resize(partial[w].jumps.contexts.size());
    for (std::size_t n = 0; n < partial[w].jumps.contexts.size(); ++n) {
      add_into(ctx[n], partial[w].jumps.contexts[n]);
    }
    merged.log_likelihood += partial[w].log_likelihood;
  }

  HmmStep out{params, merged.log_likelihood};
  out.params.table.normalize_counts(merged.counts, config.floor);
  out.params.jumps = maximize_jumps(merged.jumps, params.jumps, config.floor);
  return out;
}

TrainedHmm train(const Bitext& bitext, const HmmConfig& config) {
  config.validate();
  TrainedHmm out;
  out.params.use_null = config.use_null;
  if (config.model1_iterations > 0) {
    auto m1 = model1::train(bitext, config.model1_config());
    out.params.table = std::move(m1.table);
    out.model1_log_likelihoods = std::move(m1.log_likelihoods);
  } else {
    out.params.table = model1::init_uniform(bitext, config.use_null);
  }
  out.params.jumps = JumpTable::uniform(config.width, config.null_prob);
  out.log_likelihoods.reserve(config.iterations);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    auto step = baum_welch_step(bitext, out.params, config);
    out.params = std::move(step.params);
    out.log_likelihoods.push_back(step.log_likelihood);
  }
  return out;
}

namespace {

// Paths that are equal in exact arithmetic can come out an ulp apart once
// their factors are multiplied in a different order; treat such scores as
// tied so the smaller-index rule decides instead of rounding.
constexpr double kTieTolerance = 1e-12;

std::size_t first_near_max(std::span<const double> v) {
  const std::size_t top = kernels::argmax(v);
  const double bar = v[top] * (1.0 - kTieTolerance);
  for (std::size_t k = 0; k < top; ++k) {
    if (v[k] >= bar) return k;
  }
  return top;
}

}  // namespace

ViterbiResult viterbi(const SentencePair& pair, const HmmParams& params, double floor) {
  Lattice lat;
  build_lattice(pair, params, floor, false, lat);
  const std::size_t m = lat.m;
  const std::size_t n = lat.n;
  const std::size_t S = lat.states();

  std::vector<double> delta(S);
  std::vector<double> next(S);
  std::vector<std::size_t> back(m * S, 0);  // predecessor state
  std::vector<double> best_prev(n);
  std::vector<std::size_t> best_prev_state(n);
  std::vector<double> scratch(n);
  double log_scale = 0.0;

  const double* e0 = lat.emit_row(0);
  for (std::size_t i = 0; i < n; ++i) delta[i] = lat.move / static_cast<double>(n) * e0[i];
  if (lat.use_null) {
    for (std::size_t r = 0; r < n; ++r) delta[n + r] = lat.stay / static_cast<double>(n) * e0[n];
  }
  auto rescale = [&](std::span<double> v, std::size_t j) {
    const double top = v[kernels::argmax(v)];
    log_scale += checked_log(top, j);
    kernels::scale(v, 1.0 / top);
  };
  rescale(delta, 0);

  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      const bool from_null = lat.use_null && delta[n + r] * (1.0 - kTieTolerance) > delta[r];
      best_prev[r] = from_null ? delta[n + r] : delta[r];
      best_prev_state[r] = from_null ? n + r : r;
    }
    const double* e = lat.emit_row(j);
    for (std::size_t i = 0; i < n; ++i) {
      kernels::multiply(scratch, lat.jump_row(i), best_prev);
      const std::size_t r = first_near_max(scratch);
      next[i] = lat.move * e[i] * scratch[r];
      back[j * S + i] = best_prev_state[r];
    }
    if (lat.use_null) {
      for (std::size_t r = 0; r < n; ++r) {
        next[n + r] = lat.stay * e[n] * best_prev[r];
        back[j * S + n + r] = best_prev_state[r];
      }
    }
    delta.swap(next);
    rescale(delta, j);
  }

  std::size_t state = first_near_max(delta);
  ViterbiResult out{AlignmentFunction(m, n), log_scale + std::log(delta[state])};
  for (std::size_t j = m; j-- > 0;) {
    if (state < n) out.alignment.set(j, static_cast<std::uint32_t>(state));
    state = back[j * S + state];
  }
  return out;
}

}  // namespace hmm
}  // namespace alignkit
