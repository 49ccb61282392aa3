#pragma once

#include <cstddef>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"
#include "alignkit/model1.hpp"
#include "alignkit/ttable.hpp"

namespace alignkit {

/// First-order jump distribution over target positions. Jumps d = i - i_prev
/// are bucketed into [-width, +width] (wider jumps clamp to the edge bucket).
/// The table itself sums to 1; a transition from position r in a sentence of
/// n target words uses J(i - r) / sum_{i'<n} J(i' - r), so every origin has a
/// proper distribution over the positions that exist.
struct JumpTable {
  std::size_t width = 5;
  /// Probability of entering the NULL companion state.
  double null_prob = 0.2;
  std::vector<double> probs;  // probs[d + width]

  static JumpTable uniform(std::size_t width, double null_prob);

  std::size_t bucket(long jump) const;
  double prob(long jump) const { return probs[bucket(jump)]; }

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const JumpTable&, const JumpTable&) = default;
};

struct HmmParams {
  TranslationTable table;
  JumpTable jumps;
  bool use_null = true;
};

struct HmmConfig {
  /// Baum-Welch iterations after initialization; 0 is allowed.
  std::size_t iterations = 5;
  /// Model 1 iterations used to initialize the lexicon; 0 keeps it uniform.
  std::size_t model1_iterations = 5;
  bool use_null = true;
  std::size_t width = 5;
  double null_prob = 0.2;
  double epsilon = 1.0;
  double floor = kDefaultFloor;
  unsigned threads = 0;

  void validate() const;
  Model1Config model1_config() const;
};

/// Posteriors of one sentence pair.
///
/// States are laid out per source position as n word states followed (with
/// NULL) by n NULL companions; companion r stands for "aligned to NULL, last
/// word state was r".
struct HmmPosteriors {
  std::size_t source_length = 0;
  std::size_t target_length = 0;
  std::size_t state_count = 0;
  /// m x state_count, each row sums to 1.
  std::vector<double> states;
  /// (m-1) x n x n: expected transitions from remembered position r (row) to
  /// word state i (column), indexed [(j-1) * n * n + r * n + i].
  std::vector<double> transitions;
  /// (m-1) x n: expected transitions from remembered r into NULL companion r.
  std::vector<double> null_transitions;
  /// Expected jump counts per bucket.
  std::vector<double> jump_counts;
  /// Expected transitions into word states out of remembered position r,
  /// summed over source positions.
  std::vector<double> origin_counts;
  double log_z_forward = 0.0;
  double log_z_backward = 0.0;
};

struct HmmStep {
  HmmParams params;
  double log_likelihood = 0.0;
};

struct TrainedHmm {
  HmmParams params;
  /// Model 1 initialization trace.
  std::vector<double> model1_log_likelihoods;
  /// One entry per Baum-Welch iteration.
  std::vector<double> log_likelihoods;
};

struct ViterbiResult {
  AlignmentFunction alignment;
  double log_prob = 0.0;
};

namespace hmm {

/// log of sum_a prod_j p(a_j | a_{j-1}) t(f_j | e_{a_j}) by the scaled forward
/// recursion. Unstored lexical pairs use `floor`.
double log_forward(const SentencePair& pair, const HmmParams& params,
                   double floor = kDefaultFloor);

HmmPosteriors forward_backward(const SentencePair& pair, const HmmParams& params,
                               double floor = kDefaultFloor);

/// p(word state i | remembered r) for a sentence with n target words,
/// before the (1 - p0) factor.
double transition_prob(const JumpTable& jumps, std::size_t i, std::size_t r, std::size_t n);

/// Expected counts gathered by the E-step for the jump M-step.
struct JumpStatistics {
  std::vector<double> buckets;  // expected jumps per bucket
  /// contexts[n][r]: expected transitions out of remembered r with n target words.
  std::vector<std::vector<double>> contexts;
};

/// Maximizes sum_d N(d) log J(d) - sum_{n,r} M(n,r) log sum_{i<n} J(i - r)
/// by minorize-maximize steps started at `current`; every step increases the
/// objective. Buckets are floored and the result renormalized.
JumpTable maximize_jumps(const JumpStatistics& stats, const JumpTable& current, double floor,
                         std::size_t max_steps = 50);

HmmStep baum_welch_step(const Bitext& bitext, const HmmParams& params, const HmmConfig& config);

TrainedHmm train(const Bitext& bitext, const HmmConfig& config);

/// Max-product path; backpointer ties go to the smaller target position and
/// word states win ties against NULL companions. Scores within a relative
/// 1e-12 of each other count as tied.
ViterbiResult viterbi(const SentencePair& pair, const HmmParams& params,
                      double floor = kDefaultFloor);

inline AlignmentFunction viterbi_decode(const SentencePair& pair, const HmmParams& params,
                                        double floor = kDefaultFloor) {
  return viterbi(pair, params, floor).alignment;
}

}  // namespace hmm
}  // namespace alignkit
