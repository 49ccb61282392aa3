#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "alignkit/error.hpp"
#include "alignkit/model1.hpp"
#include "oracles.hpp"

using namespace alignkit;

namespace {

Bitext toy() {
  const auto raw = oracle::toy_corpus();
  std::vector<std::vector<std::string>> s, t;
  for (const auto& p : raw) {
    s.push_back(p.source);
    t.push_back(p.target);
  }
  return encode_pairs(raw, build_vocabulary(s), build_vocabulary(t));
}

// t(f|e) by surface form; e == "" is NULL.
double prob(const TranslationTable& table, const Bitext& b, const std::string& f,
            const std::string& e) {
  const TargetRow row = e.empty() ? kNullRow : row_of(b.target_vocab.id(e));
  return table.prob_or(row, b.source_vocab.id(f), -1.0);
}

Bitext single(const std::string& f, const std::string& e) {
  const std::vector<RawPair> raw{{{f}, {e}}};
  return encode_pairs(raw, build_vocabulary(std::vector<std::vector<std::string>>{{f}}),
                      build_vocabulary(std::vector<std::vector<std::string>>{{e}}));
}

Model1Config config(bool use_null, std::size_t iters = 1) {
  Model1Config c;
  c.use_null = use_null;
  c.iterations = iters;
  c.threads = 1;
  return c;
}

void expect_rows_normalized(const TranslationTable& t, double tol = 1e-9) {
  for (TargetRow r = 0; r < t.row_count(); ++r) {
    if (t.row_size(r) == 0) continue;
    double s = 0.0;
    for (double p : t.row_probs(r)) s += p;
    EXPECT_NEAR(s, 1.0, tol) << "row " << r;
  }
}

}  // namespace

TEST(Model1Init, UniformOverCooccurrence) {
  const auto b = toy();
  const auto t = model1::init_uniform(b, false);
  for (const char* f : {"das", "haus", "buch"}) EXPECT_DOUBLE_EQ(prob(t, b, f, "the"), 1.0 / 3);
  EXPECT_DOUBLE_EQ(prob(t, b, "das", "house"), 0.5);
  EXPECT_DOUBLE_EQ(prob(t, b, "haus", "house"), 0.5);
  EXPECT_EQ(prob(t, b, "buch", "house"), -1.0);  // never co-occur: not stored
  EXPECT_FALSE(t.has_null());

  const auto tn = model1::init_uniform(b, true);
  for (const char* f : {"das", "haus", "buch"}) EXPECT_DOUBLE_EQ(prob(tn, b, f, ""), 1.0 / 3);

  const auto s = single("y", "x");
  EXPECT_DOUBLE_EQ(prob(model1::init_uniform(s, false), s, "y", "x"), 1.0);
  EXPECT_THROW(model1::init_uniform(Bitext{}, true), ConfigError);
}

TEST(Model1EmStep, ToyFirstIterationExact) {
  const auto b = toy();
  const auto step = model1::em_step(b, model1::init_uniform(b, false), config(false));
  EXPECT_NEAR(prob(step.table, b, "das", "the"), 0.5, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "haus", "the"), 0.25, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "buch", "the"), 0.25, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "das", "house"), 0.5, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "haus", "house"), 0.5, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "das", "book"), 0.5, 1e-12);
  EXPECT_NEAR(prob(step.table, b, "buch", "book"), 0.5, 1e-12);
}

TEST(Model1EmStep, ToyPosteriorsBeforeFirstUpdate) {
  const auto b = toy();
  const auto post = model1::posteriors(b.pairs[0], model1::init_uniform(b, false), config(false));
  // rows: das, haus; columns: the, house
  ASSERT_EQ(post.size(), 4u);
  EXPECT_NEAR(post[0], 0.4, 1e-15);
  EXPECT_NEAR(post[1], 0.6, 1e-15);
  EXPECT_NEAR(post[2], 0.4, 1e-15);
  EXPECT_NEAR(post[3], 0.6, 1e-15);
}

TEST(Model1EmStep, SinglePairFixedPoint) {
  const auto b = single("y", "x");
  auto c = config(false);
  c.epsilon = 0.3;
  const auto step = model1::em_step(b, model1::init_uniform(b, false), c);
  EXPECT_DOUBLE_EQ(prob(step.table, b, "y", "x"), 1.0);
  EXPECT_NEAR(step.log_likelihood, std::log(0.3), 1e-15);
}

TEST(Model1EmStep, ZeroMassRaisesNumericError) {
  const auto b = single("y", "x");
  const auto zero = TranslationTable::from_entries(3, {{row_of(1), 1, 0.0}});
  try {
    model1::em_step(b, zero, config(false));
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("pair 1"), std::string::npos) << e.what();
  }
}

TEST(Model1Train, ToyConvergesAndMatchesHandEm) {
  const auto b = toy();
  const auto trained = model1::train(b, config(false, 20));
  EXPECT_GE(prob(trained.table, b, "das", "the"), 0.9);
  const auto hand = oracle::hand_model1(oracle::toy_corpus(), 20);
  for (const auto& [key, value] : hand) {
    EXPECT_NEAR(prob(trained.table, b, key.second, key.first), value, 1e-12)
        << key.first << " " << key.second;
  }
  EXPECT_EQ(trained.log_likelihoods.size(), 20u);
}

TEST(Model1Train, ZeroIterationsRejected) {
  EXPECT_THROW(model1::train(toy(), config(false, 0)), ConfigError);
  auto c = config(false);
  c.epsilon = 0.0;
  EXPECT_THROW(model1::train(toy(), c), ConfigError);
}

TEST(Model1Train, CorpusOrderDoesNotMatter) {
  std::mt19937_64 rng(21);
  auto raw = oracle::random_raw(rng, 80, 12, 7);
  std::vector<std::vector<std::string>> s, t;
  for (const auto& p : raw) {
    s.push_back(p.source);
    t.push_back(p.target);
  }
  const auto sv = build_vocabulary(s), tv = build_vocabulary(t);
  const auto a = model1::train(encode_pairs(raw, sv, tv), config(true, 5));
  std::shuffle(raw.begin(), raw.end(), rng);
  const auto b = model1::train(encode_pairs(raw, sv, tv), config(true, 5));
  EXPECT_LT(max_abs_difference(a.table, b.table), 1e-12);
}

TEST(Model1Em, MonotoneNormalizedAndMatchesBruteForceLikelihood) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const bool use_null = trial % 2 == 0;
    const auto b = oracle::random_bitext(rng, 30, 6, 4);
    auto c = config(use_null);
    c.epsilon = 0.5;
    auto table = model1::init_uniform(b, use_null);
    double prev = -INFINITY;
    for (int it = 0; it < 6; ++it) {
      double brute = 0.0;
      for (const auto& p : b.pairs) brute += oracle::model1_log_prob(p, table, use_null, 0.5, c.floor);
      auto step = model1::em_step(b, table, c);
      EXPECT_NEAR(step.log_likelihood, brute, 1e-9 * std::fabs(brute));
      EXPECT_GE(step.log_likelihood, prev - 1e-9);
      prev = step.log_likelihood;
      table = std::move(step.table);
      expect_rows_normalized(table);
    }
  }
}

TEST(Model1Posteriors, MatchBruteForceEnumeration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const bool use_null = trial % 2 == 1;
    const auto b = oracle::random_bitext(rng, 3, 5, 4);
    const auto t = oracle::random_table(rng, b, use_null);
    const auto& pair = b.pairs[0];
    const auto post = model1::posteriors(pair, t, config(use_null));
    const std::size_t cells = pair.target.size() + (use_null ? 1 : 0);
    const auto brute = oracle::lexical_posteriors(pair, t, use_null, kDefaultFloor,
                                                  [](std::size_t, std::size_t) { return 1.0; });
    for (std::size_t j = 0; j < pair.source.size(); ++j) {
      for (std::size_t c = 0; c < cells; ++c) {
        EXPECT_NEAR(post[j * cells + c], brute[j][c], 1e-12);
      }
    }
  }
}

TEST(Model1SentenceLogProb, Examples) {
  const auto b = single("y", "x");
  const auto t = model1::init_uniform(b, false);
  EXPECT_DOUBLE_EQ(model1::sentence_log_prob(b.pairs[0], t, config(false)), 0.0);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const bool use_null = trial % 2 == 0;
    const auto r = oracle::random_bitext(rng, 2, 6, 4);
    const auto table = oracle::random_table(rng, r, use_null);
    auto c = config(use_null);
    const double lp = model1::sentence_log_prob(r.pairs[1], table, c);
    EXPECT_NEAR(lp, oracle::model1_log_prob(r.pairs[1], table, use_null, 1.0, c.floor), 1e-12);
    c.epsilon = 2.0;
    EXPECT_NEAR(model1::sentence_log_prob(r.pairs[1], table, c) - lp, std::log(2.0), 1e-12);
  }
}

TEST(Model1Align, TrainedToyAndTieBreaks) {
  const auto b = toy();
  const auto trained = model1::train(b, config(false, 20));
  const auto a = model1::posterior_align(b.pairs[0], trained.table, false);
  EXPECT_EQ(to_set(a).links()[0], (Link{0, 0}));  // das - the
  EXPECT_EQ(to_set(a).links()[1], (Link{1, 1}));  // haus - house

  // all-equal table: first target position; NULL loses the tie.
  const auto eq = TranslationTable::from_entries(
      4, {{kNullRow, 1, 1.0}, {row_of(1), 1, 1.0}, {row_of(2), 1, 1.0}});
  SentencePair p{{1, 1}, {1, 2}};
  const auto tie = model1::posterior_align(p, eq, true);
  EXPECT_EQ(tie[0], std::optional<std::uint32_t>(0));
  EXPECT_EQ(tie[1], std::optional<std::uint32_t>(0));

  const auto null_wins = TranslationTable::from_entries(
      4, {{kNullRow, 1, 0.9}, {row_of(1), 1, 0.5}, {row_of(2), 1, 0.5}});
  const auto n = model1::posterior_align(p, null_wins, true);
  EXPECT_FALSE(n[0].has_value());
  EXPECT_TRUE(to_set(n).empty());
  // Without NULL the same table aligns to the first target.
  EXPECT_EQ(model1::posterior_align(p, null_wins, false)[0], std::optional<std::uint32_t>(0));
}

TEST(Model1Align, UnseenPairsUseFloor) {
  const auto t = TranslationTable::from_entries(3, {{row_of(1), 1, 1.0}});
  SentencePair p{{7, 1}, {2, 1}};
  const auto a = model1::posterior_align(p, t, false);
  EXPECT_EQ(a[0], std::optional<std::uint32_t>(0));  // all floor: first target
  EXPECT_EQ(a[1], std::optional<std::uint32_t>(1));
}

TEST(Model1Threads, BitwiseRepeatableAndStableAcrossWorkers) {
  std::mt19937_64 rng(41);
  const auto b = oracle::random_bitext(rng, 300, 30, 12);
  auto c = config(true, 5);
  c.threads = 3;
  const auto a1 = model1::train(b, c);
  const auto a2 = model1::train(b, c);
  EXPECT_TRUE(a1.table == a2.table);
  EXPECT_EQ(a1.log_likelihoods, a2.log_likelihoods);
  for (unsigned threads : {1u, 2u, 4u, 7u}) {
    c.threads = threads;
    const auto o = model1::train(b, c);
    const double x = a1.log_likelihoods.back(), y = o.log_likelihoods.back();
    EXPECT_LE(std::fabs(x - y), 1e-6 * std::fabs(x)) << threads;
    EXPECT_LT(max_abs_difference(a1.table, o.table), 1e-9);
  }
}
