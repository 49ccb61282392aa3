#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "alignkit/error.hpp"
#include "alignkit/eval.hpp"
#include "oracles.hpp"

using namespace alignkit;
using Links = std::vector<Link>;

TEST(Aer, UnitValues) {
  const Links s{{0, 0}, {1, 1}};
  EXPECT_EQ(aer(s, s, s), 0.0);
  EXPECT_EQ(aer({}, s, s), 1.0);
  EXPECT_EQ(aer(Links{{0, 0}}, s, s), 1.0 - 2.0 / 3.0);
  EXPECT_EQ(aer({}, {}, {}), 0.0);
}

TEST(PrecisionRecall, Examples) {
  const Links s{{0, 0}, {1, 1}};
  const auto perfect = precision_recall(s, s, s);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  const auto disjoint = precision_recall(Links{{2, 2}}, s, s);
  EXPECT_EQ(disjoint.precision, 0.0);
  EXPECT_EQ(disjoint.recall, 0.0);
  EXPECT_EQ(disjoint.f1, 0.0);

  const auto half = precision_recall(Links{{0, 0}, {2, 2}}, Links{{0, 0}}, Links{{0, 0}, {1, 1}});
  EXPECT_EQ(half.precision, 0.5);
  EXPECT_EQ(half.recall, 1.0);
}

TEST(ParseGold, Examples) {
  std::istringstream a("1 1 1 S\n");
  const auto g = parse_gold(a);
  EXPECT_EQ(g.sentences.at(1).sure, (Links{{0, 0}}));
  EXPECT_EQ(g.sentences.at(1).possible, (Links{{0, 0}}));

  std::istringstream b("1 2 3 P\n");
  const auto h = parse_gold(b);
  EXPECT_TRUE(h.sentences.at(1).sure.empty());
  EXPECT_EQ(h.sentences.at(1).possible, (Links{{1, 2}}));

  std::istringstream c("1 x 1 S\n");
  try {
    parse_gold(c);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::istringstream flag("1 1 1 S\n\n2 1 1 Q\n");
  try {
    parse_gold(flag);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream deflt("4 2 2\n");
  EXPECT_EQ(parse_gold(deflt).sentences.at(4).sure, (Links{{1, 1}}));
}

TEST(EvaluateCorpus, PoolsCounts) {
  GoldAlignment gold;
  gold.sentences[1] = {{{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}};
  gold.sentences[2] = {{{0, 0}}, {{0, 0}}};
  const std::vector<AlignmentSet> hyp{AlignmentSet(2, 2, {{0, 0}, {1, 1}}), AlignmentSet(1, 1)};
  const auto r = evaluate_corpus(hyp, gold);
  EXPECT_EQ(r.evaluated, 2u);
  // 1 - (|S1| + |S1|) / (|S1| + |S1| + |S2|)
  EXPECT_DOUBLE_EQ(r.corpus.aer, 1.0 - 4.0 / 5.0);
  EXPECT_NE(r.corpus.aer, (r.sentences[0].metrics.aer + r.sentences[1].metrics.aer) / 2);

  const std::vector<AlignmentSet> one{hyp[0]};
  GoldAlignment g1;
  g1.sentences[1] = gold.sentences[1];
  const auto single = evaluate_corpus(one, g1);
  EXPECT_EQ(single.corpus.aer, single.sentences[0].metrics.aer);
  EXPECT_EQ(single.corpus.f1, single.sentences[0].metrics.f1);
}

TEST(EvaluateCorpus, MissingGoldSkipped) {
  GoldAlignment gold;
  gold.sentences[2] = {{{0, 0}}, {{0, 0}}};
  gold.sentences[5] = {{{0, 0}}, {{0, 0}}};
  const std::vector<AlignmentSet> hyp{AlignmentSet(1, 1, {{0, 0}}), AlignmentSet(1, 1, {{0, 0}})};
  const auto r = evaluate_corpus(hyp, gold);
  EXPECT_EQ(r.evaluated, 1u);
  EXPECT_EQ(r.missing_gold, std::vector<std::size_t>{1});
  EXPECT_EQ(r.missing_hypothesis, std::vector<std::size_t>{5});
  EXPECT_EQ(r.corpus.aer, 0.0);
}

TEST(Aer, PropertiesOnRandomSets) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 1 + rng() % 7, n = 1 + rng() % 7;
    const auto a = oracle::random_alignment(rng, m, n, 0.3);
    const auto s = oracle::random_alignment(rng, m, n, 0.3);
    const auto p = unite(s, oracle::random_alignment(rng, m, n, 0.2));
    const double v = aer(a.links(), s.links(), p.links());
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);

    // S = P: AER = 1 - F1
    const auto pr = precision_recall(a.links(), s.links(), s.links());
    if (!(a.empty() && s.empty())) {
      EXPECT_NEAR(aer(a.links(), s.links(), s.links()), 1.0 - pr.f1, 1e-12);
    }

    // Adding a sure link never increases AER.
    for (const Link l : s.links()) {
      auto more = a;
      more.insert(l);
      EXPECT_LE(aer(more.links(), s.links(), p.links()), v + 1e-15);
    }
  }
}

TEST(WriteGold, RoundTripsAsSure) {
  const std::vector<AlignmentSet> sets{AlignmentSet(2, 3, {{0, 2}, {1, 0}}), AlignmentSet(1, 1)};
  std::stringstream io;
  write_gold(io, sets);
  EXPECT_EQ(io.str(), "1 1 3 S\n1 2 1 S\n");
  const auto g = parse_gold(io);
  EXPECT_EQ(g.sentences.at(1).sure, (Links{{0, 2}, {1, 0}}));
}

TEST(Report, TsvHasCorpusMetrics) {
  GoldAlignment gold;
  gold.sentences[1] = {{{0, 0}}, {{0, 0}}};
  const std::vector<AlignmentSet> hyp{AlignmentSet(1, 1, {{0, 0}})};
  std::ostringstream out;
  write_report_tsv(out, evaluate_corpus(hyp, gold));
  EXPECT_NE(out.str().find("aer\t0"), std::string::npos);
}
