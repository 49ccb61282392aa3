#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "alignkit/error.hpp"
#include "alignkit/model_io.hpp"
#include "oracles.hpp"

using namespace alignkit;

namespace {

TranslationTable table(bool use_null) {
  std::mt19937_64 rng(3);
  return oracle::random_table(rng, oracle::random_bitext(rng, 20, 6, 5), use_null);
}

}  // namespace

TEST(ModelIo, Model1RoundTrip) {
  std::stringstream io;
  const auto t = table(true);
  write_model1(io, t);
  const auto back = read_model(io);
  EXPECT_EQ(back.kind, ModelKind::model1);
  EXPECT_TRUE(back.use_null);
  EXPECT_TRUE(back.table == t);
}

TEST(ModelIo, Model2RoundTrip) {
  Model2Params p{table(false), {}, false};
  p.prior.tension = 4.25;
  p.prior.null_prob = 0.0625;
  std::stringstream io;
  write_model2(io, p);
  const auto back = read_model(io);
  EXPECT_EQ(back.kind, ModelKind::model2);
  EXPECT_FALSE(back.use_null);
  EXPECT_EQ(back.prior.tension, 4.25);
  EXPECT_EQ(back.prior.null_prob, 0.0625);
  EXPECT_TRUE(back.model2().table == p.table);
}

TEST(ModelIo, HmmRoundTripIsExact) {
  HmmParams p{table(true), JumpTable::uniform(3, 0.15), true};
  p.jumps.probs = {0.1, 0.05, 0.2, 0.3, 0.15, 0.1 / 3, 0.2 - 0.1 / 3};
  std::stringstream io;
  write_hmm(io, p);
  const auto back = read_model(io);
  EXPECT_EQ(back.kind, ModelKind::hmm);
  EXPECT_TRUE(back.jumps == p.jumps);
  EXPECT_TRUE(back.hmm().table == p.table);
}

TEST(ModelIo, MalformedTrailers) {
  const auto t = table(false);
  std::stringstream base;
  write_model1(base, t);
  const std::string head = base.str();

  for (const std::string tail : {"diag\t1.0\n", "diag\tx\t0.1\n", "hmm\t1\t0.2\njump\t0\t1.0\n",
                                 "hmm\t1\t0.2\njump\t-1\t0.5\njump\t0\t0.5\njump\t5\t0.1\n",
                                 "whatever\n", "diag\t-1\t0.1\n"}) {
    std::istringstream in(head + tail);
    EXPECT_THROW(read_model(in), FormatError) << tail;
  }
  std::istringstream empty("");
  EXPECT_THROW(read_model(empty), FormatError);
}
