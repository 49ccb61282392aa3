#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/commands.hpp"
#include "alignkit/model1.hpp"
#include "alignkit/model_io.hpp"

using namespace alignkit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("alignkit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string read(const std::string& file) {
    std::ifstream in(file);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* kToy = "das haus ||| the house\ndas buch ||| the book\n";

}  // namespace

TEST_F(Cli, TrainAndAlignToy) {
  const auto model = path("toy.model");
  auto r = run({"train", "--model", "model1", "--iters", "20", "--no-null", "-o", model}, kToy);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("model1 iteration 20 log-likelihood"), std::string::npos);
  std::ifstream file(model);
  const auto loaded = read_model(file);
  EXPECT_EQ(loaded.kind, ModelKind::model1);
  EXPECT_TRUE(fs::exists(model + ".src.vcb"));
  EXPECT_TRUE(fs::exists(model + ".tgt.vcb"));

  r = run({"align", "--model", model}, kToy);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0-0 1-1\n0-0 1-1\n");
}

TEST_F(Cli, Model2WithFlatPriorEqualsModel1) {
  std::mt19937_64 rng(4);
  std::string bitext;
  for (int k = 0; k < 60; ++k) {
    for (int side = 0; side < 2; ++side) {
      const int len = 1 + static_cast<int>(rng() % 5);
      for (int w = 0; w < len; ++w) bitext += (side ? "t" : "s") + std::to_string(rng() % 12) + " ";
      if (side == 0) bitext += "||| ";
    }
    bitext += "\n";
  }
  const auto m1 = path("m1"), m2 = path("m2");
  ASSERT_EQ(run({"train", "--model", "model1", "--no-null", "--iters", "6", "-o", m1}, bitext).code, 0);
  ASSERT_EQ(run({"train", "--model", "model2", "--no-null", "--lambda", "0", "--p0", "0", "--iters",
                 "6", "-o", m2},
                bitext)
                .code,
            0);
  std::ifstream f1(m1), f2(m2);
  const auto a = read_model(f1), b = read_model(f2);
  EXPECT_EQ(b.kind, ModelKind::model2);
  EXPECT_LT(max_abs_difference(a.table, b.table), 1e-12);
  EXPECT_EQ(run({"align", "--model", m1}, bitext).out, run({"align", "--model", m2}, bitext).out);
}

TEST_F(Cli, HmmTrainsAndAligns) {
  const auto model = path("hmm");
  auto r = run({"train", "--model", "hmm", "--iters", "3", "--model1-iters", "3", "-o", model}, kToy);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("hmm iteration 3"), std::string::npos);
  r = run({"align", "--model", model}, kToy);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0-0 1-1\n0-0 1-1\n");
}

TEST_F(Cli, InvalidArgumentsAreUsageErrors) {
  EXPECT_EQ(run({"train", "--iters", "0", "-o", path("x")}, kToy).code, cli::kUsage);
  EXPECT_EQ(run({"train", "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"align"}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"symmetrize", "--fwd", "-", "--rev", "-", "--heuristic", "nope"}).code, cli::kUsage);
}

TEST_F(Cli, HelpListsFlags) {
  const auto r = run({"train", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--bitext", "--model", "--iters", "--no-null", "--lambda", "--p0", "--width"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  const auto top = run({"--help"});
  for (const char* cmd : {"train", "align", "symmetrize", "eval", "extract-phrases", "project", "synth"}) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  }
}

TEST_F(Cli, EmptyInputGivesEmptyOutput) {
  const auto model = path("m");
  // Nothing to train on is a data error; aligning nothing is fine.
  EXPECT_EQ(run({"train", "-o", model}, "").code, cli::kData);
  ASSERT_EQ(run({"train", "-o", model}, kToy).code, 0);
  const auto r = run({"align", "--model", model}, "");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST_F(Cli, DataErrorsExitTwo) {
  EXPECT_EQ(run({"train", "-o", path("m")}, "no separator here\n").code, cli::kData);
  EXPECT_EQ(run({"align", "--model", path("missing")}, kToy).code, cli::kData);
  const auto fwd = write("fwd", "0-0\n0-x\n");
  EXPECT_EQ(run({"symmetrize", "--fwd", fwd, "--rev", fwd}).code, cli::kData);
}

TEST_F(Cli, NumericErrorsExitThree) {
  // An HMM whose only lexical entry has probability zero leaves no path.
  const auto model = write("zero.model", "");
  {
    HmmParams p{TranslationTable::from_entries(3, {{row_of(1), 1, 0.0}}), JumpTable::uniform(1, 0.2), false};
    std::ofstream out(model);
    write_hmm(out, p);
  }
  write("zero.model.src.vcb", "1\tx\t1\n");
  write("zero.model.tgt.vcb", "1\ty\t1\n");
  const auto r = run({"align", "--model", model, "--floor", "1e-320"}, "x ||| y\n");
  EXPECT_EQ(r.code, cli::kNumeric) << r.err;
}

TEST_F(Cli, VocabularyMismatchWarns) {
  const auto model = path("m");
  ASSERT_EQ(run({"train", "-o", model}, kToy).code, 0);
  write("small.vcb", "1\tdas\t2\n");
  const auto r = run({"align", "--model", model, "--src-vocab", path("small.vcb")}, kToy);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("do not match"), std::string::npos);
}

TEST_F(Cli, SymmetrizeEvalPipeline) {
  const auto fwd = write("fwd", "0-0 1-1\n0-0\n");
  const auto rev = write("rev", "0-0\n0-0 1-1\n");
  auto r = run({"symmetrize", "--fwd", fwd, "--rev", rev, "--heuristic", "intersect"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0-0\n0-0\n");
  r = run({"symmetrize", "--fwd", fwd, "--rev", rev, "--heuristic", "union"});
  EXPECT_EQ(r.out, "0-0 1-1\n0-0 1-1\n");
  r = run({"symmetrize", "--fwd", fwd, "--rev", write("short", "0-0\n")});
  EXPECT_EQ(r.code, cli::kData);

  const auto gold = write("gold", "1 1 1 S\n1 2 2 S\n2 1 1 S\n");
  r = run({"eval", "--hyp", fwd, "--gold", gold, "--format", "tsv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aer\t0\n"), std::string::npos) << r.out;
  r = run({"eval", "--hyp", fwd, "--gold", gold, "--per-sentence"});
  EXPECT_NE(r.out.find("AER"), std::string::npos);
  EXPECT_NE(r.out.find("id\taer\tprecision\trecall\tf1\n1\t0\t1\t1\t1\n2\t0\t1\t1\t1\n"), std::string::npos)
      << r.out;
}

TEST_F(Cli, ExtractPhrasesAndProject) {
  const auto bitext = write("bitext", "das haus ||| the house\n");
  const auto links = write("links", "0-0 1-1\n");
  auto r = run({"extract-phrases", "--bitext", bitext, "--align", links});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "das ||| the ||| 1 1 1\ndas haus ||| the house ||| 1 1 1\nhaus ||| house ||| 1 1 1\n");

  const auto tags = write("tags", "das/DET haus/N\n");
  r = run({"project", "--bitext", bitext, "--align", links, "--tags", tags});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "the/DET house/N\n");
  const auto spans = write("spans", "1\t0\t1\tNP\n");
  r = run({"project", "--bitext", bitext, "--align", links, "--spans", spans});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\t0\t1\tNP\n");
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  const auto cfg = write("c.conf", "[train]\niters = 2\nmodel = \"model2\"\n");
  const auto model = path("m");
  auto r = run({"train", "--config", cfg, "-o", model}, kToy);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("model2 iteration 2 "), std::string::npos);
  EXPECT_EQ(r.err.find("iteration 3 "), std::string::npos);
  r = run({"train", "--config", cfg, "--iters", "3", "-o", model}, kToy);
  EXPECT_NE(r.err.find("model2 iteration 3 "), std::string::npos);
  EXPECT_EQ(run({"train", "--config", write("bad.conf", "nonsense = 1\n"), "-o", model}, kToy).code,
            cli::kUsage);
}

TEST_F(Cli, SynthIsReproducible) {
  const auto a = run({"synth", "--pairs", "30", "--seed", "9"});
  const auto b = run({"synth", "--pairs", "30", "--seed", "9"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 30);
}

TEST_F(Cli, AlignIsThreadCountInvariant) {
  const auto bitext = path("s.txt");
  ASSERT_EQ(run({"synth", "--pairs", "300", "--vocab", "60", "-o", bitext}).code, 0);
  const auto model = path("m");
  ASSERT_EQ(run({"train", "--bitext", bitext, "--model", "hmm", "--iters", "2", "-o", model}).code, 0);
  const auto one = run({"--threads", "1", "align", "--model", model, "--bitext", bitext});
  const auto four = run({"--threads", "4", "align", "--model", model, "--bitext", bitext});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST_F(Cli, BinaryRunsAndReportsExitCodes) {
  const std::string exe = ALIGNKIT_CLI_PATH;
  EXPECT_EQ(std::system((exe + " --help > /dev/null").c_str()), 0);
  const int status = std::system((exe + " train --iters 0 -o /dev/null < /dev/null 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 1);
  const auto bitext = write("b", kToy);
  const auto model = path("m");
  EXPECT_EQ(std::system((exe + " train --bitext " + bitext + " -o " + model + " 2> /dev/null").c_str()), 0);
  const auto out = path("out");
  EXPECT_EQ(std::system((exe + " align --model " + model + " --bitext " + bitext + " -o " + out).c_str()), 0);
  EXPECT_EQ(read(out), "0-0 1-1\n0-0 1-1\n");
}
