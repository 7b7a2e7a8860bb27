#include "faltertide/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef FALTERTIDE_DATA_DIR
#define FALTERTIDE_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using faltertide::json;

namespace {

std::string data(const std::string& name) { return std::string(FALTERTIDE_DATA_DIR) + "/" + name; }

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "faltertide");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = faltertide::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("faltertide_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string model = data("mod5.json");
  fs::path dir_;
};

std::string lasso(const std::vector<int>& prefix, const std::vector<int>& cycle) {
  json j{{"variables", {"x", "y"}}, {"prefix", json::array()}, {"cycle", json::array()}};
  for (int v : prefix) j["prefix"].push_back({{"state", {{"x", std::to_string(v)}, {"y", "0"}}}});
  for (int v : cycle) j["cycle"].push_back({{"state", {{"x", std::to_string(v)}, {"y", "0"}}}});
  return j.dump();
}

}  // namespace

TEST_F(Cli, ParsePrintsCoreSyntax) {
  Result r = run({"parse", "-m", model, "-f", "<>(x = 0)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "~[]~(x = 0)\n");
  Result s = run({"parse", "-m", model, "-f", "<>(x = 0)", "--surface", "--format", "json"});
  ASSERT_EQ(s.code, 0);
  json j = json::parse(s.out);
  EXPECT_EQ(j["formula"], "<>(x = 0)");
  EXPECT_EQ(j["core"], "~[]~(x = 0)");
}

TEST_F(Cli, EvalExitCodes) {
  EXPECT_EQ(run({"eval-disc", "-m", model, "-F", data("counter.tla"), "-t", data("lassos/count.json")}).code, 0);
  Result broken = run({"eval-disc", "-m", model, "-F", data("counter.tla"), "-t", data("lassos/broken.json")});
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.out.find("FalseWitnessed"), std::string::npos);
  EXPECT_EQ(run({"eval-disc", "-m", model, "-f", "\\AA z . [](z = z)", "-t", data("lassos/count.json")}).code, 2);
  EXPECT_EQ(run({"eval-cont", "-m", model, "-F", data("counter.tla"), "-t", data("traces/count.json")}).code, 0);
  EXPECT_EQ(run({"eval-cont", "-m", model, "-F", data("counter.tla"), "-t", data("traces/broken.json")}).code, 1);
}

TEST_F(Cli, InputErrorsExitThree) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  Result bad = run({"eval-disc", "-m", model, "-f", "[](x = ", "-t", data("lassos/count.json")});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("1:8"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"eval-disc", "-m", data("nope.json"), "-F", data("counter.tla"), "-t", data("lassos/count.json")}).code, 3);
  EXPECT_EQ(run({"eval-disc", "-m", model, "-t", data("lassos/count.json")}).code, 3);
  EXPECT_EQ(run({"invariance", "-m", model, "-F", data("flex_forall.tla"), "-t", data("lassos")}).code, 3);
}

TEST_F(Cli, DenoteReportsInexactness) {
  Result r = run({"denote", "-m", model, "-f", "<>[](x = 4)", "-t", data("traces/settles.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("certain"), std::string::npos);
  Result flex = run({"denote", "-m", model, "-f", "\\AA z . [](z = z)", "-t", data("traces/count.json")});
  EXPECT_EQ(flex.code, 2);
  EXPECT_NE(flex.out.find("certain: "), std::string::npos);
}

TEST_F(Cli, EquivalenceOfRotatedAndStutteredLassos) {
  std::string a = write("a.json", lasso({}, {0, 1, 2}));
  std::string b = write("b.json", lasso({0}, {1, 1, 2, 0}));
  std::string c = write("c.json", lasso({}, {0, 2, 1}));
  EXPECT_EQ(run({"equiv", "-m", model, a, b}).code, 0);
  EXPECT_EQ(run({"equiv", "-m", model, a, c}).code, 1);
  EXPECT_EQ(run({"equiv", "-m", model, data("traces/count.json"), data("traces/count_uneven.json"), "--mode", "cont"}).code,
            0);
}

TEST_F(Cli, SeededRunsAreDeterministic) {
  std::vector<std::string> args{"invariance", "-m", model, "-c", data("corpus.tla"), "-t", data("lassos"),
                                "--trials", "3", "--seed", "7"};
  Result first = run(args), second = run(args);
  EXPECT_EQ(first.code, 0);
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out.find("seed 7"), std::string::npos);

  ::setenv("FALTERTIDE_SEED", "7", 1);
  Result from_env = run({"invariance", "-m", model, "-c", data("corpus.tla"), "-t", data("lassos"), "--trials", "3"});
  ::unsetenv("FALTERTIDE_SEED");
  EXPECT_EQ(from_env.out, first.out);

  std::vector<std::string> samples{"eval-cont", "-m", model, "-f", "[]<>(x = 0)", "-s", "30", "-t",
                                   data("traces/count_uneven.json"), "--seed", "3"};
  EXPECT_EQ(run(samples).out, run(samples).out);
  EXPECT_EQ(run(samples).code, 0);
}

TEST_F(Cli, FlexBoundFromEnvironment) {
  ::setenv("FALTERTIDE_FLEX_BOUND", "0", 1);
  Result r = run({"eval-disc", "-m", model, "-f", "\\AA z . [](z = z)", "-t", data("lassos/count.json"), "--format", "json"});
  ::unsetenv("FALTERTIDE_FLEX_BOUND");
  Result wider = run({"eval-disc", "-m", model, "-f", "\\AA z . [](z = z)", "-t", data("lassos/count.json"), "--format", "json"});
  ASSERT_EQ(r.code, 2);
  EXPECT_LT(json::parse(r.out)["branches"].get<std::size_t>(), json::parse(wider.out)["branches"].get<std::size_t>());
}

TEST_F(Cli, WitnessFilesReplay) {
  std::string w = (dir_ / "w.json").string();
  EXPECT_EQ(run({"eval-disc", "-m", model, "-F", data("counter.tla"), "-t", data("lassos/broken.json"), "-w", w}).code, 1);
  Result r = run({"replay", "-m", model, w});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("reproduced"), std::string::npos);

  std::string f = (dir_ / "f.json").string();
  EXPECT_EQ(run({"eval-cont", "-m", model, "-F", data("flex_forall.tla"), "-t", data("traces/count.json"), "-w", f}).code, 1);
  Result rf = run({"replay", "-m", model, f});
  EXPECT_EQ(rf.code, 0) << rf.out << rf.err;
  EXPECT_NE(rf.out.find("falsifies body"), std::string::npos);

  // A tampered report no longer reproduces.
  json j = json::parse(std::ifstream(w));
  j["report"]["witness"]["position"] = 99;
  std::ofstream(w) << j.dump();
  EXPECT_EQ(run({"replay", "-m", model, w}).code, 1);
}

TEST_F(Cli, AgreementAndFixture) {
  Result ok = run({"agreement", "-m", model, "-c", data("corpus.tla"), "-t", data("lassos"), "--format", "json"});
  ASSERT_EQ(ok.code, 0);
  json j = json::parse(ok.out);
  EXPECT_GE(j["pairs"].get<std::size_t>(), 300u);
  EXPECT_TRUE(j["disagreements"].empty());
  EXPECT_EQ(run({"agreement", "-m", model, "-c", data("disagreement.tla"), "-t", data("lassos")}).code, 1);
}

TEST_F(Cli, HolCommands) {
  EXPECT_EQ(run({"hol-check", data("hol/library.sexp")}).code, 0);
  Result bad = run({"hol-check", data("hol/rejected.sexp")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("rejected 0"), std::string::npos);
  EXPECT_EQ(run({"hol-check", write("junk.sexp", "(hyp (")}).code, 3);

  Result lib = run({"hol-library", "--out", dir_.string()});
  ASSERT_EQ(lib.code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    if (e.path().extension() != ".sexp" || e.path().filename() == "junk.sexp") continue;
    ++files;
    EXPECT_EQ(run({"hol-check", e.path().string()}).code, 0) << e.path();
  }
  EXPECT_EQ(files, 10u);
}
