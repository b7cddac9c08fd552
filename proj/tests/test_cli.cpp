#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "test_support.hpp"

namespace atbench {
namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(ATBENCH_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    return r;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.output.append(buf, n);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("atbench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, ValidateReportsCounts) {
  const auto r = run_cli("validate " + write("xy.json", testing::xy_cache_json()));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("cartesian=9 constrained=6 dims=2"), std::string::npos) << r.output;
}

TEST_F(Cli, ValidateFlagsExpectedCountMismatch) {
  const auto f = write("xy.json", testing::xy_cache_json());
  EXPECT_EQ(run_cli("validate " + f + " --expect-cartesian 9 --expect-constrained 6 --expect-dims 2").exit_code, 0);
  const auto r = run_cli("validate " + f + " --expect-constrained 7");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("invalid"), std::string::npos);
}

TEST_F(Cli, ValidateMissingEntryIsADataError) {
  const auto r = run_cli("validate " + write("bad.json", testing::xy_cache_json(true)));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("x=2, y=2"), std::string::npos) << r.output;
}

TEST_F(Cli, NonexistentPathIsAUsageError) {
  EXPECT_EQ(run_cli("validate " + path("nope.json")).exit_code, 64);
  EXPECT_EQ(run_cli("stats " + path("nope.json")).exit_code, 64);
}

TEST_F(Cli, BadArgumentsAreUsageErrors) {
  EXPECT_EQ(run_cli("").exit_code, 64);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 64);
  EXPECT_EQ(run_cli("gen-synthetic --kind bowl --dims 2").exit_code, 64);
  EXPECT_EQ(run_cli("gen-synthetic --kind spiky --dims 2 --points 3 --out " + path("x.json")).exit_code, 64);
}

TEST_F(Cli, StatsExamples) {
  auto r = run_cli("stats " + write("xy.json", testing::xy_cache_json()));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("cartesian=9 constrained=6 dims=2"), std::string::npos) << r.output;

  write_cache(testing::values_cache({1, 2, 3, 4}), path("four.json"));
  r = run_cli("stats " + path("four.json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("optimum=1 median=2.5"), std::string::npos) << r.output;

  write_cache(testing::values_cache({3, 3, 3}), path("flat.json"));
  r = run_cli("stats " + path("flat.json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("budget=degenerate"), std::string::npos) << r.output;
}

TEST_F(Cli, GenSyntheticWritesDeterministicFiles) {
  const std::string args = "gen-synthetic --kind rugged --dims 3 --points 8 --seed 7 --out ";
  ASSERT_EQ(run_cli(args + path("a.json")).exit_code, 0);
  ASSERT_EQ(run_cli(args + path("b.json")).exit_code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto cache = load_cache(path("a.json"));
  EXPECT_LT(cache.space().constrained_size(), 512u);
  EXPECT_EQ(run_cli("validate " + path("a.json")).exit_code, 0);
}

TEST_F(Cli, GenSyntheticTooLargeIsAUsageError) {
  const auto r = run_cli("gen-synthetic --kind bowl --dims 10 --points 10 --out " + path("big.json"));
  EXPECT_EQ(r.exit_code, 64);
  EXPECT_FALSE(fs::exists(path("big.json")));
}

TEST_F(Cli, RunIsDeterministicAndCountsCurveRows) {
  ASSERT_EQ(run_cli("gen-synthetic --kind bowl --dims 2 --points 5 --seed 1 --out " + path("bowl.json")).exit_code,
            0);
  const std::string args = "run --cache " + path("bowl.json") +
                           " --algo random_search --algo hybrid_vndx --repeats 3 --seed 11 --points 20 --out ";
  auto r = run_cli(args + path("out1"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  r = run_cli(args + path("out2") + " --workers 3");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* f : {"report.csv", "curve.csv", "traces/synthetic_bowl__synthetic__d2_p5_s1__hybrid_vndx.csv"}) {
    EXPECT_EQ(slurp(fs::path(path("out1")) / f), slurp(fs::path(path("out2")) / f)) << f;
    EXPECT_FALSE(slurp(fs::path(path("out1")) / f).empty()) << f;
  }
  std::istringstream curve(slurp(fs::path(path("out1")) / "curve.csv"));
  std::string line;
  std::getline(curve, line);
  EXPECT_EQ(line, "algorithm,t_fraction,mean_score,ci95_low,ci95_high,spaces,repeats");
  int rows = 0;
  while (std::getline(curve, line)) {
    rows += !line.empty();
  }
  EXPECT_EQ(rows, 2 * 20);
}

TEST_F(Cli, RunRandomSearchScoresNearZero) {
  ASSERT_EQ(run_cli("gen-synthetic --kind bowl --dims 2 --points 5 --seed 1 --out " + path("bowl.json")).exit_code,
            0);
  const auto r = run_cli("run --cache " + path("bowl.json") + " --algo random_search --repeats 1000 --seed 3 --out " +
                         path("out"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::istringstream report(slurp(fs::path(path("out")) / "report.csv"));
  std::string line;
  double score = 1e9;
  while (std::getline(report, line)) {
    if (line.rfind("random_search,ALL,", 0) == 0) {
      score = std::stod(line.substr(std::string("random_search,ALL,").size()));
    }
  }
  EXPECT_GE(score, -0.05);
  EXPECT_LE(score, 0.05);
}

TEST_F(Cli, RunQuotesLabelsWithOverrides) {
  ASSERT_EQ(run_cli("gen-synthetic --kind bowl --dims 2 --points 5 --seed 1 --out " + path("bowl.json")).exit_code,
            0);
  const auto r = run_cli("run --cache " + path("bowl.json") + " --algo hybrid_vndx,k=7,restart=50 --repeats 2 --out " +
                         path("out"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const std::string report = slurp(fs::path(path("out")) / "report.csv");
  EXPECT_NE(report.find("\"hybrid_vndx,k=7,restart=50\",ALL,"), std::string::npos) << report;
  EXPECT_NE(slurp(fs::path(path("out")) / "curve.csv").find("\"hybrid_vndx,k=7,restart=50\",0"), std::string::npos);
}

TEST_F(Cli, RunFailuresNameTheProblem) {
  ASSERT_EQ(run_cli("gen-synthetic --kind bowl --dims 2 --points 5 --seed 1 --out " + path("bowl.json")).exit_code,
            0);
  auto r = run_cli("run --cache " + path("bowl.json") + " --algo simplex --out " + path("out"));
  EXPECT_EQ(r.exit_code, 64);
  EXPECT_NE(r.output.find("simplex"), std::string::npos);

  write_cache(testing::values_cache({3, 3, 3}, {}, "flat"), path("flat.json"));
  r = run_cli("run --cache " + path("flat.json") + " --algo random_search --out " + path("out"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("flat"), std::string::npos) << r.output;
}

} // namespace
} // namespace atbench
