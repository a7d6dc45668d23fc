#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult invoke(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / ("affasym_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = std::string(AFFASYM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(log);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("affasym_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, AnalyzeTorusGrid) {
  const CliResult r = invoke("analyze --surface catalog:torus --res 32 --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = nlohmann::json::parse(slurp(dir_ / "analyze.json"));
  ASSERT_EQ(rows.size(), 1024u);
  EXPECT_TRUE(rows[0].contains("K"));
  EXPECT_TRUE(rows[0].contains("K_aff"));
  EXPECT_TRUE(rows[0].contains("aff_class"));
  std::istringstream csv(slurp(dir_ / "analyze.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 1025);
  EXPECT_TRUE(fs::exists(dir_ / "analyze.meta.json"));
}

TEST_F(Cli, BadExpressionIsConfigError) {
  const CliResult r = invoke("analyze --surface 'monge:u^2 + *v' --out " + out());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("offset 7"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(dir_ / "analyze.json"));
}

TEST_F(Cli, BadFlagsAreConfigErrors) {
  EXPECT_EQ(invoke("analyze --surface catalog:torus --R 1 --r 2 --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --surface catalog:torus --tol lift_tol=-1 --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --surface catalog:torus --tol nope=1 --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --surface catalog:torus --region 1,0,0,1 --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --surface catalog:sphere --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --surface catalog:torus --format svg --out " + out()).code, 2);
  EXPECT_EQ(invoke("analyze --bogus").code, 2);
}

TEST_F(Cli, ParabolicGridPointIsDomainError) {
  const CliResult r = invoke("analyze --surface catalog:torus --region 1.5707963267948966,2,0,1 --res 3 --out " + out());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("(u, v)"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(dir_ / "analyze.json"));
}

TEST_F(Cli, PickFlatAffineUmbilicRow) {
  // eps = 1, sigma = 0.5: q40 = q04, q31 = -q13, q22 = 2 sigma^2 - q40
  const CliResult r = invoke(
      "analyze --surface catalog:pick --sigma 0.5 --q 40=0.3 --q 04=0.3 --q 13=0.2 --q 31=-0.2 --q 22=0.2 "
      "--res 5 --format json --out " +
      out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = nlohmann::json::parse(slurp(dir_ / "analyze.json"));
  int flagged = 0;
  for (const auto& row : rows) {
    const bool flat = !row["flags"].empty();
    flagged += flat;
    if (flat) {
      EXPECT_EQ(row["u"].get<double>(), 0.0);
      EXPECT_EQ(row["v"].get<double>(), 0.0);
    }
  }
  EXPECT_EQ(flagged, 1);
}

TEST_F(Cli, SurfaceFile) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "s.json") << R"({"kind": "monge", "height": "(u^2 + 2*v^2)/2 + u^3/6", "domain": [-0.5, 0.5, -0.5, 0.5]})";
  const CliResult r = invoke("analyze --surface file:" + out("s.json") + " --res 4 --format csv --out " + out("o"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "analyze.csv"));
  std::ofstream(dir_ / "bad.json") << R"({"kind": "monge"})";
  EXPECT_EQ(invoke("analyze --surface file:" + out("bad.json") + " --out " + out("o")).code, 2);
}

TEST_F(Cli, FoldedSaddlePortrait) {
  const CliResult r = invoke("portrait --bde folded --lambda -1 --res 4 --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto p = nlohmann::json::parse(slurp(dir_ / "portrait.json"));
  ASSERT_EQ(p["points"].size(), 1u);
  EXPECT_EQ(p["points"][0]["kind"], "folded_saddle");
  EXPECT_FALSE(p["trajectories"].empty());
  const std::string svg = slurp(dir_ / "portrait.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("width=\"1072\" height=\"1072\""), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray=\"4 3\""), std::string::npos);
  EXPECT_NE(svg.find(">folded_saddle</text>"), std::string::npos);
}

TEST_F(Cli, TorusPortraitCurves) {
  const CliResult r = invoke("portrait --surface catalog:torus --R 2 --r 1 --res 4 --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string svg = slurp(dir_ / "portrait.svg");
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = 0; (pos = svg.find(needle, pos)) != std::string::npos; ++pos) ++n;
    return n;
  };
  EXPECT_EQ(count("class=\"affine_parabolic\""), 4u);
  EXPECT_EQ(count("class=\"parabolic\""), 2u);
}

TEST_F(Cli, PortraitIsReproducible) {
  ASSERT_EQ(invoke("portrait --bde morse --eps1 -1 --res 4 --out " + out("a")).code, 0);
  ASSERT_EQ(invoke("portrait --bde morse --eps1 -1 --res 4 --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "portrait.svg"), slurp(dir_ / "b" / "portrait.svg"));
  EXPECT_EQ(slurp(dir_ / "a" / "portrait.json"), slurp(dir_ / "b" / "portrait.json"));
  const auto p = nlohmann::json::parse(slurp(dir_ / "a" / "portrait.json"));
  ASSERT_EQ(p["points"].size(), 1u);
  EXPECT_EQ(p["points"][0]["kind"], "morse_crossing");
}

TEST_F(Cli, ConormalTorus) {
  const CliResult r = invoke("conormal --surface catalog:torus --res 64x32 --samples 20 --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string obj = slurp(dir_ / "conormal.obj");
  std::size_t objects = 0;
  for (std::size_t pos = 0; (pos = obj.find("\no ", pos)) != std::string::npos; ++pos) ++objects;
  EXPECT_EQ(objects, 2u);
  const auto rep = nlohmann::json::parse(slurp(dir_ / "conormal_report.json"));
  EXPECT_EQ(rep["mesh"]["components"], 2);
  ASSERT_EQ(rep["samples"].size(), 20u);
  for (const auto& s : rep["samples"]) EXPECT_LT(s["residual"].get<double>(), 1e-7);
  EXPECT_TRUE(fs::exists(dir_ / "surface.obj"));
}

TEST_F(Cli, ConormalQuadricIsDegenerate) {
  const CliResult r = invoke("conormal --surface 'monge:(u^2 + v^2)/2' --res 4 --samples 5 --format json --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rep = nlohmann::json::parse(slurp(dir_ / "conormal_report.json"));
  for (const auto& s : rep["samples"]) EXPECT_TRUE(s["degenerate"].get<bool>());
}

TEST_F(Cli, ConormalGuardTooSmall) {
  const CliResult r = invoke("conormal --surface catalog:torus --region 1.56,1.58,0,1 --res 20x4 --tol conormal_guard=1e-5 --out " +
                    out());
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_FALSE(fs::exists(dir_ / "conormal.obj"));
}

TEST_F(Cli, VerifyDetectsPrintedLieCartanField) {
  const CliResult r = invoke("verify --lie-cartan printed");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("not ok 5"), std::string::npos) << r.out;
}
