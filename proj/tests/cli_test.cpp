// End-to-end runs of the maxpsh executable: exit codes, JSON and CSV output.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

using json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

std::string fixture(const std::string& name) { return std::string(MAXPSH_FIXTURES_DIR) + "/" + name; }

CliRun run(const std::string& model, const std::string& args) {
  const std::string cmd = std::string(MAXPSH_CLI_PATH) + " --model '" + model + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(Cli, EvalIntervalTubeMatchesDisc) {
  const CliRun r = run(fixture("interval_tube.json"), "eval --re 0 --im 0.5");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["member"].get<bool>());
  EXPECT_NEAR(j["u"].get<double>(), 0.4636476090008061, 1e-15);
}

TEST(Cli, EvalStripAndCenter) {
  const CliRun s = run(fixture("strip1d.json"), "eval --re 0.3 --im 0.2");
  ASSERT_EQ(s.code, 0);
  EXPECT_NEAR(json::parse(s.out)["u"].get<double>(), 0.2, 1e-15);
  const CliRun c = run(fixture("ball_tube.json"), "eval --re 0.2,-0.3 --im 0,0");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(json::parse(c.out)["u"].get<double>(), 0.0);
}

TEST(Cli, EvalOutsideIsDomainError) {
  const CliRun r = run(fixture("interval_tube.json"), "eval --re 2 --im 0");
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["member"].get<bool>());
}

TEST(Cli, MetricValues) {
  const CliRun d = run(fixture("disc1d.json"), "metric --x 0.5 --xi 1");
  ASSERT_EQ(d.code, 0);
  EXPECT_NEAR(json::parse(d.out)["E_closed"].get<double>(), 4.0 / 3.0, 1e-15);
  const CliRun ns = run(fixture("nonsymmetric_strip.json"), "metric --x 0 --xi -1");
  ASSERT_EQ(ns.code, 0);
  EXPECT_EQ(json::parse(ns.out)["E_closed"].get<double>(), 1.0);
  const CliRun zero = run(fixture("nonsymmetric_strip.json"), "metric --x 0 --xi 0");
  ASSERT_EQ(zero.code, 0);
  const json z = json::parse(zero.out);
  EXPECT_EQ(z["E_closed"].get<double>(), 0.0);
  EXPECT_EQ(z["F_upper"].get<double>(), 0.0);
}

TEST(Cli, GeodesicChartOutput) {
  const CliRun r = run(fixture("ball_tube.json"), "geodesic --re 0.1,0 --im 0.2,0.1 --zeta 0.3,0");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_LT(j["reconstruction_residual"].get<double>(), 1e-12);
  EXPECT_NEAR(j["u"].get<double>(), j["abs_im_arctanh"].get<double>(), 1e-12);
}

TEST(Cli, VerifyAllOnBallTubePasses) {
  const CliRun r = run(fixture("ball_tube.json"), "--samples 200 verify all");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 7u);
}

TEST(Cli, VerifyAllSkipsFiniteDifferenceSuitesOnPolytopes) {
  const CliRun r = run(fixture("square_tube.json"), "--samples 200 verify all");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  const auto skipped = j["skipped"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(skipped.begin(), skipped.end(), "psh"), skipped.end());
  EXPECT_NE(std::find(skipped.begin(), skipped.end(), "tube-levi"), skipped.end());
}

TEST(Cli, UnsupportedSuiteIsUsageError) {
  EXPECT_EQ(run(fixture("square_tube.json"), "verify tube-levi").code, 2);
  EXPECT_EQ(run(fixture("square_tube.json"), "verify psh").code, 2);
  EXPECT_EQ(run(fixture("strip1d.json"), "verify geodesics").code, 2);
}

TEST(Cli, CounterFieldsFail) {
  EXPECT_EQ(run(fixture("ball_tube.json"), "--samples 100 verify ma --field norm-squared").code, 1);
  EXPECT_EQ(run(fixture("ball_tube.json"), "--samples 100 verify maximality --field corrupted").code, 1);
}

TEST(Cli, GlobalOptionsAfterSubcommand) {
  const CliRun r = run(fixture("ball_tube.json"), "verify psh --samples 50 --seed 7");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["seed"].get<int>(), 7);
  EXPECT_EQ(j["checks"][0]["samples"].get<int>(), 50);
}

TEST(Cli, SameSeedSameOutput) {
  const CliRun a = run(fixture("ellipse_tube.json"), "--seed 11 --samples 100 verify all");
  const CliRun b = run(fixture("ellipse_tube.json"), "--seed 11 --samples 100 verify all");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SliceRowCount) {
  const CliRun r = run(fixture("disc1d.json"), "slice --plane 0 1 --resolution 4");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  EXPECT_EQ(rows.size(), 25u);
  const CliRun single = run(fixture("disc1d.json"), "slice --plane 0 1 --resolution 0");
  ASSERT_EQ(single.code, 0);
  const auto one = lines(single.out);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], "0,0,1,0");
}

TEST(Cli, SliceRejectsBadPlanes) {
  EXPECT_EQ(run(fixture("disc1d.json"), "slice --plane 0 0").code, 2);
  EXPECT_EQ(run(fixture("disc1d.json"), "slice --plane 0 5").code, 2);
  EXPECT_EQ(run(fixture("ball_tube.json"), "slice --plane 0 1").code, 2);
}

TEST(Cli, BadInputsAreUsageErrors) {
  EXPECT_EQ(run(fixture("malformed.json"), "eval --re 0 --im 0").code, 2);
  EXPECT_EQ(run(fixture("indefinite.json"), "eval --re 0 --im 0").code, 2);
  EXPECT_EQ(run(fixture("unknown_model.json"), "eval --re 0 --im 0").code, 2);
  EXPECT_EQ(run(fixture("ball_tube.json"), "--tol bogus=1 verify psh").code, 2);
  EXPECT_EQ(run(fixture("ball_tube.json"), "eval --re 0 --im 0,0").code, 2);
}
