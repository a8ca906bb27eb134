#include "lack/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lack/error.hpp"

using namespace lack;
using namespace lack::experiment;
namespace fs = std::filesystem;

namespace {

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lack_experiment_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kConstantLoss =
    "name = constant\nseed = 99\nsteganogram_bits = 1000000000000\n"
    "[network]\nloss = 0.01\n"
    "[duration]\nmean = 117.31\n"
    "[controller]\nmode = constant\ntarget_loss = 0.005\n"
    "[cap]\ncodec_tolerance = false\n"
    "[sweep]\nduration.shape = 3.4, 0.5\n";

}  // namespace

TEST(DeriveSeed, DeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 20; ++p) {
    for (std::uint64_t r = 0; r < 50; ++r) seen.insert(derive_seed(7, p, r));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(7, 0, 0), derive_seed(8, 0, 0));
}

TEST(SweepPoints, CartesianProductLastAxisFastest) {
  const std::vector<SweepAxis> axes{{"a", {"1", "2"}}, {"b", {"x", "y", "z"}}};
  const auto points = sweep_points(axes);
  ASSERT_EQ(points.size(), 6u);
  EXPECT_EQ(points[0], (std::vector<std::pair<std::string, std::string>>{{"a", "1"}, {"b", "x"}}));
  EXPECT_EQ(points[1][1].second, "y");
  EXPECT_EQ(points[3][0].second, "2");
  EXPECT_EQ(sweep_points({}).size(), 1u);
}

TEST(SweepAxes, ReadFromFileSorted) {
  std::istringstream in("seed = 1\n[sweep]\nnetwork.loss = 0, 0.01\nduration.shape = 1, 2, 3\n");
  const auto axes = sweep_axes(KeyValueConfig::parse(in));
  ASSERT_EQ(axes.size(), 2u);
  EXPECT_EQ(axes[0].key, "duration.shape");
  EXPECT_EQ(axes[0].values, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(axes[1].key, "network.loss");
}

TEST_F(ExperimentTest, ConstantLossSweepMatchesTarget) {
  ExperimentConfig c;
  c.scenarios = {write("constant.ini", kConstantLoss)};
  c.output_dir = dir_ / "out";
  c.replications = 200;
  const auto result = run_experiment(c);
  ASSERT_EQ(result.points.size(), 2u);
  EXPECT_EQ(result.calls, 400u);
  for (const auto& p : result.points) {
    const double sigma = std::sqrt(0.005 * 0.995 / static_cast<double>(p.sent));
    EXPECT_NEAR(p.lack_loss_sigma, sigma, 0.05 * sigma);
    EXPECT_NEAR(p.realized_lack_loss, 0.005, 3.0 * sigma) << p.label;
    EXPECT_TRUE(p.ks_statistic.has_value());
  }
  EXPECT_EQ(result.points[0].label, "constant[duration.shape=3.4]");
  for (const char* f : {"calls.csv", "aggregate.csv", "warden.csv"}) {
    EXPECT_TRUE(fs::exists(c.output_dir / f)) << f;
  }
  std::ifstream agg(c.output_dir / "aggregate.csv");
  std::string header;
  std::getline(agg, header);
  EXPECT_EQ(header, kAggregateHeader);
}

TEST_F(ExperimentTest, RerunIsByteIdentical) {
  ExperimentConfig c;
  c.scenarios = {write("constant.ini", kConstantLoss)};
  c.replications = 5;
  c.write_traces = true;
  c.master_seed = 12;
  c.output_dir = dir_ / "a";
  run_experiment(c);
  c.output_dir = dir_ / "b";
  run_experiment(c);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir_ / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 3u + 10u);
}

TEST_F(ExperimentTest, MissingSeedIsNamed) {
  ExperimentConfig c;
  c.scenarios = {write("noseed.ini", "name = x\n")};
  c.output_dir = dir_ / "out";
  try {
    run_experiment(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "seed");
    EXPECT_NE(std::string(e.what()).find("noseed.ini"), std::string::npos);
  }
}

TEST_F(ExperimentTest, ValidateRejectsBadConfig) {
  ExperimentConfig c;
  c.output_dir = dir_;
  EXPECT_THROW(c.validate(), ConfigError);
  c.scenarios = {dir_ / "absent.ini"};
  EXPECT_THROW(c.validate(), ConfigError);
  c.scenarios = {write("ok.ini", "seed = 1\n")};
  c.replications = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.replications = 1;
  c.axes = {{"network.loss", {}}};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST_F(ExperimentTest, InfeasibleScenarioSurfacesBeforeRunning) {
  ExperimentConfig c;
  c.scenarios = {write("tight.ini", "seed = 1\n[lack]\nmax_delay = 10\n")};
  c.output_dir = dir_ / "out";
  EXPECT_THROW(run_experiment(c), InfeasibleScenario);
  EXPECT_FALSE(fs::exists(c.output_dir / "calls.csv"));
}
