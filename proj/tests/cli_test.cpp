#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace separa;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "separa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("separa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  }

  // Normal-ogive data, six items, P = 300.
  fs::path normal_data() {
    const auto r = run({"simulate", "--scenario", "figure1", "-o", (dir / "sim").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return dir / "sim" / "data-normal-P300.csv";
  }

  fs::path dir;
};

}  // namespace

TEST_F(CliTest, EstimateWritesOutputs) {
  const auto data = normal_data();
  const auto r = run({"estimate", "--model", "normal", "--loss", "kl", data.string(), "-o", (dir / "est").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"estimates.csv", "loss_curve.csv", "persons.csv", "diagnostics.json", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir / "est" / f)) << f;
  std::istringstream est(slurp(dir / "est" / "estimates.csv"));
  std::string line;
  std::getline(est, line);
  EXPECT_EQ(line, "item,cat1");
  std::getline(est, line);
  EXPECT_EQ(line, "I1,0");
  const auto diag = io::json::parse(slurp(dir / "est" / "diagnostics.json"));
  EXPECT_TRUE(diag.at("scale_selected").get<bool>());
  EXPECT_EQ(diag.at("response_function"), "normal");
}

TEST_F(CliTest, FixedScaleSkipsLossCurve) {
  const auto data = normal_data();
  const auto r = run({"estimate", "--gamma10", "1.0", data.string(), "-o", (dir / "est").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(fs::exists(dir / "est" / "loss_curve.csv"));
  EXPECT_TRUE(fs::exists(dir / "est" / "estimates.csv"));
}

TEST_F(CliTest, DegenerateItemFailsCml) {
  const auto data = write("d.csv", "1,0,1\n1,1,0\n1,0,0\n1,1,1\n1,0,1\n");
  const auto r = run({"estimate", "--estimator", "cml", data.string(), "-o", (dir / "est").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("degenerate item"), std::string::npos);
}

TEST_F(CliTest, ParseErrorIsDataError) {
  const auto data = write("bad.csv", "1,0\n0,x\n");
  const auto r = run({"estimate", data.string(), "-o", (dir / "est").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2, column 2"), std::string::npos);
  EXPECT_EQ(run({"estimate", (dir / "missing.csv").string()}).code, 2);
}

TEST_F(CliTest, PolytomousDataNeedsPolyEstimator) {
  const auto data = write("p.csv", "0,2,1\n1,0,2\n2,1,0\n1,1,1\n0,2,2\n");
  EXPECT_EQ(run({"estimate", data.string(), "-o", (dir / "a").string()}).code, 2);
  const auto r = run({"estimate", "--estimator", "poly-separation", "--gamma10", "1", data.string(), "-o",
                      (dir / "b").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "b" / "estimates.csv").find("cat2"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"estimate"}).code, 1);
  EXPECT_EQ(run({"estimate", "--model", "cauchy", "x.csv"}).code, 1);
  EXPECT_EQ(run({"estimate", "--estimator", "jml", "x.csv"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  const auto data = normal_data();
  EXPECT_EQ(run({"bootstrap", "-B", "1", data.string(), "-o", dir.string()}).code, 1);
  EXPECT_EQ(run({"estimate", "--estimator", "cml", "--gamma10", "2", data.string()}).code, 1);
  const auto r = run({"simulate", "--scenario", "figure99"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("table1"), std::string::npos);
  EXPECT_NE(r.err.find("appendix18"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, BootstrapIsDeterministic) {
  const auto data = normal_data();
  ASSERT_EQ(run({"bootstrap", "-B", "20", "--seed", "7", data.string(), "-o", (dir / "a").string()}).code, 0);
  ASSERT_EQ(run({"bootstrap", "-B", "20", "--seed", "7", data.string(), "-o", (dir / "b").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "a" / "bootstrap.json"), slurp(dir / "b" / "bootstrap.json"));
  const auto j = io::json::parse(slurp(dir / "a" / "bootstrap.json"));
  EXPECT_EQ(j.at("se").at(0).get<double>(), 0.0);
  EXPECT_EQ(j.at("B"), 20);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("n_failed"), 0);
}

TEST_F(CliTest, SimulateFigure5) {
  const auto r = run({"simulate", "--scenario", "figure5", "-o", (dir / "s").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "s" / "data-graded-shifted.csv");
  const auto m = read_csv(in, true);
  EXPECT_EQ(m.items(), 4u);
  EXPECT_EQ(m.max_category(), 5);
  EXPECT_EQ(m.persons(), 100u);
}

TEST_F(CliTest, SimulateStudyFromConfigFile) {
  const auto cfg = write("cfg.json", R"({"model":"binary","response":"logistic","delta":[0,-1,1],
    "P":50,"replications":5,"seed":3,"estimators":["separation","cml"]})");
  const auto r = run({"simulate", cfg.string(), "--study", "-o", (dir / "s").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream table(slurp(dir / "s" / "study.csv"));
  std::string header, row, extra;
  std::getline(table, header);
  std::getline(table, row);
  EXPECT_EQ(header, "P,distribution,response,pairwise_separation,conditional");
  EXPECT_FALSE(std::getline(table, extra));
  EXPECT_TRUE(fs::exists(dir / "s" / "study.json"));
  EXPECT_EQ(run({"simulate", write("bad.json", "{").string()}).code, 2);
  EXPECT_EQ(run({"simulate", write("bad2.json", R"({"thresholds":[[0,-1]],"model":"graded"})").string()}).code, 2);
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  const auto data = normal_data();
  ASSERT_EQ(run({"estimate", "--model", "normal", data.string(), "-o", (dir / "a").string()}).code, 0);
  const auto r = run({"replay", (dir / "a" / "manifest.json").string(), "-o", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& entry : fs::directory_iterator(dir / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path().filename();

  // The manifest pins the input contents.
  std::ofstream(data, std::ios::app) << "1,1,1,1,1,1\n";
  EXPECT_EQ(run({"replay", (dir / "a" / "manifest.json").string(), "-o", (dir / "c").string()}).code, 2);
}

TEST_F(CliTest, NoTemporaryFilesLeftBehind) {
  const auto data = normal_data();
  ASSERT_EQ(run({"estimate", data.string(), "-o", (dir / "a").string()}).code, 0);
  for (const auto& entry : fs::directory_iterator(dir / "a")) EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Io, NumberFormattingRoundTrips) {
  for (double x : {0.1, -1.5, 1.0 / 3.0, 2.718281828459045, 1e-300}) EXPECT_EQ(std::stod(io::format_number(x)), x);
  EXPECT_EQ(io::format_number(std::nan("")), "NA");
}

TEST(Io, SimulationConfigRoundTrip) {
  auto c = builtin_scenario("figure5")->cells.back().config;
  c.persons = PersonDistribution::noncentral(1.5);
  const auto back = io::simulation_config_from_json(io::to_json(c));
  EXPECT_EQ(back.truth, c.truth);
  EXPECT_EQ(back.model, c.model);
  EXPECT_EQ(back.persons.kind, c.persons.kind);
  EXPECT_EQ(back.persons.mu, 1.5);
  EXPECT_EQ(back.estimators, c.estimators);
  EXPECT_EQ(io::to_json(back), io::to_json(c));
}
