#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "revival/cli.hpp"

namespace {

using namespace revival;
namespace fs = std::filesystem;

const fs::path kScenarios = fs::path(REVIVAL_SOURCE_DIR) / "scenarios";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "revival");
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

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("revival_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(root_ / name) << text;
    return root_ / name;
  }
  fs::path artifacts(const fs::path& scenario) const {
    return root_ / "out" / scenario_hash(load_scenario(scenario));
  }
  std::string out_dir() const { return (root_ / "out").string(); }

  fs::path root_;
};

double scale_from(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 3));
}

TEST_F(Cli, ScalesForBox) {
  const auto r = run_cli({"--scenario", (kScenarios / "box.json").string(), "scales"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(scale_from(r.out, "T_cl "), 2.0 / (15.0 * M_PI), 1e-15);
  EXPECT_NEAR(scale_from(r.out, "t_rev"), 4.0 / M_PI, 1e-14);
  EXPECT_NE(r.out.find("t_sr  = unbounded"), std::string::npos);
  EXPECT_NE(r.out.find("class = PerfectRevivals"), std::string::npos);
  EXPECT_NE(r.out.find("n_bar = 15"), std::string::npos);
}

TEST_F(Cli, ScalesForHydrogenInNanoseconds) {
  const auto r = run_cli({"--scenario", (kScenarios / "hydrogen.json").string(), "--units", "ns", "scales"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(scale_from(r.out, "T_cl ") / 0.26, 1.0, 0.015);
  EXPECT_NEAR(scale_from(r.out, "t_rev") / 21.0, 1.0, 0.005);
  EXPECT_NEAR(scale_from(r.out, "t_sr ") / 1890.0, 1.0, 0.005);
  EXPECT_NE(r.out.find("class = Superrevivals"), std::string::npos);
}

TEST_F(Cli, ScalesForOscillatorAndFreeParticle) {
  const auto sho = run_cli({"--scenario", (kScenarios / "sho.json").string(), "scales"});
  ASSERT_EQ(sho.code, 0) << sho.err;
  EXPECT_NE(sho.out.find("t_rev = unbounded"), std::string::npos);
  EXPECT_NE(sho.out.find("class = PerfectlyPeriodic"), std::string::npos);
  const auto free = run_cli({"--scenario", (kScenarios / "free.json").string(), "scales"});
  ASSERT_EQ(free.code, 0) << free.err;
  EXPECT_NE(free.out.find("continuous spectrum"), std::string::npos);
}

TEST_F(Cli, DensityIsNormalizedAndIndexed) {
  const auto scenario = kScenarios / "box.json";
  const auto r = run_cli({"--scenario", scenario.string(), "--out", out_dir(), "--quiet", "density"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto dir = artifacts(scenario);
  const auto csv = dir / "density_0_mod_t_rev.csv";
  ASSERT_TRUE(fs::exists(csv));

  // Independent trapezoid over the written samples.
  std::istringstream in(slurp(csv));
  std::string line;
  std::vector<double> x, rho;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    const auto comma = line.find(',');
    x.push_back(std::stod(line.substr(0, comma)));
    rho.push_back(std::stod(line.substr(comma + 1)));
  }
  ASSERT_EQ(x.size(), 1000u);
  double integral = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) integral += 0.5 * (rho[i] + rho[i - 1]) * (x[i] - x[i - 1]);
  EXPECT_NEAR(integral, 1.0, 1e-6);

  const auto index = Json::parse(slurp(dir / "index.json"));
  EXPECT_EQ(index["scenario"], scenario_hash(load_scenario(scenario)));
  EXPECT_EQ(index["artifacts"].size(), 5u);
  EXPECT_EQ(index["artifacts"]["density 0 mod t_rev"], "density_0_mod_t_rev.csv");

  // Later commands add to the index rather than replacing it.
  ASSERT_EQ(run_cli({"--scenario", scenario.string(), "--out", out_dir(), "--quiet", "report"}).code, 0);
  const auto merged = Json::parse(slurp(dir / "index.json"));
  EXPECT_EQ(merged["artifacts"].size(), 6u);
  EXPECT_EQ(merged["artifacts"]["report"], "report.json");
}

TEST_F(Cli, TwoDimensionalDensityUsesBinaryPayload) {
  const auto scenario = write("h.json", R"({"name":"h","system":{"kind":"hydrogen"},
    "weights":{"kind":"gaussian","n_bar":120,"sigma":2.5},"times":["0"],
    "grid":[{"name":"x","min":-20000,"max":20000,"count":64},{"name":"y","min":-20000,"max":20000,"count":32}]})");
  const auto r = run_cli({"--scenario", scenario.string(), "--out", out_dir(), "density"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dir = artifacts(scenario);
  const auto header = Json::parse(slurp(dir / "density_0.json"));
  EXPECT_EQ(header["payload"], "density_0.bin");
  EXPECT_EQ(header["size"], 64 * 32);
  const auto values = read_density_payload(slurp(dir / "density_0.bin"));
  ASSERT_EQ(values.size(), 64u * 32u);
  for (double v : values) {
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_GE(v, 0.0);
  }
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  for (const char* name : {"box.json", "rotator.json", "free.json"}) {
    const auto scenario = kScenarios / name;
    std::map<std::string, std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
      const auto out = (root_ / ("pass" + std::to_string(pass))).string();
      for (const char* cmd : {"density", "autocorr", "report"}) {
        if (std::string(name) == "free.json" && std::string(cmd) == "density") continue;
        ASSERT_EQ(run_cli({"--scenario", scenario.string(), "--out", out, "--quiet", cmd}).code, 0) << name << cmd;
      }
      for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), out).string();
        if (pass == 0) {
          first[rel] = slurp(entry.path());
        } else {
          ASSERT_TRUE(first.count(rel)) << rel;
          EXPECT_EQ(first[rel], slurp(entry.path())) << rel;
        }
      }
    }
    fs::remove_all(root_ / "pass0");
    fs::remove_all(root_ / "pass1");
  }
}

TEST_F(Cli, AutocorrHeaderAndUnits) {
  const auto scenario = kScenarios / "box.json";
  ASSERT_EQ(run_cli({"--scenario", scenario.string(), "--out", out_dir(), "--units", "ns", "--quiet", "autocorr"}).code, 0);
  std::istringstream in(slurp(artifacts(scenario) / "autocorr.csv"));
  std::string l1, l2, l3, l4, l5;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  std::getline(in, l4);
  std::getline(in, l5);
  EXPECT_EQ(l1, "# units=ns");
  EXPECT_EQ(l2, "# scenario=" + scenario_hash(load_scenario(scenario)));
  EXPECT_EQ(l3.rfind("# dt=", 0), 0u);
  EXPECT_EQ(l4, "t,A2");
  EXPECT_EQ(l5, "0,1");
}

TEST_F(Cli, PrintConfigRoundTrips) {
  const auto scenario = kScenarios / "hydrogen.json";
  const auto r = run_cli({"--scenario", scenario.string(), "--print-config"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto copy = write("copy.json", r.out);
  EXPECT_EQ(load_scenario(copy), load_scenario(scenario));
  EXPECT_EQ(run_cli({"--scenario", copy.string(), "--print-config"}).out, r.out);
}

TEST_F(Cli, InvalidInputExitsNonZero) {
  const auto missing = run_cli({"--scenario", (root_ / "nope.json").string(), "scales"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(missing.err.rfind("error: ", 0), 0u);

  const auto broken = write("broken.json", "{\n  \"system\": {\"kind\": \"well\"},\n  \"weights\": 7\n}\n");
  const auto bad = run_cli({"--scenario", broken.string(), "scales"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find(broken.string() + ":3:"), std::string::npos) << bad.err;

  const auto sho_rev = write("sho_rev.json", R"({"system":{"kind":"sho"},"weights":{"kind":"gaussian","n_bar":15,"sigma":1.5},"times":["1/2 t_rev"]})");
  const auto unbounded = run_cli({"--scenario", sho_rev.string(), "--out", out_dir(), "density"});
  EXPECT_EQ(unbounded.code, 2);
  EXPECT_NE(unbounded.err.find("time scale t_rev is unbounded for this scenario"), std::string::npos);

  EXPECT_NE(run_cli({"--scenario", (kScenarios / "box.json").string(), "--units", "fortnights", "scales"}).code, 0);
  EXPECT_NE(run_cli({"scales"}).code, 0);
  EXPECT_EQ(run_cli({"--scenario", (kScenarios / "box.json").string()}).code, 2);
  EXPECT_EQ(run_cli({"--scenario", (kScenarios / "free.json").string(), "--out", out_dir(), "density"}).code, 2);

  const auto off_grid = write("off.json", R"({"system":{"kind":"well"},"weights":{"kind":"gaussian","n_bar":15,"sigma":1.5},
    "times":["0"],"grid":[{"name":"x","min":-1,"max":1,"count":10}]})");
  EXPECT_EQ(run_cli({"--scenario", off_grid.string(), "--out", out_dir(), "density"}).code, 2);
}

TEST_F(Cli, ThirdOrderEvolverMatchesExactForBox) {
  const auto scenario = kScenarios / "box.json";
  const auto a = (root_ / "a").string();
  const auto b = (root_ / "b").string();
  ASSERT_EQ(run_cli({"--scenario", scenario.string(), "--out", a, "--quiet", "density"}).code, 0);
  ASSERT_EQ(run_cli({"--scenario", scenario.string(), "--out", b, "--quiet", "--evolver", "third-order", "density"}).code, 0);
  const auto hash = scenario_hash(load_scenario(scenario));
  std::istringstream ia(slurp(fs::path(a) / hash / "density_1o4_T_cl_mod_t_rev.csv"));
  std::istringstream ib(slurp(fs::path(b) / hash / "density_1o4_T_cl_mod_t_rev.csv"));
  std::string la, lb;
  double worst = 0.0;
  while (std::getline(ia, la) && std::getline(ib, lb)) {
    if (la.empty() || la[0] == '#' || la[0] == 'x') continue;
    worst = std::max(worst, std::abs(std::stod(la.substr(la.find(',') + 1)) - std::stod(lb.substr(lb.find(',') + 1))));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST_F(Cli, ReportForBoxFindsFractionalRevivals) {
  const auto scenario = kScenarios / "box.json";
  const auto r = run_cli({"--scenario", scenario.string(), "--out", out_dir(), "report"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = Json::parse(slurp(artifacts(scenario) / "report.json"));
  EXPECT_EQ(report["scenario"], scenario_hash(load_scenario(scenario)));
  int found = 0;
  for (const auto& id : report["identified"]) {
    if (id["label"] == "1/4 t_rev" || id["label"] == "1/2 t_rev" || id["label"] == "3/4 t_rev") {
      EXPECT_TRUE(id["found"].get<bool>()) << id.dump();
      ++found;
    }
  }
  EXPECT_EQ(found, 3);
}

}  // namespace
