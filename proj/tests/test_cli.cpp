#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "spincal/cli.hpp"
#include "spincal/linalg.hpp"

using namespace spincal;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("spincal_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const json& doc, const std::string& name = "config.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p;
  }

  int invoke(std::vector<std::string> args) {
    std::vector<const char*> argv{"spincal"};
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t col(const std::string& name) const {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  }
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  for (std::string f; std::getline(hs, f, ',');) c.header.push_back(f);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    for (std::string f; std::getline(ls, f, ',');) row.push_back(std::stod(f));
    c.rows.push_back(row);
  }
  return c;
}

double printed(const std::string& text, const std::string& key) {
  const std::size_t at = text.find(key + " = ");
  if (at == std::string::npos) return std::nan("");
  return std::stod(text.substr(at + key.size() + 3));
}

json bc2_run() {
  return {{"name", "bc2"},
          {"model", {{"type", "spinless"}, {"family", "BC"}, {"n", 2}, {"kappa", 3.0}, {"x", 1.0}}},
          {"q", {2.0, 1.0}},
          {"p", {0.1, -0.2}},
          {"t_end", 10.0},
          {"tol", 1e-10},
          {"sample_dt", 0.1}};
}

}  // namespace

TEST_F(CliTest, SimulateSpinlessBc2) {
  ASSERT_EQ(invoke({"simulate", "--config", write_config(bc2_run()).string(), "--out", dir_.string()}), 0)
      << err_.str();
  const Csv csv = parse_csv(read(dir_ / "bc2.trajectory.csv"));
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "q1", "q2", "p1", "p2", "H"}));
  EXPECT_EQ(csv.rows.size(), 101u);
  const json report = json::parse(read(dir_ / "bc2.report.json"));
  EXPECT_EQ(report["status"], "ok");
  EXPECT_EQ(report["version"], cli::kVersion);
  EXPECT_EQ(report["config_hash"].get<std::string>().size(), 16u);
  EXPECT_LT(report["drift"]["energy_relative_drift"].get<double>(), 1e-8);
  const double h0 = csv.rows.front()[csv.col("H")];
  for (const auto& r : csv.rows) EXPECT_LT(std::abs(r[csv.col("H")] - h0), 1e-8 * std::abs(h0));
}

TEST_F(CliTest, ProjectionAgreesWithDirect) {
  json run = bc2_run();
  ASSERT_EQ(invoke({"simulate", "--config", write_config(run).string(), "--out", dir_.string()}), 0);
  const Csv direct = parse_csv(read(dir_ / "bc2.trajectory.csv"));
  ASSERT_EQ(invoke({"simulate", "--config", write_config(run).string(), "--out", (dir_ / "proj").string(),
                    "--method", "projection"}),
            0)
      << err_.str();
  const Csv proj = parse_csv(read(dir_ / "proj" / "bc2.trajectory.csv"));
  ASSERT_EQ(direct.rows.size(), proj.rows.size());
  for (std::size_t i = 0; i < direct.rows.size(); ++i)
    for (const char* c : {"q1", "q2"})
      EXPECT_NEAR(direct.rows[i][direct.col(c)], proj.rows[i][proj.col(c)], 1e-6) << i;
  EXPECT_EQ(json::parse(read(dir_ / "proj" / "bc2.report.json"))["method"], "projection");
}

TEST_F(CliTest, FreeMotionIsLinear) {
  const json run = {{"name", "free"},
                    {"space", {{"family", "su"}, {"m", 3}, {"n", 2}}},
                    {"model", {{"type", "free"}}},
                    {"q", {2.0, 1.0}},
                    {"p", {0.3, -0.4}},
                    {"t_end", 2.0}};
  ASSERT_EQ(invoke({"simulate", "--config", write_config(run).string(), "--out", dir_.string()}), 0)
      << err_.str();
  const Csv csv = parse_csv(read(dir_ / "free.trajectory.csv"));
  for (const auto& r : csv.rows) {
    EXPECT_NEAR(r[csv.col("q1")], 2.0 + 0.3 * r[0], 1e-12);
    EXPECT_NEAR(r[csv.col("q2")], 1.0 - 0.4 * r[0], 1e-12);
    EXPECT_EQ(r[csv.col("p1")], 0.3);
  }
}

TEST_F(CliTest, SpectrumIsRealAtZeroAndStable) {
  json run = {{"name", "spin"},
              {"space", {{"family", "su"}, {"m", 2}, {"n", 2}}},
              {"model", {{"type", "random_spin"}, {"scale", 0.5}}},
              {"seed", 7},
              {"q", {2.0, 0.8}},
              {"p", {0.2, -0.1}},
              {"t_end", 2.0},
              {"spectrum_x", {0.0, 1.0}}};
  ASSERT_EQ(invoke({"spectrum", "--config", write_config(run).string(), "--out", dir_.string()}), 0)
      << err_.str();
  const Csv csv = parse_csv(read(dir_ / "spin.spectrum.csv"));
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "x", "index", "re", "im"}));
  std::size_t zero_rows = 0;
  for (const auto& r : csv.rows)
    if (r[1] == 0.0) {
      ++zero_rows;
      EXPECT_LT(std::abs(r[4]), 1e-9);
    }
  EXPECT_GT(zero_rows, 0u);
  const json report = json::parse(read(dir_ / "spin.spectrum.json"));
  for (const auto& s : report["drift"]["spectra"]) EXPECT_LT(s["max_relative_drift"].get<double>(), 1e-7);
}

TEST_F(CliTest, FreeSpectrumIsThatOfMomentum) {
  const json run = {{"name", "free"},
                    {"space", {{"family", "su"}, {"m", 2}, {"n", 1}}},
                    {"model", {{"type", "free"}}},
                    {"q", {1.0}},
                    {"p", {0.5}},
                    {"t_end", 1.0},
                    {"spectrum_x", {0.0}}};
  ASSERT_EQ(invoke({"spectrum", "--config", write_config(run).string(), "--out", dir_.string()}), 0);
  const Csv csv = parse_csv(read(dir_ / "free.spectrum.csv"));
  const SpacePtr s = build_space(SpaceSpec::su(2, 1));
  const auto want = linalg::sorted_spectrum(s->embed(CartanPoint{0.5}));
  for (const auto& r : csv.rows) {
    const auto i = static_cast<std::size_t>(r[2]);
    EXPECT_EQ(r[3], want[i].real());
    EXPECT_EQ(r[4], want[i].imag());
  }
}

TEST_F(CliTest, DeterministicOutput) {
  json run = {{"name", "orbit"},
              {"space", {{"family", "su"}, {"m", 3}, {"n", 2}}},
              {"model", {{"type", "random_spin"}}},
              {"seed", 11},
              {"q", {2.0, 0.9}},
              {"p", {0.1, 0.2}},
              {"t_end", 1.0}};
  const std::string cfg = write_config(run).string();
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", (dir_ / "a").string()}), 0);
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", (dir_ / "b").string()}), 0);
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", (dir_ / "c").string(), "--seed", "12"}), 0);
  EXPECT_EQ(read(dir_ / "a" / "orbit.trajectory.csv"), read(dir_ / "b" / "orbit.trajectory.csv"));
  EXPECT_EQ(read(dir_ / "a" / "orbit.report.json"), read(dir_ / "b" / "orbit.report.json"));
  EXPECT_NE(read(dir_ / "a" / "orbit.trajectory.csv"), read(dir_ / "c" / "orbit.trajectory.csv"));
}

TEST_F(CliTest, ParallelRunsMatchSerial) {
  json runs = json::array();
  for (int i = 0; i < 4; ++i) {
    json r = bc2_run();
    r["name"] = "r" + std::to_string(i);
    r["t_end"] = 1.0;
    r["q"] = {2.0 + 0.1 * i, 1.0};
    runs.push_back(r);
  }
  const std::string cfg = write_config({{"runs", runs}}).string();
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", (dir_ / "s").string()}), 0);
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", (dir_ / "p").string(), "--jobs", "3"}), 0);
  for (int i = 0; i < 4; ++i) {
    const std::string f = "r" + std::to_string(i) + ".trajectory.csv";
    EXPECT_EQ(read(dir_ / "s" / f), read(dir_ / "p" / f));
  }
}

TEST_F(CliTest, ConfigErrorsExitOneWithoutOutput) {
  const fs::path out = dir_ / "out";
  auto expect_rejected = [&](json run) {
    EXPECT_EQ(invoke({"simulate", "--config", write_config(run).string(), "--out", out.string()}), 1)
        << run.dump();
    EXPECT_FALSE(fs::exists(out)) << run.dump();
  };
  json r = bc2_run();
  r["bogus"] = 1;
  expect_rejected(r);
  r = bc2_run();
  r["tol"] = 1e-3;
  expect_rejected(r);
  r = bc2_run();
  r["t_end"] = -1.0;
  expect_rejected(r);
  r = bc2_run();
  r["q"] = {1.0, 2.0};
  expect_rejected(r);
  r = bc2_run();
  r["q"] = {2.0, 1.0, 0.5};
  expect_rejected(r);
  r = bc2_run();
  r["model"]["x"] = 2.0;
  expect_rejected(r);
  r = bc2_run();
  r["model"]["extra"] = true;
  expect_rejected(r);
  r = bc2_run();
  r["method"] = "euler";
  expect_rejected(r);
  r = bc2_run();
  r["monitors"] = {{{"class", "block_invariant"}, {"k", 1}, {"x", 0.5}, {"y", 1}}};
  expect_rejected(r);
  EXPECT_EQ(invoke({"simulate", "--config", (dir_ / "missing.json").string()}), 1);
  EXPECT_EQ(invoke({"simulate"}), 1);
  EXPECT_EQ(invoke({"simulate", "--config", write_config(bc2_run()).string(), "--method", "euler"}), 1);
  std::ofstream(dir_ / "broken.json") << "{ \"q\": [1, ";
  EXPECT_EQ(invoke({"simulate", "--config", (dir_ / "broken.json").string(), "--out", out.string()}), 1);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, WallCollisionExitsTwoWithPartialOutput) {
  const json run = {{"name", "wall"},
                    {"space", {{"family", "su"}, {"m", 2}, {"n", 2}}},
                    {"model", {{"type", "free"}}},
                    {"q", {2.0, 1.0}},
                    {"p", {-1.5, 1.5}},
                    {"t_end", 2.0}};
  EXPECT_EQ(invoke({"simulate", "--config", write_config(run).string(), "--out", dir_.string()}), 2);
  const json report = json::parse(read(dir_ / "wall.report.json"));
  EXPECT_EQ(report["status"], "wall_collision");
  const double last = report["last_safe_t"].get<double>();
  EXPECT_GT(last, 0.0);
  EXPECT_LT(last, 1.0 / 3.0);
  const Csv csv = parse_csv(read(dir_ / "wall.trajectory.csv"));
  EXPECT_LE(csv.rows.back()[0], last);
  for (const auto& e : fs::directory_iterator(dir_)) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST_F(CliTest, AtomicWriteReplacesTarget) {
  const fs::path p = dir_ / "x.txt";
  cli::write_atomic(p, "one");
  cli::write_atomic(p, "two");
  EXPECT_EQ(read(p), "two");
  EXPECT_FALSE(fs::exists(dir_ / "x.txt.tmp"));
}

TEST_F(CliTest, Couplings) {
  ASSERT_EQ(invoke({"couplings", "--n", "2", "--kappa", "3", "--x", "1"}), 0);
  EXPECT_NE(out_.str().find("g = 2\n"), std::string::npos);
  EXPECT_NEAR(printed(out_.str(), "g1"), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(printed(out_.str(), "g2"), 3.0 / std::sqrt(2.0), 1e-15);
  EXPECT_LT(std::abs(printed(out_.str(), "relation residual")), 1e-13);
  ASSERT_EQ(invoke({"couplings", "--n", "1", "--kappa", "1", "--x", "0"}), 0);
  EXPECT_NE(out_.str().find("g = 0.5\n"), std::string::npos);
  EXPECT_NEAR(printed(out_.str(), "g1"), std::sqrt(0.5), 1e-15);
  EXPECT_NE(out_.str().find("g2 = 0\n"), std::string::npos);
  EXPECT_LT(std::abs(printed(out_.str(), "relation residual")), 1e-15);
  EXPECT_EQ(invoke({"couplings", "--n", "2", "--kappa", "1", "--x", "1"}), 1);
  EXPECT_NE(err_.str().find("kappa - n x"), std::string::npos);
}

TEST_F(CliTest, VerifyPassesOnSmallSpaces) {
  const json doc = {{"spaces", {{{"family", "su"}, {"m", 2}, {"n", 1}}, {{"family", "su"}, {"m", 2}, {"n", 2}}}},
                    {"bc_cases", {{{"n", 1}, {"kappa", 1.0}, {"x", 0.0}}, {{"n", 2}, {"kappa", 3.0}, {"x", 1.0}}}},
                    {"samples", 5}};
  ASSERT_EQ(invoke({"verify", "--config", write_config(doc).string(), "--out", dir_.string()}), 0) << out_.str();
  const json result = json::parse(read(dir_ / "verify.json"));
  EXPECT_TRUE(result["pass"].get<bool>());
  for (const auto& row : result["checks"]) {
    EXPECT_TRUE(row["pass"].get<bool>()) << row.dump();
    EXPECT_LE(row["residual"].get<double>(), row["tol"].get<double>());
  }
}

TEST_F(CliTest, VerifyNamesInadmissibleCase) {
  const json doc = {{"spaces", {{{"family", "su"}, {"m", 2}, {"n", 1}}}},
                    {"bc_cases", {{{"n", 2}, {"kappa", 1.0}, {"x", 1.0}}}},
                    {"samples", 2}};
  EXPECT_EQ(invoke({"verify", "--config", write_config(doc).string(), "--out", dir_.string()}), 3);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
  EXPECT_NE(out_.str().find("kappa - n x"), std::string::npos);
}

TEST_F(CliTest, VerifyEmptySpaceListIsUsageError) {
  EXPECT_EQ(invoke({"verify", "--config", write_config({{"spaces", json::array()}}).string(), "--out",
                    (dir_ / "v").string()}),
            1);
  EXPECT_FALSE(fs::exists(dir_ / "v"));
}

TEST(CliFormat, DoublesAndHash) {
  EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::format_double(2.0), "2");
  EXPECT_EQ(cli::hex64(cli::fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(cli::hex64(cli::fnv1a64("a")), "af63dc4c8601ec8c");
}
