#include "cli.hpp"

#include <stratspace/io.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace stratspace;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stratspace");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "stratspace_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  write_text(dir / "config.json", text);
  return dir / "config.json";
}

}  // namespace

TEST(FormatPercent, Examples) {
  EXPECT_EQ(cli::format_percent(660, 1045), "63.16%");
  EXPECT_EQ(cli::format_percent(0, 1045), "0.00%");
  EXPECT_EQ(cli::format_percent(1045, 1045), "100.00%");
  EXPECT_EQ(cli::format_percent(0.63125, 1), "63.12%");  // exact tie goes to even
  EXPECT_EQ(cli::format_percent(0.63135, 1), "63.14%");
}

TEST(FormatReport, Hectares) {
  EstimateReport r;
  r.scheme = Scheme::ss1;
  r.n = 50;
  r.t_hat = 660e4;
  r.domain_area = 1045e4;
  r.std_error = 58e4;
  r.ci = {r.t_hat - 1e5, r.t_hat + 1e5, 0.95};
  const std::string text = cli::format_report(r, "m2");
  EXPECT_NE(text.find("660.00 ha"), std::string::npos);
  EXPECT_NE(text.find("63.16%"), std::string::npos);
  EXPECT_EQ(cli::format_report(r, "").find("ha"), std::string::npos);
}

TEST(Cli, EstimateConstantField) {
  const auto dir = scratch("estimate");
  const auto cfg = write_config(dir, R"({"field": {"id": "constant", "value": 1}, "scheme": "SS1", "n": 16})");
  const auto r = run_cli({"estimate", "--config", cfg.string(), "--seed", "5", "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_text(dir / "o" / "report.json"));
  EXPECT_EQ(j["t_hat"].get<double>(), 1.0);
  EXPECT_EQ(j["config"]["seed"].get<int>(), 5);
}

TEST(Cli, RatesLinearSlope) {
  const auto dir = scratch("rates");
  const auto cfg = write_config(dir, R"({"field": "linear", "n_list": [16, 64, 256, 1024], "resolution": 512})");
  const auto r = run_cli({"rates", "--config", cfg.string(), "--seed", "1", "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_text(dir / "o" / "rates.json"));
  EXPECT_NEAR(j["ss_fit"]["slope"].get<double>(), -2.0, 0.01);
  EXPECT_TRUE(fs::exists(dir / "o" / "rates.csv"));
}

TEST(Cli, MissingRegionFileIsConfigError) {
  const auto dir = scratch("missing");
  const auto cfg = write_config(dir, R"({"field": "linear", "region": "nowhere/region.geojson"})");
  const auto r = run_cli({"oracle", "--config", cfg.string(), "--seed", "1", "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nowhere/region.geojson"), std::string::npos);
}

TEST(Cli, ConfigErrorsNameTheKey) {
  const auto dir = scratch("errors");
  EXPECT_EQ(run_cli({"teleport", "--seed", "1"}).code, 2);
  const auto noseed = run_cli({"estimate", "--out", (dir / "o").string()});
  EXPECT_EQ(noseed.code, 2);
  EXPECT_NE(noseed.err.find("'seed'"), std::string::npos);
  const auto cfg = write_config(dir, R"({"field": "linear", "scheme": "SRS"})");
  const auto bad = run_cli({"estimate", "--config", cfg.string(), "--seed", "1", "--out", (dir / "o").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("'scheme'"), std::string::npos);
  const auto cfg2 = write_config(dir, R"({"field": "linear", "n_list": [64, 16, 256, 1024]})");
  const auto order = run_cli({"rates", "--config", cfg2.string(), "--seed", "1", "--out", (dir / "o").string()});
  EXPECT_EQ(order.code, 2);
  EXPECT_NE(order.err.find("'n_list'"), std::string::npos);
}

TEST(Cli, UnwritableOutputIsIoError) {
  const auto r = run_cli({"stratify", "--seed", "1", "--n", "4", "--out", "/proc/no_such_dir"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, StratifyExportRoundTrip) {
  const auto dir = scratch("stratify");
  const auto cfg = write_config(dir, R"({"strata": "equal_area", "n": 9, "partition": {"resolution": 96}})");
  ASSERT_EQ(run_cli({"stratify", "--config", cfg.string(), "--seed", "2", "--out", (dir / "o").string()}).code, 0);
  const auto s = parse_stratification_json(read_text(dir / "o" / "strata.json"));
  const auto j = nlohmann::json::parse(read_text(dir / "o" / "diagnostics.json"));
  EXPECT_EQ(diagnostics(s).d_n, j["diagnostics"]["d_n"].get<double>());
  EXPECT_EQ(diagnostics(s).big_d_n, j["diagnostics"]["big_d_n"].get<double>());
  EXPECT_TRUE(fs::exists(dir / "o" / "strata.svg"));
}

TEST(Cli, FlagsOverrideFileKeys) {
  const auto dir = scratch("override");
  const auto cfg = write_config(dir, R"({"field": "linear", "scheme": "URS", "n": 4, "seed": 9})");
  ASSERT_EQ(run_cli({"sample", "--config", cfg.string(), "--n", "7", "--out", (dir / "o").string()}).code, 0);
  const auto j = nlohmann::json::parse(read_text(dir / "o" / "plan.json"));
  EXPECT_EQ(j["sites"].size(), 7u);
  EXPECT_EQ(j["seed"].get<int>(), 9);
}
