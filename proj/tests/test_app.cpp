#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "app.hpp"
#include "selberg_edge/lfun.hpp"

using namespace selberg_edge;
using namespace selberg_edge::app;

namespace {

RunConfig scratch_config(const char* name) {
  RunConfig cfg;
  const auto dir = std::filesystem::temp_directory_path() / (std::string("selberg_edge_app_") + name);
  std::filesystem::remove_all(dir);
  cfg.cache_dir = dir / "cache";
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("level lists") {
  CHECK(parse_levels("11,17,23") == std::vector<std::int64_t>{11, 17, 23});
  CHECK(parse_levels("11..31") == std::vector<std::int64_t>{11, 13, 17, 19, 23, 29, 31});
  CHECK(parse_levels("23, 11, 11..13") == std::vector<std::int64_t>{11, 13, 23});
  CHECK_THROWS_AS(parse_levels("12"), UsageError);
  CHECK_THROWS_AS(parse_levels("11,,13"), UsageError);
  CHECK_THROWS_AS(parse_levels("24..28"), UsageError);
  CHECK_THROWS_AS(parse_levels("x"), UsageError);
  std::filesystem::path f;
  CHECK(parse_eigen_source("file:/tmp/a.csv", &f) == EigenPolicy::file);
  CHECK(f == "/tmp/a.csv");
  CHECK(parse_eigen_source("cache", nullptr) == EigenPolicy::cache_first);
  CHECK_THROWS_AS(parse_eigen_source("file:", nullptr), UsageError);
}

TEST_CASE("config files") {
  const auto dir = std::filesystem::temp_directory_path() / "selberg_edge_app_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << R"({"levels": "11..19", "cmax": 5000, "seed": 7, "Y": [8, 16]})";
    RunConfig cfg;
    apply_config_file(dir / "ok.json", cfg);
    CHECK(cfg.levels == std::vector<std::int64_t>{11, 13, 17, 19});
    CHECK(cfg.c_max == 5000);
    CHECK(cfg.seed == 7u);
    CHECK(cfg.Y_values == std::vector<double>{8, 16});
  }
  std::ofstream(dir / "bad.json") << R"({"levels": [11], "colour": "blue"})";
  RunConfig cfg;
  CHECK_THROWS_AS(apply_config_file(dir / "bad.json", cfg), UsageError);
  std::ofstream(dir / "type.json") << R"({"cmax": "many"})";
  CHECK_THROWS_AS(apply_config_file(dir / "type.json", cfg), UsageError);
  CHECK_THROWS_AS(apply_config_file(dir / "missing.json", cfg), UsageError);
}

TEST_CASE("cell formatting and CSV") {
  CHECK(format_cell(std::int64_t{-3}) == "-3");
  CHECK(format_cell(0.1) == "0.10000000000000001");
  CHECK(format_cell(NAN) == "nan");
  CHECK(format_cell(std::string("a,b")) == "\"a,b\"");
  Report r;
  r.command = "x";
  r.columns = {"a", "b"};
  r.rows = {{std::int64_t{1}, 2.5}};
  CHECK(to_csv(r) == "a,b\n1,2.5\n");
  CHECK(to_json(r).find("\"schema_version\": 1") != std::string::npos);
  CHECK(series_csv({"d", {{11, 0.5}}}) == "x,y\n11,0.5\n");
  r.checks.push_back({"c", false, "", false});
  CHECK(r.exit_code() == kCheckFailure);
  r.checks.push_back({"d", false, "", true});
  CHECK(r.exit_code() == kCertificateFailure);
}

TEST_CASE("expsum-check") {
  auto cfg = scratch_config("expsum");
  cfg.c_max = 60;
  cfg.l_max = 3;
  const auto r = run_command("expsum-check", cfg);
  CHECK(r.exit_code() == kPass);
  CHECK(r.rows.size() == 60 * 7);
  // c = 1 rows carry the value 1.
  CHECK(std::get<std::int64_t>(r.rows[3][1]) == 1);
  CHECK(std::get<std::int64_t>(r.rows[3][3]) == 1);
  cfg.c_max = 20000;
  CHECK_THROWS_AS(run_command("expsum-check", cfg), UsageError);
  CHECK_THROWS_AS(run_command("nope", cfg), UsageError);
}

TEST_CASE("eigen, petersson and average reports") {
  auto cfg = scratch_config("reports");
  cfg.levels = {11, 13};
  cfg.p_max = 7;
  const auto e = run_command("eigen", cfg);
  REQUIRE(e.rows.size() == 4);
  CHECK(to_csv(e) == "level,form,p,ap\n11,0,2,-2\n11,0,3,-1\n11,0,5,1\n11,0,7,-2\n");

  cfg.m_values = {1};
  cfg.n_values = {1};
  cfg.levels = {13};
  cfg.c_max = 20000;
  const auto p = run_command("petersson", cfg);
  REQUIRE(p.rows.size() == 1);
  CHECK(std::get<double>(p.rows[0][3]) == 0.0);
  CHECK(p.exit_code() == kPass);

  cfg.levels = {11, 13, 17};
  const auto a = run_command("average", cfg);
  REQUIRE(a.rows.size() == 3);
  CHECK(std::get<std::string>(a.rows[1].back()) == "empty average");
  for (const auto& row : a.rows) CHECK(std::get<double>(row[3]) == doctest::Approx(-1.1399220).epsilon(1e-7));
  CHECK(a.plots.size() == 2);
  CHECK(a.plots[0].points.size() == 2);
  // Second run reads the cache written by the first and prints the same bytes.
  CHECK(to_csv(run_command("average", cfg)) == to_csv(a));
}

TEST_CASE("afe and bsum reports") {
  auto cfg = scratch_config("afe");
  cfg.levels = {11};
  const auto r = run_command("afe", cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(std::get<double>(r.rows[0][6]) < 1e-6);
  CHECK(r.exit_code() == kPass);

  cfg.c_max = 200;
  cfg.s_values = {0};
  cfg.Y_values = {8};
  CHECK(run_command("bsum", cfg).exit_code() == kPass);
  cfg.ibp_order = 1;
  CHECK(run_command("bsum", cfg).exit_code() == kCertificateFailure);
  cfg.ibp_order = 9;
  CHECK_THROWS_AS(run_command("bsum", cfg), UsageError);
}

TEST_CASE("eigenvalues from a file") {
  auto cfg = scratch_config("file");
  const auto dir = std::filesystem::temp_directory_path() / "selberg_edge_app_file";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "t.csv") << "level,form,p,ap\n11,0,2,-2\n11,0,3,-1\n11,0,5,1\n11,0,7,-2\n";
  cfg.eigen_policy = EigenPolicy::file;
  cfg.eigen_file = dir / "t.csv";
  cfg.levels = {11};
  cfg.p_max = 7;
  CHECK(run_command("eigen", cfg).rows.size() == 4);
  // The afe needs many more primes than the file has.
  const auto r = run_command("afe", cfg);
  CHECK(r.exit_code() == kCheckFailure);
  CHECK(r.rows.empty());
}
