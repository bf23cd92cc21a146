#pragma once

// Command implementations behind the selberg-edge executable. Each command
// turns a RunConfig into a Report; formatting and exit codes live here too so
// the acceptance binary can run the same code paths.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "selberg_edge/hecke.hpp"

namespace selberg_edge::app {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2, kCertificateFailure = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EigenPolicy { cache_first, compute, file };
enum class Format { csv, json };

struct RunConfig {
  std::vector<std::int64_t> levels;
  std::optional<std::int64_t> c_max;
  std::optional<std::int64_t> l_max;
  int ibp_order = 6;
  double quad_tol = 1e-13;
  EigenPolicy eigen_policy = EigenPolicy::cache_first;
  std::filesystem::path eigen_file;
  std::optional<std::filesystem::path> cache_dir;  // default: EigenCache::default_dir()
  Format format = Format::csv;
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t seed = 20240607;
  int threads = 0;  // 0: hardware concurrency

  // Command-specific.
  std::vector<std::int64_t> m_values{1, 2, 3, 4};
  std::vector<std::int64_t> n_values{1, 2, 3, 4};
  std::vector<int> s_values{0, 1};
  std::vector<double> Y_values{8, 16, 32};
  std::string bsum_mode = "both";
  std::int64_t p_max = 100;
  bool oracle = true;

  nlohmann::json echo() const;
};

/// "11,17,23", "11..101" (primes in range) or a mix; every entry must be prime.
std::vector<std::int64_t> parse_levels(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
EigenPolicy parse_eigen_source(const std::string& text, std::filesystem::path* file);

/// Applies a JSON config file; unknown keys are rejected.
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
  bool certificate = false;  // failure maps to exit code 3
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;
  std::vector<Series> plots;
  double wall_seconds = 0.0;

  int exit_code() const;
};

std::string format_cell(const Cell& c);
std::string to_csv(const Report& r);
std::string to_json(const Report& r);
std::string series_csv(const Series& s);

/// Writes <command>.csv|json and <command>_<series>.csv into out_dir, or the
/// report alone to stdout when out_dir is empty.
void emit(const Report& r, const RunConfig& cfg);

/// Eigenvalue systems covering primes up to p_max under the configured policy.
class EigenProvider {
 public:
  explicit EigenProvider(const RunConfig& cfg);
  std::vector<hecke::EigenSystem> get(std::int64_t N, std::int64_t p_max) const;

 private:
  const RunConfig& cfg_;
  std::optional<std::map<std::int64_t, std::vector<hecke::EigenSystem>>> table_;
};

/// Runs fn(i) for i in [0, n) on a worker pool; results are written by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

Report cmd_expsum_check(const RunConfig& cfg);
Report cmd_average(const RunConfig& cfg);
Report cmd_petersson(const RunConfig& cfg);
Report cmd_afe(const RunConfig& cfg);
Report cmd_bsum(const RunConfig& cfg);
Report cmd_eigen(const RunConfig& cfg);

/// Dispatch by command name; throws UsageError for an unknown name.
Report run_command(const std::string& name, const RunConfig& cfg);
const std::vector<std::string>& command_names();

}  // namespace selberg_edge::app
