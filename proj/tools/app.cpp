#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "selberg_edge/arith.hpp"
#include "selberg_edge/expsum.hpp"
#include "selberg_edge/lfun.hpp"
#include "selberg_edge/petersson.hpp"

namespace selberg_edge::app {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError(fmt::format("not an integer: '{}'", s));
  return v;
}

double to_double(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError(fmt::format("not a number: '{}'", s));
  return v;
}

std::vector<std::int64_t> levels_or(const RunConfig& cfg, std::vector<std::int64_t> fallback) {
  return cfg.levels.empty() ? fallback : cfg.levels;
}

const char* policy_name(EigenPolicy p) {
  switch (p) {
    case EigenPolicy::compute: return "compute";
    case EigenPolicy::file: return "file";
    default: return "cache";
  }
}

// Kernels and eigen systems for one level.
struct LevelData {
  lfun::LevelKernels kernels;
  std::vector<hecke::EigenSystem> systems;
};

LevelData level_data(std::int64_t N, const EigenProvider& eigen, bool oracle) {
  lfun::AfeConfig afe;
  afe.oracle = oracle;
  lfun::LevelKernels k(N, afe);
  auto sys = hecke::genus_prime_level(N) == 0 ? std::vector<hecke::EigenSystem>{} : eigen.get(N, k.length());
  return {std::move(k), std::move(sys)};
}

// Per-level outcome of a command; rows are appended in level order afterwards.
struct LevelResult {
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;
};

Check failure_check(std::int64_t N, const std::exception& e) {
  Check c{fmt::format("level {}", N), false, e.what(), false};
  c.certificate = dynamic_cast<const petersson::CertificateError*>(&e) != nullptr;
  return c;
}

template <class F>
Report per_level(Report r, const RunConfig& cfg, const std::vector<std::int64_t>& levels, F&& body) {
  std::vector<LevelResult> results(levels.size());
  parallel_for(levels.size(), cfg.threads, [&](std::size_t i) {
    try {
      results[i] = body(levels[i]);
    } catch (const std::exception& e) {
      results[i].checks.push_back(failure_check(levels[i], e));
    }
  });
  for (auto& res : results) {
    for (auto& row : res.rows) r.rows.push_back(std::move(row));
    for (auto& c : res.checks) r.checks.push_back(std::move(c));
  }
  return r;
}

Report start(const std::string& command, const RunConfig& cfg, std::vector<std::string> columns) {
  Report r;
  r.command = command;
  r.config = cfg.echo();
  r.columns = std::move(columns);
  return r;
}

}  // namespace

json RunConfig::echo() const {
  json j;
  j["levels"] = levels;
  j["cmax"] = c_max ? json(*c_max) : json(nullptr);
  j["lmax"] = l_max ? json(*l_max) : json(nullptr);
  j["ibp_order"] = ibp_order;
  j["quad_tol"] = quad_tol;
  j["eigen_source"] = eigen_policy == EigenPolicy::file ? "file:" + eigen_file.string() : policy_name(eigen_policy);
  j["format"] = format == Format::csv ? "csv" : "json";
  j["seed"] = seed;
  j["m"] = m_values;
  j["n"] = n_values;
  j["s"] = s_values;
  j["Y"] = Y_values;
  j["mode"] = bsum_mode;
  j["pmax"] = p_max;
  j["oracle"] = oracle;
  return j;
}

std::vector<std::int64_t> parse_levels(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split(text, ',')) {
    if (tok.empty()) throw UsageError("empty entry in level list");
    if (const auto dots = tok.find(".."); dots != std::string::npos) {
      const auto a = to_int(tok.substr(0, dots));
      const auto b = to_int(tok.substr(dots + 2));
      if (a > b) throw UsageError(fmt::format("empty level range '{}'", tok));
      if (b > 100000) throw UsageError(fmt::format("level range '{}' is too large", tok));
      for (auto p : arith::primes_up_to(b)) {
        if (p >= a) out.push_back(p);
      }
    } else {
      const auto N = to_int(tok);
      if (N < 2 || !arith::is_prime(N)) throw UsageError(fmt::format("level {} is not prime", N));
      out.push_back(N);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw UsageError(fmt::format("no prime levels in '{}'", text));
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split(text, ',')) out.push_back(to_int(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) out.push_back(to_double(tok));
  return out;
}

EigenPolicy parse_eigen_source(const std::string& text, std::filesystem::path* file) {
  if (text == "compute") return EigenPolicy::compute;
  if (text == "cache") return EigenPolicy::cache_first;
  if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    if (file) *file = text.substr(5);
    return EigenPolicy::file;
  }
  throw UsageError(fmt::format("eigen source must be compute, cache or file:PATH, got '{}'", text));
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("config {}: {}", path.string(), e.what()));
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  auto ints = [](const json& v) {
    return v.is_string() ? parse_int_list(v.get<std::string>()) : v.get<std::vector<std::int64_t>>();
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "levels") {
        if (v.is_string()) {
          cfg.levels = parse_levels(v.get<std::string>());
        } else {
          std::string joined;
          for (const auto& x : v) joined += (joined.empty() ? "" : ",") + std::to_string(x.get<std::int64_t>());
          cfg.levels = parse_levels(joined);
        }
      } else if (key == "cmax") {
        cfg.c_max = v.get<std::int64_t>();
      } else if (key == "lmax") {
        cfg.l_max = v.get<std::int64_t>();
      } else if (key == "ibp_order") {
        cfg.ibp_order = v.get<int>();
      } else if (key == "quad_tol") {
        cfg.quad_tol = v.get<double>();
      } else if (key == "eigen_source") {
        cfg.eigen_policy = parse_eigen_source(v.get<std::string>(), &cfg.eigen_file);
      } else if (key == "format") {
        const auto f = v.get<std::string>();
        if (f != "csv" && f != "json") throw UsageError("format must be csv or json");
        cfg.format = f == "csv" ? Format::csv : Format::json;
      } else if (key == "out") {
        cfg.out_dir = v.get<std::string>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "threads") {
        cfg.threads = v.get<int>();
      } else if (key == "m") {
        cfg.m_values = ints(v);
      } else if (key == "n") {
        cfg.n_values = ints(v);
      } else if (key == "s") {
        cfg.s_values.clear();
        for (auto s : ints(v)) cfg.s_values.push_back(static_cast<int>(s));
      } else if (key == "Y") {
        cfg.Y_values = v.is_string() ? parse_double_list(v.get<std::string>()) : v.get<std::vector<double>>();
      } else if (key == "mode") {
        cfg.bsum_mode = v.get<std::string>();
      } else if (key == "pmax") {
        cfg.p_max = v.get<std::int64_t>();
      } else if (key == "oracle") {
        cfg.oracle = v.get<bool>();
      } else {
        throw UsageError(fmt::format("config {}: unknown key '{}'", path.string(), key));
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("config {}: {}", path.string(), e.what()));
  }
}

int Report::exit_code() const {
  bool check = false, cert = false;
  for (const auto& c : checks) {
    if (c.pass) continue;
    (c.certificate ? cert : check) = true;
  }
  return cert ? kCertificateFailure : check ? kCheckFailure : kPass;
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", *d);
  }
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string to_csv(const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = r.command;
  j["config"] = r.config;
  j["columns"] = r.columns;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { jr.push_back(v); }, c);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"certificate", c.certificate}});
  }
  j["checks"] = std::move(checks);
  json plots = json::object();
  for (const auto& s : r.plots) {
    json pts = json::array();
    for (const auto& [x, y] : s.points) pts.push_back({x, y});
    plots[s.name] = std::move(pts);
  }
  j["plots"] = std::move(plots);
  j["exit_code"] = r.exit_code();
  j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

std::string series_csv(const Series& s) {
  std::string out = "x,y\n";
  for (const auto& [x, y] : s.points) out += format_cell(x) + "," + format_cell(y) + "\n";
  return out;
}

void emit(const Report& r, const RunConfig& cfg) {
  const std::string body = cfg.format == Format::csv ? to_csv(r) : to_json(r);
  for (const auto& c : r.checks) {
    std::cerr << fmt::format("check {}: {}{}\n", c.name, c.pass ? "pass" : "FAIL",
                             c.detail.empty() ? "" : " (" + c.detail + ")");
  }
  if (!cfg.out_dir) {
    std::cout << body;
    return;
  }
  std::filesystem::create_directories(*cfg.out_dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
    out << text;
  };
  write(*cfg.out_dir / (r.command + (cfg.format == Format::csv ? ".csv" : ".json")), body);
  for (const auto& s : r.plots) write(*cfg.out_dir / (r.command + "_" + s.name + ".csv"), series_csv(s));
}

EigenProvider::EigenProvider(const RunConfig& cfg) : cfg_(cfg) {
  if (cfg.eigen_policy == EigenPolicy::file) table_ = hecke::ingest_eigen_table(cfg.eigen_file, cfg.levels);
}

std::vector<hecke::EigenSystem> EigenProvider::get(std::int64_t N, std::int64_t p_max) const {
  if (table_) {
    const auto it = table_->find(N);
    if (it == table_->end()) throw hecke::HeckeError(fmt::format("level {} is not in {}", N, cfg_.eigen_file.string()));
    for (const auto& s : it->second) {
      if (s.max_prime() < p_max) {
        throw lfun::TableTooShort(
            fmt::format("{}: level {} form {} stops at p = {}, need p <= {}", cfg_.eigen_file.string(), N, s.form,
                        s.max_prime(), p_max),
            p_max);
      }
    }
    return it->second;
  }
  hecke::EigenOptions opts;
  opts.seed = cfg_.seed;
  if (cfg_.eigen_policy == EigenPolicy::compute) return hecke::eigen_systems(hecke::ManinSpace(N), p_max, opts);
  const hecke::EigenCache cache(cfg_.cache_dir.value_or(hecke::EigenCache::default_dir()));
  if (auto hit = cache.load(N, p_max)) return *hit;
  auto sys = hecke::eigen_systems(hecke::ManinSpace(N), p_max, opts);
  cache.store(N, sys);
  return sys;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

Report cmd_expsum_check(const RunConfig& cfg) {
  const std::int64_t c_max = cfg.c_max.value_or(500);
  const std::int64_t l_max = cfg.l_max.value_or(10);
  if (c_max < 1 || l_max < 0) throw UsageError("expsum-check needs cmax >= 1 and lmax >= 0");
  if (static_cast<double>(c_max) * static_cast<double>(c_max) > expsum::kBruteForceCostGuard) {
    throw UsageError(fmt::format("cmax = {} exceeds the brute-force cost guard", c_max));
  }
  auto r = start("expsum-check", cfg,
                 {"l", "c", "r_brute", "r_closed", "bound", "within_bound", "mu_brute", "mu_closed", "pass"});
  std::int64_t failures = 0, over_bound = 0;
  for (std::int64_t c = 1; c <= c_max; ++c) {
    for (std::int64_t l = -l_max; l <= l_max; ++l) {
      const auto R = expsum::r_sum(l, c, true);
      const auto M = expsum::mu_variant(l, c, true);
      const bool ok = R.consistent() && M.consistent() && R.value_numeric && M.value_numeric;
      const bool within = std::fabs(static_cast<double>(*R.value_exact)) <= R.bound;
      failures += !ok;
      over_bound += !within;
      r.rows.push_back({l, c, R.value_numeric ? R.value_numeric->real() : NAN, *R.value_exact, R.bound,
                        std::string(within ? "yes" : "no"), M.value_numeric ? M.value_numeric->real() : NAN,
                        *M.value_exact, std::string(ok ? "pass" : "fail")});
    }
  }
  r.checks.push_back({"closed form equals brute force", failures == 0, fmt::format("{} failures", failures)});
  r.checks.push_back({"rows above c tau(c)^2 (informational)", true, fmt::format("{} rows", over_bound)});
  return r;
}

Report cmd_average(const RunConfig& cfg) {
  const EigenProvider eigen(cfg);
  const auto levels = levels_or(cfg, parse_levels("11..101"));
  const double z = lfun::two_zeta_logderiv_2();
  auto r = start("average", cfg,
                 {"N", "genus", "mean_logderiv", "two_zeta_logderiv_2", "deviation", "deviation_N",
                  "deviation_N_log7", "omega_average", "C_F", "tail", "status"});
  r = per_level(std::move(r), cfg, levels, [&](std::int64_t N) {
    LevelResult out;
    const int g = hecke::genus_prime_level(N);
    if (g == 0) {
      out.rows.push_back({N, std::int64_t{0}, NAN, z, NAN, NAN, NAN, NAN, NAN, 0.0, std::string("empty average")});
      return out;
    }
    const auto data = level_data(N, eigen, false);
    std::vector<lfun::Sym2Value> values;
    double tail = 0.0, omega = 0.0;
    for (const auto& f : data.systems) {
      values.push_back(lfun::evaluate(f, data.kernels));
      tail += values.back().tail;
      omega += values.back().omega();
    }
    const auto avg = petersson::estimate_cZ(N, values);
    const double dN = avg.deviation * static_cast<double>(N);
    out.rows.push_back({N, std::int64_t{g}, avg.mean_logderiv, z, avg.deviation, dN,
                        dN / std::pow(std::log(static_cast<double>(N)), 7), omega / g, avg.C_F, tail,
                        std::string("ok")});
    if (tail > 1e-9) out.checks.push_back({fmt::format("level {} tail", N), false, fmt::format("{:.3g}", tail), true});
    return out;
  });
  // Trend gate on |deviation| over the non-empty levels, in level order.
  Series dev{"deviation", {}}, devN{"deviation_N", {}};
  std::vector<double> abs_dev;
  std::vector<std::int64_t> at;
  for (const auto& row : r.rows) {
    if (std::get<std::string>(row.back()) != "ok") continue;
    const double N = static_cast<double>(std::get<std::int64_t>(row[0]));
    dev.points.push_back({N, std::get<double>(row[4])});
    devN.points.push_back({N, std::get<double>(row[5])});
    abs_dev.push_back(std::fabs(std::get<double>(row[4])));
    at.push_back(std::get<std::int64_t>(row[0]));
  }
  std::string where;
  int inversions = 0;
  for (std::size_t i = 1; i < abs_dev.size(); ++i) {
    if (abs_dev[i] > abs_dev[i - 1]) {
      ++inversions;
      where += fmt::format("{}{}->{}", where.empty() ? "" : " ", at[i - 1], at[i]);
    }
  }
  r.checks.push_back({"monotone |deviation| (one inversion allowed)", inversions <= 1,
                      fmt::format("{} inversions{}{}", inversions, where.empty() ? "" : ": ", where)});
  r.plots = {std::move(dev), std::move(devN)};
  return r;
}

Report cmd_petersson(const RunConfig& cfg) {
  const EigenProvider eigen(cfg);
  const auto levels = levels_or(cfg, {11});
  const std::int64_t c_max = cfg.c_max.value_or(100000);
  for (auto m : cfg.m_values) {
    if (m < 1) throw UsageError("m must be positive");
  }
  for (auto n : cfg.n_values) {
    if (n < 1) throw UsageError("n must be positive");
  }
  if (c_max < levels.back()) throw UsageError(fmt::format("cmax must be at least the level {}", levels.back()));
  auto r = start("petersson", cfg, {"N", "m", "n", "spectral", "geometric", "gap", "tail_bound", "c_max", "pass"});
  return per_level(std::move(r), cfg, levels, [&](std::int64_t N) {
    LevelResult out;
    const auto data = level_data(N, eigen, false);
    std::vector<double> L1;
    for (const auto& f : data.systems) L1.push_back(lfun::sym2_L1(f, data.kernels));
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (auto m : cfg.m_values) {
      for (auto n : cfg.n_values) pairs.push_back({m, n});
    }
    const auto geo = petersson::delta_geometric(N, pairs, c_max);
    int bad = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      petersson::DeltaCheck d;
      d.N = N;
      d.m = pairs[i].first;
      d.n = pairs[i].second;
      d.spectral = petersson::delta_spectral(N, data.systems, L1, d.m, d.n);
      d.geometric = geo[i].value;
      d.tail_bound = geo[i].tail_bound;
      d.c_max = c_max;
      const bool ok = d.ok(1e-4);
      bad += !ok;
      out.rows.push_back({N, d.m, d.n, d.spectral, d.geometric, d.gap(), d.tail_bound, c_max,
                          std::string(ok ? "pass" : "fail")});
    }
    out.checks.push_back({fmt::format("level {} identity within tail + 1e-4", N), bad == 0,
                          fmt::format("{} of {} pairs fail", bad, pairs.size())});
    return out;
  });
}

Report cmd_afe(const RunConfig& cfg) {
  const EigenProvider eigen(cfg);
  const auto levels = levels_or(cfg, {11});
  auto r = start("afe", cfg,
                 {"N", "form", "L1", "afe_paper_mode", "afe_exact_mode", "oracle", "delta_exact", "delta_asymptotic",
                  "asymptotic_tolerance", "rho_N", "oracle_gap", "tail", "exact_ok", "asymptotic_ok"});
  return per_level(std::move(r), cfg, levels, [&](std::int64_t N) {
    LevelResult out;
    const auto data = level_data(N, eigen, cfg.oracle);
    const double tol_asymptotic = 10 * std::log(static_cast<double>(N)) / static_cast<double>(N);
    int bad = 0;
    double tail = 0.0;
    for (const auto& f : data.systems) {
      const auto v = lfun::evaluate(f, data.kernels);
      const double de = std::fabs(v.logderiv_afe - v.logderiv_oracle);
      const double dp = std::fabs(v.logderiv_asymptotic - v.logderiv_oracle);
      const bool exact_ok = !cfg.oracle || de <= 1e-6;
      bad += !exact_ok;
      tail = std::max(tail, v.tail);
      out.rows.push_back({N, std::int64_t{v.form}, v.L1, v.logderiv_asymptotic, v.logderiv_afe, v.logderiv_oracle, de, dp,
                          tol_asymptotic, v.rho_N, v.oracle_gap, v.tail, std::string(exact_ok ? "yes" : "no"),
                          std::string(!cfg.oracle ? "n/a" : dp <= tol_asymptotic ? "yes" : "no")});
    }
    out.checks.push_back({fmt::format("level {} exact mode within 1e-6 of the oracle", N), bad == 0,
                          fmt::format("{} of {} forms fail", bad, data.systems.size())});
    if (tail > 1e-9) out.checks.push_back({fmt::format("level {} tail", N), false, fmt::format("{:.3g}", tail), true});
    return out;
  });
}

Report cmd_bsum(const RunConfig& cfg) {
  const auto levels = levels_or(cfg, {11});
  if (cfg.bsum_mode != "both" && cfg.bsum_mode != "direct" && cfg.bsum_mode != "poisson") {
    throw UsageError("mode must be direct, poisson or both");
  }
  for (int s : cfg.s_values) {
    if (s != 0 && s != 1) throw UsageError("s must be 0 or 1");
  }
  for (double Y : cfg.Y_values) {
    if (!(Y >= 1.0)) throw UsageError("Y must be at least 1");
  }
  if (cfg.ibp_order < 1 || cfg.ibp_order > 8) throw UsageError("ibp order must lie in 1..8");
  if (!(cfg.quad_tol > 0.0)) throw UsageError("quadrature tolerance must be positive");
  petersson::BsumOptions opts;
  opts.c_max = cfg.c_max.value_or(opts.c_max);
  opts.ibp_order = cfg.ibp_order;
  opts.quad_tol = cfg.quad_tol;
  if (cfg.l_max) opts.l_cap = *cfg.l_max;
  const bool direct = cfg.bsum_mode != "poisson", poisson = cfg.bsum_mode != "direct";
  auto r = start("bsum", cfg,
                 {"N", "s", "Y", "direct", "poisson", "difference", "c_tail", "l_tail", "quadrature", "l_max",
                  "ibp_order", "pass"});
  return per_level(std::move(r), cfg, levels, [&](std::int64_t N) {
    LevelResult out;
    for (int s : cfg.s_values) {
      for (double Y : cfg.Y_values) {
        petersson::SumValue d, p;
        if (direct) d = petersson::B_sum(N, s, Y, petersson::Mode::direct, opts);
        try {
          if (poisson) p = petersson::B_sum(N, s, Y, petersson::Mode::poisson, opts);
        } catch (const petersson::CertificateError& e) {
          out.rows.push_back({N, std::int64_t{s}, Y, direct ? d.value : NAN, NAN, NAN, d.c_tail, e.achieved(), NAN,
                              std::int64_t{0}, std::int64_t{opts.ibp_order}, std::string("certificate")});
          out.checks.push_back({fmt::format("level {} s={} Y={} l-tail", N, s, Y), false, e.what(), true});
          continue;
        }
        const double diff = direct && poisson ? std::fabs(d.value - p.value) : NAN;
        const bool ok = !(direct && poisson) || diff <= 1e-6 + p.truncation_certificate();
        out.rows.push_back({N, std::int64_t{s}, Y, direct ? d.value : NAN, poisson ? p.value : NAN, diff,
                            direct ? d.c_tail : p.c_tail, poisson ? p.l_tail : NAN, poisson ? p.quadrature : NAN,
                            poisson ? p.l_max : std::int64_t{0}, std::int64_t{opts.ibp_order},
                            std::string(ok ? "pass" : "fail")});
        if (!ok) out.checks.push_back({fmt::format("level {} s={} Y={}", N, s, Y), false, fmt::format("{:.3g}", diff)});
      }
    }
    return out;
  });
}

Report cmd_eigen(const RunConfig& cfg) {
  const EigenProvider eigen(cfg);
  const auto levels = levels_or(cfg, {11});
  if (cfg.p_max < 2) throw UsageError("pmax must be at least 2");
  auto r = start("eigen", cfg, {"level", "form", "p", "ap"});
  return per_level(std::move(r), cfg, levels, [&](std::int64_t N) {
    LevelResult out;
    if (hecke::genus_prime_level(N) == 0) return out;
    for (const auto& f : eigen.get(N, cfg.p_max)) {
      for (const auto& [p, ap] : f.ap) {
        if (p <= cfg.p_max) out.rows.push_back({N, std::int64_t{f.form}, p, ap});
      }
    }
    return out;
  });
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"expsum-check", "average", "petersson", "afe", "bsum", "eigen"};
  return names;
}

Report run_command(const std::string& name, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  if (name == "expsum-check") {
    r = cmd_expsum_check(cfg);
  } else if (name == "average") {
    r = cmd_average(cfg);
  } else if (name == "petersson") {
    r = cmd_petersson(cfg);
  } else if (name == "afe") {
    r = cmd_afe(cfg);
  } else if (name == "bsum") {
    r = cmd_bsum(cfg);
  } else if (name == "eigen") {
    r = cmd_eigen(cfg);
  } else {
    throw UsageError(fmt::format("unknown command '{}'", name));
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace selberg_edge::app
