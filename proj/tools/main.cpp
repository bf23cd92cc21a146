#include <iostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "app.hpp"
#include "selberg_edge/petersson.hpp"

using namespace selberg_edge;

int main(int argc, char** argv) {
  CLI::App cli{"Numerical checks for the edge L'/L(1, Sym^2 f) average at prime level", "selberg-edge"};
  std::string command, config, levels, eigen_source, format, out, m, n, s, Y, mode;
  std::int64_t c_max = 0, l_max = 0, p_max = 0;
  int ibp_order = 0, threads = 0;
  double quad_tol = 0.0;
  std::uint64_t seed = 0;
  bool no_oracle = false;

  std::string names;
  for (const auto& c : app::command_names()) names += (names.empty() ? "" : ", ") + c;
  cli.add_option("command", command, "One of: " + names)->required();
  cli.add_option("--config", config, "JSON file with the same keys as the flags");
  auto* o_levels = cli.add_option("--levels", levels, "Prime levels: 11,17,23 or 11..101");
  auto* o_cmax = cli.add_option("--cmax", c_max, "Largest modulus c");
  auto* o_lmax = cli.add_option("--lmax", l_max, "Largest |l| (expsum-check) or l cap (bsum)");
  auto* o_ibp = cli.add_option("--ibp-order", ibp_order, "Integrations by parts behind the l-tail bound");
  auto* o_quad = cli.add_option("--quad-tol", quad_tol, "Per-transform quadrature tolerance");
  auto* o_eigen = cli.add_option("--eigen-source", eigen_source, "compute | file:PATH | cache (default)");
  auto* o_format = cli.add_option("--format", format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));
  auto* o_out = cli.add_option("--out", out, "Output directory; stdout when absent");
  auto* o_seed = cli.add_option("--seed", seed, "Seed of the random Hecke combination");
  auto* o_threads = cli.add_option("--threads", threads, "Worker threads (0: all cores)");
  auto* o_m = cli.add_option("--m", m, "petersson: list of m");
  auto* o_n = cli.add_option("--n", n, "petersson: list of n");
  auto* o_s = cli.add_option("--s", s, "bsum: list of s in {0, 1}");
  auto* o_Y = cli.add_option("--Y", Y, "bsum: list of Y");
  auto* o_mode = cli.add_option("--mode", mode, "bsum: direct, poisson or both");
  auto* o_pmax = cli.add_option("--pmax", p_max, "eigen: largest prime");
  cli.add_flag("--no-oracle", no_oracle, "afe: skip the differentiation oracle");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? app::kPass : app::kUsageError;
  }

  app::RunConfig cfg;
  try {
    if (!config.empty()) app::apply_config_file(config, cfg);
    if (*o_levels) cfg.levels = app::parse_levels(levels);
    if (*o_cmax) cfg.c_max = c_max;
    if (*o_lmax) cfg.l_max = l_max;
    if (*o_ibp) cfg.ibp_order = ibp_order;
    if (*o_quad) cfg.quad_tol = quad_tol;
    if (*o_eigen) cfg.eigen_policy = app::parse_eigen_source(eigen_source, &cfg.eigen_file);
    if (*o_format) cfg.format = format == "json" ? app::Format::json : app::Format::csv;
    if (*o_out) cfg.out_dir = out;
    if (*o_seed) cfg.seed = seed;
    if (*o_threads) cfg.threads = threads;
    if (*o_m) cfg.m_values = app::parse_int_list(m);
    if (*o_n) cfg.n_values = app::parse_int_list(n);
    if (*o_s) {
      cfg.s_values.clear();
      for (auto v : app::parse_int_list(s)) cfg.s_values.push_back(static_cast<int>(v));
    }
    if (*o_Y) cfg.Y_values = app::parse_double_list(Y);
    if (*o_mode) cfg.bsum_mode = mode;
    if (*o_pmax) cfg.p_max = p_max;
    if (no_oracle) cfg.oracle = false;

    const auto report = app::run_command(command, cfg);
    app::emit(report, cfg);
    return report.exit_code();
  } catch (const app::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return app::kUsageError;
  } catch (const petersson::CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return app::kCertificateFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kCheckFailure;
  }
}
