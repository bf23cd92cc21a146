// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include "app.hpp"
#include "selberg_edge/arith.hpp"
#include "selberg_edge/expsum.hpp"
#include "selberg_edge/lfun.hpp"
#include "selberg_edge/petersson.hpp"
#include "selberg_edge/specfun.hpp"

using namespace selberg_edge;

namespace {

constexpr double pi = std::numbers::pi;

// Pinned tolerances.
constexpr std::int64_t kC1Cmax = 500, kC1MuCmax = 300, kC1Lmax = 10;
constexpr double kC1Seconds = 60.0;
constexpr std::int64_t kC2Cmax = 10000, kC2Lmax = 50;
constexpr std::int64_t kC3Pmax = 500;
constexpr double kC3Tol = 1e-6;
constexpr std::int64_t kC4Cmax = 1000000;
constexpr double kC4Slack = 1e-4;
constexpr double kC5Exact = 1e-6;
constexpr double kC5AsymptoticFactor = 10.0;  // times log N / N
constexpr std::int64_t kC6Cmax = 500;
constexpr double kC6Slack = 1e-6;
constexpr double kC7Small = 0.05, kC7Large = 0.01;
constexpr std::int64_t kC7LargeFrom = 97;
constexpr int kC8Inversions = 1;
constexpr double kC9Contour = 1e-10, kC9Gamma = 1e-12, kC9J1 = 1e-12, kC9Zeta = 1e-10;

struct Outcome {
  bool pass = false;
  std::string summary;
};

app::RunConfig base_config() {
  app::RunConfig cfg;
  if (const char* env = std::getenv("SELBERG_EDGE_CACHE"); env && *env) {
    cfg.cache_dir = env;
  } else {
    cfg.cache_dir = SELBERG_EDGE_ACCEPTANCE_CACHE;
  }
  return cfg;
}

std::string failed_checks(const app::Report& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (!c.pass) out += fmt::format("{}{}: {}", out.empty() ? "" : "; ", c.name, c.detail);
  }
  return out;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t bad_r = 0, bad_mu = 0, n = 0;
  for (std::int64_t c = 1; c <= kC1Cmax; ++c) {
    for (std::int64_t l = -kC1Lmax; l <= kC1Lmax; ++l) {
      const auto brute = expsum::r_sum_bruteforce(l, c);
      bad_r += std::llround(brute.real()) != expsum::r_sum_closed(l, c) || std::fabs(brute.imag()) > 1e-6 * c;
      ++n;
      if (c <= kC1MuCmax) {
        const auto mb = expsum::mu_variant_bruteforce(l, c);
        bad_mu += std::llround(mb.real()) != expsum::mu_variant_closed(l, c) || std::fabs(mb.imag()) > 1e-6 * c;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad_r == 0 && bad_mu == 0 && secs <= kC1Seconds,
          fmt::format("{} R pairs, {} R failures, {} variant failures, {:.1f} s (limit {:.0f} s)", n, bad_r, bad_mu,
                      secs, kC1Seconds)};
}

Outcome criterion2() {
  std::int64_t failures = 0, n = 0;
  std::vector<std::string> examples;
  std::int64_t off_two = 0;
  for (std::int64_t c = 1; c <= kC2Cmax; ++c) {
    const auto f = arith::factorize(static_cast<std::uint64_t>(c));
    const double bound = expsum::square_root_bound(c);
    for (std::int64_t l = -kC2Lmax; l <= kC2Lmax; ++l) {
      ++n;
      const auto R = expsum::r_sum_closed(l, f);
      if (std::fabs(static_cast<double>(R)) <= bound) continue;
      ++failures;
      off_two += (l != 2 && l != -2);
      if (examples.size() < 3) examples.push_back(fmt::format("R({};{})={} > {:.0f}", l, c, R, bound));
    }
  }
  // Brute-force confirmation of the first counterexample.
  std::string confirm;
  if (failures) {
    const auto b = expsum::r_sum_bruteforce(2, 121);
    confirm = fmt::format(", brute force R(2;121) = {:.0f}", b.real());
  }
  std::string ex;
  for (const auto& e : examples) ex += (ex.empty() ? "" : ", ") + e;
  return {failures == 0, fmt::format("{} pairs, {} above c tau(c)^2 ({} with l != +-2){}{}{}", n, failures, off_two,
                                     ex.empty() ? "" : ": ", ex, confirm)};
}

Outcome criterion3() {
  std::int64_t failures = 0, n = 0;
  double worst = 0.0;
  for (auto p : arith::primes_up_to(kC3Pmax)) {
    const double bound = 2 * std::sqrt(static_cast<double>(p));
    for (std::int64_t k = 1; k < p; ++k) {
      const double S = expsum::kloosterman(k, k, p);
      worst = std::max(worst, std::fabs(S) / bound);
      failures += std::fabs(S) > bound + kC3Tol;
      ++n;
    }
  }
  return {failures == 0, fmt::format("{} sums, {} failures, max |S|/(2 sqrt p) = {:.6f}", n, failures, worst)};
}

Outcome criterion4() {
  auto cfg = base_config();
  cfg.levels = {11, 13, 17, 19, 23, 29, 31, 37, 41};
  cfg.c_max = kC4Cmax;
  const auto r = app::cmd_petersson(cfg);
  double worst_gap = 0.0, worst_tail = 0.0;
  int bad = 0;
  for (const auto& row : r.rows) {
    const double gap = std::get<double>(row[5]), tail = std::get<double>(row[6]);
    worst_gap = std::max(worst_gap, gap);
    worst_tail = std::max(worst_tail, tail);
    bad += !(gap <= tail + kC4Slack);
  }
  const bool ok = bad == 0 && r.exit_code() == app::kPass && r.rows.size() == cfg.levels.size() * 16;
  return {ok, fmt::format("{} rows at c_max = {}, max gap {:.3g}, max tail bound {:.3g}, slack {:g}{}", r.rows.size(),
                          kC4Cmax, worst_gap, worst_tail, kC4Slack, ok ? "" : "; " + failed_checks(r))};
}

Outcome criterion5() {
  auto cfg = base_config();
  cfg.levels = {11, 17, 19, 23, 29, 31, 37};
  cfg.oracle = true;
  const auto r = app::cmd_afe(cfg);
  int exact_bad = 0, asymptotic_bad = 0;
  double worst_exact = 0.0;
  std::string asymptotic_fail;
  for (const auto& row : r.rows) {
    const auto N = std::get<std::int64_t>(row[0]);
    const double de = std::get<double>(row[6]), dp = std::get<double>(row[7]);
    const double tol = kC5AsymptoticFactor * std::log(static_cast<double>(N)) / static_cast<double>(N);
    worst_exact = std::max(worst_exact, de);
    exact_bad += !(de <= kC5Exact);
    if (!(dp <= tol)) {
      ++asymptotic_bad;
      asymptotic_fail += fmt::format("{}{}/{} ({:.3g} > {:.3g})", asymptotic_fail.empty() ? "" : ", ", N,
                                std::get<std::int64_t>(row[1]), dp, tol);
    }
  }
  const bool ok = exact_bad == 0 && asymptotic_bad == 0 && r.exit_code() == app::kPass && !r.rows.empty();
  return {ok, fmt::format("{} forms; exact mode: {} failures, max |exact - oracle| = {:.2g}; asymptotic mode: {} failures{}{}",
                          r.rows.size(), exact_bad, worst_exact, asymptotic_bad, asymptotic_fail.empty() ? "" : ": ", asymptotic_fail)};
}

Outcome criterion6() {
  auto cfg = base_config();
  cfg.levels = {11, 17, 23};
  cfg.Y_values = {8, 16, 32};
  cfg.s_values = {0, 1};
  cfg.c_max = kC6Cmax;
  const auto r = app::cmd_bsum(cfg);
  double worst = 0.0, worst_cert = 0.0;
  int bad = 0;
  for (const auto& row : r.rows) {
    const double diff = std::get<double>(row[5]);
    const double cert = std::get<double>(row[7]) + std::get<double>(row[8]);
    worst = std::max(worst, diff);
    worst_cert = std::max(worst_cert, cert);
    bad += !(diff <= kC6Slack + cert);
  }
  const bool ok = bad == 0 && r.rows.size() == 18 && r.exit_code() == app::kPass;
  return {ok, fmt::format("{} sums at c_max = {}, max |direct - poisson| = {:.2g}, max certificate {:.2g}{}",
                          r.rows.size(), kC6Cmax, worst, worst_cert, ok ? "" : "; " + failed_checks(r))};
}

Outcome criterion7(const app::Report& avg) {
  const double target = 6 / (pi * pi);
  bool ok = true, seen_small = false, seen_large = false;
  std::string detail;
  for (const auto& row : avg.rows) {
    const auto N = std::get<std::int64_t>(row[0]);
    if (N != 11 && N < kC7LargeFrom) continue;
    const double w = std::get<double>(row[7]);
    const double tol = N == 11 ? kC7Small : kC7Large;
    const bool pass = std::fabs(w - target) <= tol;
    (N == 11 ? seen_small : seen_large) = true;
    ok = ok && pass;
    detail += fmt::format("{}N={}: {:.4f} (|diff| {:.4f}, tol {:g})", detail.empty() ? "" : ", ", N, w,
                          std::fabs(w - target), tol);
  }
  return {ok && seen_small && seen_large, fmt::format("6/pi^2 = {:.4f}; {}", target, detail)};
}

Outcome criterion8(const app::Report& avg) {
  std::vector<double> norm, dev;
  for (const auto& row : avg.rows) {
    if (std::get<std::string>(row.back()) != "ok") continue;
    dev.push_back(std::fabs(std::get<double>(row[4])));
    norm.push_back(std::fabs(std::get<double>(row[6])));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < dev.size(); ++i) inversions += dev[i] > dev[i - 1];
  const auto* trend = &avg.checks.back();
  // Fitted constant: the largest normalized value over the lower half of the list.
  const std::size_t half = norm.size() / 2;
  double C = 0.0, upper = 0.0;
  for (std::size_t i = 0; i < norm.size(); ++i) (i < half ? C : upper) = std::max(i < half ? C : upper, norm[i]);
  const bool bounded = !norm.empty() && upper <= C;
  std::string other;
  for (std::size_t i = 0; i + 1 < avg.checks.size(); ++i) {
    if (!avg.checks[i].pass) other += fmt::format("; {}: {}", avg.checks[i].name, avg.checks[i].detail);
  }
  const bool ok = inversions <= kC8Inversions && bounded && other.empty();
  return {ok, fmt::format("{} levels; trend: {}; |deviation N / log^7 N|: fitted C = {:.3g} (lower half), upper half max "
                          "{:.3g}{}",
                          norm.size(), trend->detail, C, upper, other)};
}

Outcome criterion9() {
  using namespace specfun;
  std::vector<std::string> bad;
  // Small-y law with a fitted constant.
  double C = 0.0;
  for (int s : {0, 1}) {
    const CutoffFunction V(s);
    const auto g = gamma_factor(static_cast<double>(s));
    for (double y = 1e-4; y <= 0.1 * (1 + 1e-12); y *= std::pow(10.0, 0.125)) {
      const double E = V.V(y) - (g.value.real() * g.logderiv.real() - g.value.real() * std::log(y));
      C = std::max(C, std::fabs(E) / std::sqrt(y));
    }
  }
  if (!std::isfinite(C)) bad.push_back("small-y law");
  // Contour-abscissa invariance.
  double contour = 0.0;
  for (int s : {0, 1}) {
    const CutoffFunction V(s);
    for (double y : {0.3, 1.0, 2.0, 7.5}) {
      const double ref = V.raw(y, 3.0).value.real();
      contour = std::max(contour, std::fabs(V.raw(y, 1.0).value.real() - ref));
      contour = std::max(contour, std::fabs(V.raw(y, 5.5).value.real() - ref));
    }
  }
  if (!(contour <= kC9Contour)) bad.push_back("contour");
  const double g1 = std::fabs(gamma_factor(1.0).value.real() - 1 / (2 * pi * pi * pi));
  if (!(g1 <= kC9Gamma)) bad.push_back("gamma(1)");
  // J1 spot values: tabulated constants and Boost.
  const std::vector<std::pair<double, double>> spots{
      {1.0, 0.44005058574493351596}, {2.0, 0.57672480775687338720}, {10.0, 0.043472746168861436670}};
  double j1 = 0.0;
  for (const auto& [x, v] : spots) j1 = std::max(j1, std::fabs(bessel_j1(x) - v));
  for (double x : {0.05, 3.8317, 7.5, 13.0, 41.0, 250.0, 1e4}) {
    j1 = std::max(j1, std::fabs(bessel_j1(x) - boost::math::cyl_bessel_j(1, x)));
  }
  if (!(j1 <= kC9J1)) bad.push_back("J1");
  const auto a = zeta_and_deriv(2.0), b = zeta_and_deriv(2.0, 20000);
  const double zeta = std::fabs(2 * a.deriv / a.value - 2 * b.deriv / b.value);
  if (!(zeta <= kC9Zeta)) bad.push_back("zeta");
  std::string which;
  for (const auto& w : bad) which += (which.empty() ? "; failing: " : ", ") + w;
  return {bad.empty(), fmt::format("fitted C = {:.3g}, contour {:.2g}, gamma(1) {:.2g}, J1 {:.2g}, 2zeta'/zeta(2) "
                                   "doubling {:.2g}{}",
                                   C, contour, g1, j1, zeta, which)};
}

Outcome criterion10() {
  auto cfg = base_config();
  cfg.levels = app::parse_levels("11..43");
  cfg.eigen_policy = app::EigenPolicy::compute;
  cfg.seed = 12345;
  const auto a = app::to_csv(app::cmd_average(cfg));
  const auto b = app::to_csv(app::cmd_average(cfg));
  return {a == b && !a.empty(), fmt::format("two runs, {} bytes each, {}", a.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  int failures = 0;
  auto report = [&](int k, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << fmt::format("criterion {:>2}: {}  {}  [{:.1f} s]\n", k, o.pass ? "PASS" : "FAIL", o.summary, secs);
  };
  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  app::Report avg;
  auto run_average = [&] {
    if (avg.command.empty()) {
      auto cfg = base_config();
      cfg.levels = app::parse_levels("11..101");
      avg = app::cmd_average(cfg);
    }
  };
  report(7, [&] {
    run_average();
    return criterion7(avg);
  });
  report(8, [&] {
    run_average();
    return criterion8(avg);
  });
  report(9, criterion9);
  report(10, criterion10);
  std::cout << fmt::format("{} of 10 criteria pass\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
