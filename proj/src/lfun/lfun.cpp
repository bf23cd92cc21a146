#include "selberg_edge/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "selberg_edge/arith.hpp"

namespace selberg_edge::lfun {

namespace {

using specfun::cplx;
constexpr double kPi = std::numbers::pi;

specfun::CutoffConfig cutoff_config(const AfeConfig& cfg, int order) {
  specfun::CutoffConfig c;
  c.step = cfg.step;
  c.G.kappa = cfg.kappa;
  c.G.order = order;
  return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  long double acc = 0.0L;
  for (std::size_t k = 1; k < n; ++k) acc += static_cast<long double>(a[k]) * b[k];
  return static_cast<double>(acc);
}

// lambda_f(n^2) for n <= n_max.
std::vector<double> lambda_squares(const hecke::EigenSystem& sys, std::int64_t n_max) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  out[1] = 1.0;
  if (n_max < 2) return out;
  const arith::FactorSieve sieve(n_max);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const auto f = sieve.factorize(n);
    const auto [p, k] = f.factors.front();
    const std::int64_t pk = arith::ipow(p, k);
    if (pk != n) {
      out[n] = out[pk] * out[n / pk];
      continue;
    }
    const double lp = sys.lambda_p(p);
    if (p == sys.level.N) {
      out[n] = std::pow(lp, 2 * k);
      continue;
    }
    double prev = 1.0, cur = lp;
    for (int j = 1; j < 2 * k; ++j) {
      const double next = lp * cur - prev;
      prev = cur;
      cur = next;
    }
    out[n] = cur;
  }
  return out;
}

}  // namespace

double two_zeta_logderiv_2() {
  const auto z = specfun::zeta_and_deriv(2.0);
  return 2.0 * z.deriv / z.value;
}

double kernel_tail(const specfun::CutoffFunction& V, std::int64_t N, std::int64_t K) {
  // |b_k| <= 4k. Blocks (a, b] with b ~ 1.1 a use the decay bound at a.
  const double s = V.s();
  double total = 0.0;
  std::int64_t a = K;
  for (int it = 0; it < 2000; ++it) {
    const std::int64_t b = std::max(a + 1, static_cast<std::int64_t>(1.1 * static_cast<double>(a)));
    const double weight = std::max(std::pow(static_cast<double>(N) / a, s),
                                   std::pow(static_cast<double>(N) / b, s));
    const double block = static_cast<double>(b - a) * 4.0 * static_cast<double>(b) *
                         weight * V.decay_bound(static_cast<double>(a) / N);
    total += block;
    if (a > 4 * K && block < 1e-6 * total) return 2.0 * total;
    if (total == 0.0 && a > 4 * K) return 0.0;
    a = b;
  }
  return std::numeric_limits<double>::infinity();
}

LevelKernels::LevelKernels(std::int64_t N, AfeConfig cfg) : N_(N), cfg_(cfg) {
  if (N < 2 || !arith::is_prime(N)) throw LfunError(fmt::format("level {} is not prime", N));
  if (!(cfg_.tail_tol > 0.0) || !(cfg_.length_scale >= 1.0) || !(cfg_.oracle_h > 0.0)) {
    throw LfunError("AfeConfig: tolerances must be positive and length_scale >= 1");
  }
  struct Spec {
    double s;
    int order;
  };
  std::vector<Spec> specs = {{0.0, 2}, {1.0, 2}, {0.0, 1}, {1.0, 1}};
  if (cfg_.oracle) {
    for (int j = 0; j < 2; ++j) {
      const double h = cfg_.oracle_h / (1 << j);
      for (double s : {1.0 + h, -h, 1.0 - h, h}) specs.push_back({s, 1});
    }
  }
  std::vector<specfun::CutoffFunction> cutoffs;
  std::int64_t K = 1;
  for (const auto& sp : specs) {
    cutoffs.emplace_back(sp.s, cutoff_config(cfg_, sp.order));
    K = std::max(K, truncation(cutoffs.back()));
  }
  K_ = static_cast<std::int64_t>(std::ceil(static_cast<double>(K) * cfg_.length_scale));

  edge0_ = build(cutoffs[0], K_);
  edge1_ = build(cutoffs[1], K_);
  plain0_ = build(cutoffs[2], K_);
  plain1_ = build(cutoffs[3], K_);
  for (std::size_t i = 4; i < specs.size(); ++i) oracle_.push_back(build(cutoffs[i], K_));

  const auto g1 = specfun::gamma_factor(cplx(1.0, 0.0));
  gamma1_ = g1.value.real();
  gamma1_ld_ = g1.logderiv.real();

  double e0 = 0.0, e1 = 0.0;
  Z0_ = contour_Z(0, &e0);
  Z1_ = contour_Z(1, &e1);
  Z_err_ = e0 + e1;
}

std::int64_t LevelKernels::truncation(const specfun::CutoffFunction& V) const {
  double y = 2.0;
  for (int it = 0; it < 200; ++it) {
    const auto K = static_cast<std::int64_t>(std::ceil(y * static_cast<double>(N_)));
    if (kernel_tail(V, N_, K) <= cfg_.tail_tol) return K;
    y *= 1.1;
  }
  throw LfunError(fmt::format("no truncation point reaches tail {:g} at level {}", cfg_.tail_tol, N_));
}

Kernel LevelKernels::build(const specfun::CutoffFunction& V, std::int64_t K) const {
  const double s = V.s();
  Kernel ker;
  ker.s = s;
  ker.order = V.config().G.order;
  ker.q.assign(static_cast<std::size_t>(K) + 1, 0.0);
  const double n = static_cast<double>(N_);
  for (std::int64_t k = 1; k <= K; ++k) {
    ker.q[k] = std::pow(n / k, s) * V.V(static_cast<double>(k) / n);
  }
  ker.tail = kernel_tail(V, N_, K);
  return ker;
}

double LevelKernels::contour_Z(int s, double* err) const {
  // Line Re u = 1 keeps 2s + 2u right of the zeta pole and u away from 0.
  constexpr double sigma = 1.0;
  const double n = static_cast<double>(N_);
  const specfun::GFamily G{cfg_.kappa, 2};
  auto integrand = [&](double t) {
    const cplx u(sigma, t);
    const cplx z = 2.0 * (static_cast<double>(s) + u);
    const cplx zN = (1.0 - std::exp(-z * std::log(n))) * specfun::zeta_complex(z);
    return std::exp((static_cast<double>(s) + u) * std::log(n)) * zN *
           specfun::gamma_factor(static_cast<double>(s) + u).value * G(u);
  };
  // |N^{s+u} zeta^{(N)} gamma G| <= N^{s+1} 2 zeta(2s+2) gamma(s+1) e^kappa e^{-kappa t^2} / t^2.
  const double amp = std::pow(n, s + sigma) * 2.0 * specfun::zeta_and_deriv(2.0 * (s + sigma)).value *
                     specfun::gamma_factor(cplx(s + sigma, 0.0)).value.real() *
                     std::exp(cfg_.kappa * sigma * sigma);
  double T = 2.0;
  auto tail = [&](double height) {
    return 2.0 * amp * std::exp(-cfg_.kappa * height * height) /
           (2.0 * cfg_.kappa * height * height * height) / (2.0 * kPi);
  };
  while (tail(T) > 1e-15 * std::max(1.0, n)) T += 0.5;
  const int J = 2 * static_cast<int>(std::ceil(T / (2.0 * cfg_.step)));
  // Conjugate symmetry: the integrand at -t is the conjugate of the one at t.
  long double full = 0.0L, half = 0.0L;
  for (int j = 0; j <= J; ++j) {
    const double w = j == 0 ? 0.5 : 1.0;
    const double v = w * integrand(j * cfg_.step).real();
    full += v;
    if (j % 2 == 0) half += v;
  }
  const double value = static_cast<double>(full) * 2.0 * cfg_.step / (2.0 * kPi);
  const double coarse = static_cast<double>(half) * 4.0 * cfg_.step / (2.0 * kPi);
  *err = std::abs(value - coarse) + tail(J * cfg_.step);
  return value;
}

Coefficients sym2_coefficients(const hecke::EigenSystem& sys, std::int64_t K) {
  const std::int64_t N = sys.level.N;
  const auto primes = arith::primes_up_to(K);
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    if (*it == N) continue;
    if (!sys.ap.count(*it)) {
      throw TableTooShort(
          fmt::format("level {} form {}: eigenvalues needed for primes up to {}, table stops at {}", N,
                      sys.form, K, sys.max_prime()),
          K);
    }
    break;
  }
  const auto sq = lambda_squares(sys, K);
  Coefficients c;
  c.b.assign(static_cast<std::size_t>(K) + 1, 0.0);
  c.b_star.assign(static_cast<std::size_t>(K) + 1, 0.0);
  for (std::int64_t m = 1; m * m <= K; ++m) {
    if (m % N == 0) continue;
    const std::int64_t m2 = m * m;
    for (std::int64_t n = 1; n * m2 <= K; ++n) {
      c.b[n * m2] += sq[n];
      if (n >= 2) c.b_star[n * m2] += sq[n];
    }
  }
  return c;
}

namespace {

struct Parts {
  double L1, I0, I1, log_N, gl;
};

Parts parts(const Coefficients& c, const LevelKernels& kern) {
  const double n = static_cast<double>(kern.N());
  const double lambda1 = dot(c.b, kern.plain(1).q) + dot(c.b, kern.plain(0).q);
  Parts p;
  p.L1 = lambda1 / (n * kern.gamma1());
  if (!(p.L1 > 0.0)) throw LfunError(fmt::format("L(1, Sym^2 f) = {} is not positive", p.L1));
  p.I0 = dot(c.b_star, kern.edge(0).q) / n;
  p.I1 = dot(c.b_star, kern.edge(1).q) / n;
  p.log_N = std::log(n);
  p.gl = kern.gamma1_logderiv();
  return p;
}

double exact_assembly(const Parts& p, const LevelKernels& kern) {
  const double n = static_cast<double>(kern.N());
  return (p.I1 - p.I0) / (kern.gamma1() * p.L1) + (kern.Z(1) - kern.Z(0)) / (n * kern.gamma1() * p.L1) -
         p.log_N - p.gl;
}

double asymptotic_assembly(const Parts& p, const LevelKernels& kern) {
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  return (p.I1 - p.I0) / (kern.gamma1() * p.L1) - p.log_N - p.gl +
         zeta2 / p.L1 * (two_zeta_logderiv_2() + p.gl + p.log_N);
}

double oracle_from(const Coefficients& c, const LevelKernels& kern, double* gap) {
  const auto& ks = kern.oracle();
  if (ks.size() != 8) throw LfunError("oracle kernels were not built (AfeConfig::oracle = false)");
  double D[2];
  for (int j = 0; j < 2; ++j) {
    const double h = kern.config().oracle_h / (1 << j);
    const double plus = dot(c.b, ks[4 * j].q) + dot(c.b, ks[4 * j + 1].q);
    const double minus = dot(c.b, ks[4 * j + 2].q) + dot(c.b, ks[4 * j + 3].q);
    if (!(plus > 0.0) || !(minus > 0.0)) throw LfunError("oracle: Lambda is not positive near 1");
    D[j] = (std::log(plus) - std::log(minus)) / (2.0 * h);
  }
  *gap = std::abs(D[0] - D[1]);
  if (*gap > 1e-5) {
    throw LfunError(fmt::format("oracle: steps h and h/2 disagree by {:.3g}", *gap));
  }
  const double richardson = (4.0 * D[1] - D[0]) / 3.0;
  return richardson - std::log(static_cast<double>(kern.N())) - kern.gamma1_logderiv();
}

}  // namespace

Sym2Value evaluate(const hecke::EigenSystem& sys, const LevelKernels& kernels) {
  if (sys.level.N != kernels.N()) throw LfunError("evaluate: level mismatch");
  const auto c = sym2_coefficients(sys, kernels.length());
  const auto p = parts(c, kernels);
  Sym2Value v;
  v.level = sys.level.N;
  v.form = sys.form;
  v.L1 = p.L1;
  v.I_star_0 = p.I0;
  v.I_star_1 = p.I1;
  v.logderiv_afe = exact_assembly(p, kernels);
  v.logderiv_asymptotic = asymptotic_assembly(p, kernels);
  v.rho_N = (v.logderiv_afe - v.logderiv_asymptotic) * p.L1 / (std::numbers::pi * std::numbers::pi / 6.0);
  v.logderiv_oracle = std::numeric_limits<double>::quiet_NaN();
  if (!kernels.oracle().empty()) v.logderiv_oracle = oracle_from(c, kernels, &v.oracle_gap);
  v.tail = (kernels.edge(0).tail + kernels.edge(1).tail) / static_cast<double>(kernels.N()) +
           kernels.Z_error() / static_cast<double>(kernels.N());
  return v;
}

double sym2_L1(const hecke::EigenSystem& sys, const LevelKernels& kernels) {
  return parts(sym2_coefficients(sys, kernels.length()), kernels).L1;
}

double I_star(const hecke::EigenSystem& sys, const LevelKernels& kernels, int s) {
  if (s != 0 && s != 1) throw LfunError("I_star: s must be 0 or 1");
  const auto c = sym2_coefficients(sys, kernels.length());
  return dot(c.b_star, kernels.edge(s).q) / static_cast<double>(kernels.N());
}

double logderiv_afe(const hecke::EigenSystem& sys, const LevelKernels& kernels) {
  return exact_assembly(parts(sym2_coefficients(sys, kernels.length()), kernels), kernels);
}

double logderiv_asymptotic(const hecke::EigenSystem& sys, const LevelKernels& kernels) {
  return asymptotic_assembly(parts(sym2_coefficients(sys, kernels.length()), kernels), kernels);
}

double logderiv_oracle(const hecke::EigenSystem& sys, const LevelKernels& kernels) {
  double gap = 0.0;
  return oracle_from(sym2_coefficients(sys, kernels.length()), kernels, &gap);
}

double omega_average(const std::vector<hecke::EigenSystem>& systems, const LevelKernels& kernels) {
  if (systems.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (const auto& sys : systems) total += 1.0 / sym2_L1(sys, kernels);
  return total / static_cast<double>(systems.size());
}

}  // namespace selberg_edge::lfun
