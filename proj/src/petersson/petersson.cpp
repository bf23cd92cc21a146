#include "selberg_edge/petersson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "selberg_edge/arith.hpp"
#include "selberg_edge/expsum.hpp"

namespace selberg_edge::petersson {

namespace {

constexpr double kPi = std::numbers::pi;

struct Modulus {
  std::int64_t c;
  arith::Factorization f;
  std::int64_t largest;
};

// Multiples of N up to c_max, ordered by largest prime factor, then by c.
std::vector<Modulus> moduli(std::int64_t N, std::int64_t c_max) {
  const arith::FactorSieve sieve(c_max);
  std::vector<Modulus> out;
  for (std::int64_t c = N; c <= c_max; c += N) {
    auto f = sieve.factorize(c);
    const std::int64_t largest = f.factors.back().prime;
    out.push_back({c, std::move(f), largest});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Modulus& a, const Modulus& b) { return a.largest < b.largest; });
  return out;
}

void check_level(std::int64_t N) {
  if (N < 2 || !arith::is_prime(N)) throw PeterssonError(fmt::format("level {} is not prime", N));
}

specfun::CutoffFunction cutoff_for(int s, const specfun::CutoffConfig& cfg) {
  if (s != 0 && s != 1) throw PeterssonError("s must be 0 or 1");
  specfun::CutoffConfig c = cfg;
  c.G.order = 2;
  return specfun::CutoffFunction(static_cast<double>(s), c);
}

// S(n_i^2, 1; c) for all i, in chunks the engine accepts.
void kloosterman_squares(expsum::KloostermanEngine& engine, const arith::Factorization& f,
                         const std::vector<std::int64_t>& ns, std::vector<double>& out) {
  constexpr std::size_t chunk = 16;
  out.assign(ns.size(), 0.0);
  std::vector<expsum::KloostermanEngine::Pair> pairs;
  for (std::size_t start = 0; start < ns.size(); start += chunk) {
    const std::size_t stop = std::min(ns.size(), start + chunk);
    pairs.clear();
    for (std::size_t i = start; i < stop; ++i) {
      const std::int64_t r = ns[i] % f.n;
      pairs.push_back({arith::mul_mod(r, r, f.n), 1});
    }
    engine.evaluate(f, pairs, std::span<double>(out.data() + start, stop - start));
  }
}

}  // namespace

double divisor_tail(std::int64_t N, std::int64_t C) {
  if (C < N) throw PeterssonError("divisor_tail: need C >= N");
  // tau(N k) <= 2 tau(k) for N prime; the k-sum runs over k > C / N.
  const double K = std::floor(static_cast<double>(C) / static_cast<double>(N));
  const double k_sum =
      (2.0 * std::log(K) + 4.0 + 4.0 * specfun::kEulerGamma) / std::sqrt(K) + 2.4025 / K;
  return 2.0 * std::pow(static_cast<double>(N), -1.5) * k_sum;
}

double DeltaCheck::gap() const { return std::abs(spectral - geometric); }

double delta_spectral(std::int64_t N, const std::vector<hecke::EigenSystem>& systems,
                      const std::vector<double>& L1, std::int64_t m, std::int64_t n) {
  if (systems.size() != L1.size()) throw PeterssonError("delta_spectral: one L-value per form");
  double total = 0.0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    total += hecke::lambda_at(systems[i], m) * hecke::lambda_at(systems[i], n) / L1[i];
  }
  return 2.0 * kPi * kPi / static_cast<double>(N) * total;
}

std::vector<GeometricValue> delta_geometric(std::int64_t N,
                                            const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                                            std::int64_t c_max) {
  check_level(N);
  if (c_max < N) throw PeterssonError("delta_geometric: c_max must be at least N");
  for (const auto& [m, n] : pairs) {
    if (m < 1 || n < 1) throw PeterssonError("delta_geometric: m and n must be positive");
  }
  const std::size_t np = pairs.size();
  std::vector<long double> acc(np, 0.0L);
  expsum::KloostermanEngine engine(std::min<std::int64_t>(c_max, 2000));
  std::vector<expsum::KloostermanEngine::Pair> chunk;
  std::vector<double> S;
  for (const auto& mod : moduli(N, c_max)) {
    const double c = static_cast<double>(mod.c);
    for (std::size_t start = 0; start < np; start += 16) {
      const std::size_t stop = std::min(np, start + 16);
      chunk.clear();
      for (std::size_t i = start; i < stop; ++i) chunk.push_back({pairs[i].first, pairs[i].second});
      S.assign(chunk.size(), 0.0);
      engine.evaluate(mod.f, chunk, S);
      for (std::size_t i = start; i < stop; ++i) {
        const double x = 4.0 * kPi * std::sqrt(static_cast<double>(pairs[i].first * pairs[i].second)) / c;
        acc[i] += static_cast<long double>(S[i - start] / c * specfun::bessel_j1(x));
      }
    }
  }
  const double ctail = divisor_tail(N, c_max);
  std::vector<GeometricValue> out(np);
  for (std::size_t i = 0; i < np; ++i) {
    const auto [m, n] = pairs[i];
    out[i].value = (m == n ? 1.0 : 0.0) - 2.0 * kPi * static_cast<double>(acc[i]);
    const double g = static_cast<double>(std::gcd(m, n));
    out[i].tail_bound = 4.0 * kPi * kPi * std::sqrt(g * static_cast<double>(m * n)) * ctail;
  }
  return out;
}

GeometricValue delta_geometric(std::int64_t N, std::int64_t m, std::int64_t n, std::int64_t c_max) {
  return delta_geometric(N, {{m, n}}, c_max).front();
}

std::vector<DeltaCheck> petersson_table(std::int64_t N, const std::vector<hecke::EigenSystem>& systems,
                                        const std::vector<double>& L1, std::int64_t mn_max,
                                        std::int64_t c_max) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (std::int64_t m = 1; m <= mn_max; ++m) {
    for (std::int64_t n = 1; n <= mn_max; ++n) pairs.emplace_back(m, n);
  }
  const auto geo = delta_geometric(N, pairs, c_max);
  std::vector<DeltaCheck> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    DeltaCheck d;
    d.N = N;
    d.m = pairs[i].first;
    d.n = pairs[i].second;
    d.spectral = delta_spectral(N, systems, L1, d.m, d.n);
    d.geometric = geo[i].value;
    d.c_max = c_max;
    d.tail_bound = geo[i].tail_bound;
    out.push_back(d);
  }
  return out;
}

SumValue B_sum(std::int64_t N, int s, double Y, Mode mode, const BsumOptions& opts,
               const specfun::CutoffConfig& cutoff) {
  check_level(N);
  if (!(Y >= 1.0)) throw PeterssonError("B_sum: Y must be at least 1");
  if (opts.c_max < N) throw PeterssonError("B_sum: c_max must be at least N");
  const double X = static_cast<double>(N);
  const auto V = cutoff_for(s, cutoff);
  const specfun::Window phi([&](double t) { return V.W(t * Y / X); });
  if (phi.interpolation_error() > 1e-14) {
    throw CertificateError("B_sum: window interpolation did not converge", phi.interpolation_error());
  }
  const auto mods = moduli(N, opts.c_max);

  SumValue out;
  out.c_max = opts.c_max;
  // c > c_max: (1/X) sum_n |phi(n/Y)| tau(c) c^{-1/2} 2 pi n / c.
  double weight_n = 0.0;
  for (auto n = static_cast<std::int64_t>(std::floor(Y)) + 1; static_cast<double>(n) < 2.0 * Y; ++n) {
    weight_n += std::abs(phi(static_cast<double>(n) / Y)) * static_cast<double>(n);
  }
  out.c_tail = 2.0 * kPi / X * weight_n * divisor_tail(N, opts.c_max);

  long double total = 0.0L;
  if (mode == Mode::direct) {
    std::vector<std::int64_t> ns;
    for (auto n = static_cast<std::int64_t>(std::floor(Y)) + 1; static_cast<double>(n) < 2.0 * Y; ++n) {
      ns.push_back(n);
    }
    std::vector<double> weights;
    for (auto n : ns) weights.push_back(phi(static_cast<double>(n) / Y));
    expsum::KloostermanEngine engine(std::min<std::int64_t>(opts.c_max, 2000));
    std::vector<double> S;
    for (const auto& mod : mods) {
      const double c = static_cast<double>(mod.c);
      kloosterman_squares(engine, mod.f, ns, S);
      long double inner = 0.0L;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        inner += S[i] * weights[i] * specfun::bessel_j1(4.0 * kPi * static_cast<double>(ns[i]) / c);
      }
      total += inner / c;
    }
    out.value = static_cast<double>(total) / X;
    return out;
  }

  if (opts.ibp_order < 2) {
    throw CertificateError("B_sum: the l-tail needs at least two integrations by parts", 0.0);
  }
  const int imax = std::min(opts.ibp_order, 8);
  out.ibp_order = imax;
  const auto norms = phi.derivative_l1(imax);
  const double tol_c = opts.l_tol / static_cast<double>(mods.size());
  for (const auto& mod : mods) {
    const double c = static_cast<double>(mod.c);
    const double ub = expsum::r_sum_uniform_bound(mod.f);
    // Tail of (1/(X c)) sum_{|l| > L} |R(l; c)| |g(l, c)| <= (2 ub / X) K_i L^{1-i} / (i - 1).
    auto tail_at = [&](double L) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 2; i <= imax; ++i) {
        const double K = specfun::BesselTransform::ibp_constant(c, Y, i, norms);
        best = std::min(best, 2.0 * ub / X * K * std::pow(L, 1.0 - i) / (i - 1));
      }
      return best;
    };
    double L = 4.0;
    while (tail_at(L) > tol_c) {
      L *= 1.25;
      if (L > static_cast<double>(opts.l_cap)) {
        throw CertificateError(
            fmt::format("B_sum: l-cutoff at c = {} exceeds {} (order {})", mod.c, opts.l_cap, imax),
            tail_at(static_cast<double>(opts.l_cap)));
      }
    }
    const auto l_max = static_cast<std::int64_t>(std::ceil(L));
    out.l_tail += tail_at(static_cast<double>(l_max));
    out.l_max = std::max(out.l_max, l_max);
    const specfun::BesselTransform g(c, Y, l_max, opts.quad_tol, phi);
    // R(-l) = R(l) and g(-l) = conj g(l).
    long double inner = static_cast<long double>(expsum::r_sum_closed(0, mod.f)) * g(0).real();
    for (std::int64_t l = 1; l <= l_max; ++l) {
      const std::int64_t R = expsum::r_sum_closed(l, mod.f);
      if (R != 0) inner += 2.0L * static_cast<long double>(R) * g(l).real();
    }
    total += inner / c;
    out.quadrature += 2.0 * ub * static_cast<double>(2 * l_max + 1) * g.discretization() / X;
  }
  out.value = static_cast<double>(total) / X;
  return out;
}

SumValue B_s(std::int64_t N, int s, double X, std::int64_t c_max, const specfun::CutoffConfig& cutoff) {
  check_level(N);
  if (!(X > 0.0)) throw PeterssonError("B_s: X must be positive");
  if (c_max < N) throw PeterssonError("B_s: c_max must be at least N");
  const auto V = cutoff_for(s, cutoff);
  const double y_max = V.decay_point(1e-16);
  std::vector<std::int64_t> ns;
  std::vector<double> weights;
  double weight_n = 0.0;
  for (std::int64_t n = 2; static_cast<double>(n) <= X * y_max; ++n) {
    ns.push_back(n);
    weights.push_back(V.W(static_cast<double>(n) / X));
    weight_n += std::abs(weights.back()) * static_cast<double>(n);
  }
  SumValue out;
  out.c_max = c_max;
  out.c_tail = 2.0 * kPi / X * weight_n * divisor_tail(N, c_max);
  if (ns.empty()) return out;
  expsum::KloostermanEngine engine(std::min<std::int64_t>(c_max, 2000));
  std::vector<double> S;
  long double total = 0.0L;
  for (const auto& mod : moduli(N, c_max)) {
    const double c = static_cast<double>(mod.c);
    kloosterman_squares(engine, mod.f, ns, S);
    long double inner = 0.0L;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      inner += S[i] * weights[i] * specfun::bessel_j1(4.0 * kPi * static_cast<double>(ns[i]) / c);
    }
    total += inner / c;
  }
  out.value = static_cast<double>(total) / X;
  return out;
}

AsumValue A_sum(std::int64_t N, int s, std::int64_t c_max, const specfun::CutoffConfig& cutoff) {
  check_level(N);
  const auto V = cutoff_for(s, cutoff);
  const double y_max = V.decay_point(1e-16);
  AsumValue out;
  out.c_max = c_max;
  long double total = 0.0L;
  for (std::int64_t m = 1;; ++m) {
    const double X = static_cast<double>(N) / static_cast<double>(m * m);
    if (2.0 > X * y_max) break;
    if (m % N == 0) continue;
    const auto b = B_s(N, s, X, c_max, cutoff);
    const double w = 1.0 / static_cast<double>(m * m);
    total += w * b.value;
    out.c_tail += w * b.c_tail;
    if (m == 1) {
      out.B_first = b.value;
    } else {
      out.m_tail += w * (std::abs(b.value) + b.c_tail);
    }
    out.m_max = m;
  }
  out.value = static_cast<double>(total);
  return out;
}

double A_spectral(std::int64_t N, const std::vector<lfun::Sym2Value>& values, int s) {
  if (s != 0 && s != 1) throw PeterssonError("A_spectral: s must be 0 or 1");
  double total = 0.0;
  for (const auto& v : values) total += v.omega() * (s == 0 ? v.I_star_0 : v.I_star_1);
  return -kPi / static_cast<double>(N) * total;
}

LevelAverage estimate_cZ(std::int64_t N, const std::vector<lfun::Sym2Value>& values) {
  LevelAverage out;
  out.N = N;
  out.genus = static_cast<int>(values.size());
  out.volume = kPi / 3.0 * static_cast<double>(N + 1);
  if (values.empty()) {
    out.mean_logderiv = out.deviation = out.C_F = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double sum = 0.0;
  for (const auto& v : values) sum += v.logderiv_afe;
  const double g = static_cast<double>(values.size());
  const double z = lfun::two_zeta_logderiv_2();
  out.mean_logderiv = sum / g;
  out.deviation = out.mean_logderiv - z;
  const double n = static_cast<double>(N);
  out.C_F = (sum + g * (-z + 1.0 - std::log(4.0 * kPi) + std::log(n) / (n + 1.0))) / (out.volume * g);
  return out;
}

}  // namespace selberg_edge::petersson
