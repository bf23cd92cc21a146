#pragma once

// Both sides of the weight-2 Petersson formula at prime level N, the
// Kloosterman-Bessel sums B_s(X) and their dyadic pieces in direct and
// Poisson-dual form, the m-sum A_s, and the level averages of L'/L.
//
// Normalizations: (f, f) = N L(1, Sym^2 f) / (8 pi^3), so
//   Delta*_N(m, n) = (4 pi)^{-1} sum_f lambda_f(m) lambda_f(n) / (f, f)
//                  = (2 pi^2 / N) sum_f omega_f lambda_f(m) lambda_f(n),
// and sum_f omega_f I*_f(s) = -(N / pi) A_s.
//
// Every c-sum is truncated at c_max and carries a Weil-bound tail:
// |S(m, n; c)| <= tau(c) sqrt(c) sqrt(gcd(m, n, c)), |J1(x)| <= x / 2, and
// sum_{k > K} tau(k) k^{-3/2} <= K^{-1/2} (2 log K + 4 + 4 gamma) + 2.41 / K
// (partial summation with |Delta(x)| <= 0.961 sqrt(x) in the divisor problem).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "selberg_edge/hecke.hpp"
#include "selberg_edge/lfun.hpp"
#include "selberg_edge/specfun.hpp"

namespace selberg_edge::petersson {

class PeterssonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncation whose certificate did not reach the requested tolerance.
class CertificateError : public PeterssonError {
 public:
  CertificateError(const std::string& what, double achieved) : PeterssonError(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Upper bound for sum_{c > C, N | c} tau(c) c^{-3/2}; needs C >= N.
double divisor_tail(std::int64_t N, std::int64_t C);

struct DeltaCheck {
  std::int64_t N = 0;
  std::int64_t m = 0, n = 0;
  double spectral = 0.0;
  double geometric = 0.0;
  std::int64_t c_max = 0;
  double tail_bound = 0.0;
  double gap() const;
  bool ok(double slack) const { return gap() <= tail_bound + slack; }
};

/// (2 pi^2 / N) sum_f lambda_f(m) lambda_f(n) / L(1, Sym^2 f); L1[i] belongs to systems[i].
double delta_spectral(std::int64_t N, const std::vector<hecke::EigenSystem>& systems,
                      const std::vector<double>& L1, std::int64_t m, std::int64_t n);

struct GeometricValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// delta_{m,n} - 2 pi sum_{N | c <= c_max} S(m, n; c) / c J1(4 pi sqrt(mn) / c)
/// for every pair at once (moduli visited grouped by their largest prime).
std::vector<GeometricValue> delta_geometric(std::int64_t N,
                                            const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                                            std::int64_t c_max);
GeometricValue delta_geometric(std::int64_t N, std::int64_t m, std::int64_t n, std::int64_t c_max);

/// Spectral and geometric sides for all m, n <= mn_max.
std::vector<DeltaCheck> petersson_table(std::int64_t N, const std::vector<hecke::EigenSystem>& systems,
                                        const std::vector<double>& L1, std::int64_t mn_max,
                                        std::int64_t c_max);

enum class Mode { direct, poisson };

struct BsumOptions {
  std::int64_t c_max = 2000;
  int ibp_order = 6;          // integrations by parts behind the l-tail bound
  double l_tol = 1e-10;       // total budget for the discarded l-tails
  double quad_tol = 1e-13;    // per-transform quadrature tolerance
  std::int64_t l_cap = 2000000;
};

/// One evaluation with its certificates.
struct SumValue {
  double value = 0.0;
  double c_tail = 0.0;      // c > c_max (Weil bound)
  double l_tail = 0.0;      // |l| > l_max(c) (integration by parts), poisson only
  double quadrature = 0.0;  // transform discretization, summed
  std::int64_t c_max = 0;
  std::int64_t l_max = 0;   // largest l cutoff used
  int ibp_order = 0;
  /// Error of the truncated sum as an approximation to the c-truncated one.
  double truncation_certificate() const { return l_tail + quadrature; }
};

/// Dyadic piece of B_s(X) at X = N:
///   (1/X) sum_{N | c <= c_max} sum_n S(n^2, 1; c) / c U(n/Y) W_s(n/X) J1(4 pi n / c),
/// summed over n directly or over the dual frequency l with the complete sum
/// R(l; c) and the transform g(l, c) of the window U(t) W_s(tY/X).
SumValue B_sum(std::int64_t N, int s, double Y, Mode mode, const BsumOptions& opts = {},
               const specfun::CutoffConfig& cutoff = {});

/// B_s(X) = (1/X) sum_{N | c <= c_max} sum_{n >= 2} S(n^2, 1; c) / c W_s(n/X) J1(4 pi n / c),
/// the n-sum cut where |W_s| falls below 1e-16 relative to its size.
SumValue B_s(std::int64_t N, int s, double X, std::int64_t c_max,
             const specfun::CutoffConfig& cutoff = {});

struct AsumValue {
  double value = 0.0;
  double c_tail = 0.0;
  double B_first = 0.0;   // the m = 1 term B_s(N)
  double m_tail = 0.0;    // sum over m >= 2 of m^{-2} |B_s(N/m^2)| plus the c-tails
  std::int64_t m_max = 0;
  std::int64_t c_max = 0;
};

/// A_s = sum_{(m, N) = 1} m^{-2} B_s(N/m^2).
AsumValue A_sum(std::int64_t N, int s, std::int64_t c_max, const specfun::CutoffConfig& cutoff = {});

/// -(pi/N) sum_f omega_f I*_f(s): the spectral route to A_s.
double A_spectral(std::int64_t N, const std::vector<lfun::Sym2Value>& values, int s);

struct LevelAverage {
  std::int64_t N = 0;
  int genus = 0;
  double mean_logderiv = 0.0;  // (1/g) sum_f L'/L(1, Sym^2 f)
  double deviation = 0.0;      // mean - 2 zeta'/zeta(2)
  double C_F = 0.0;
  double volume = 0.0;         // (pi/3)(N + 1)
};

/// Level average of the exact-remainder L'/L values and the unfolded constant
///   vol g C_F = sum_f L'/L + g (-2 zeta'/zeta(2) + 1 - log 4 pi + log N / (N + 1)).
LevelAverage estimate_cZ(std::int64_t N, const std::vector<lfun::Sym2Value>& values);

}  // namespace selberg_edge::petersson
