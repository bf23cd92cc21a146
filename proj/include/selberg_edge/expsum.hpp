#pragma once

// Complete exponential sums: Kloosterman, Ramanujan, the two-dimensional sum
// R(l; c) = sum_{n mod c} S(n^2, 1; c) e_c(l n) and the variant obtained by
// summing over n first.
//
// Brute-force routines enumerate the defining double sums in floating point;
// closed forms are exact integers. The two are each other's oracle.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "selberg_edge/arith.hpp"

namespace selberg_edge::expsum {

/// Brute-force cost c * phi(c) above this is refused.
inline constexpr double kBruteForceCostGuard = 1e8;

class TooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpSumResult {
  std::int64_t modulus = 1;
  std::optional<std::int64_t> value_exact;
  std::optional<std::complex<double>> value_numeric;
  double bound = 0.0;  // c * tau(c)^2 for R and its variant

  /// |numeric - exact| <= 1e-6 * max(1, c) whenever both are present.
  bool consistent() const;
};

/// S(m, n; c) = sum over units x mod c of e((m xbar + n x) / c). The sum is
/// real; the imaginary part is computed and must vanish to 1e-9 * c.
double kloosterman(std::int64_t m, std::int64_t n, std::int64_t c);

/// sum_{a | gcd(q, n)} a * mu(q / a).
std::int64_t ramanujan(std::int64_t n, std::int64_t q);

/// sum over units x mod q of e(n x / q), enumerated (test oracle).
std::complex<double> ramanujan_bruteforce(std::int64_t n, std::int64_t q);

/// sum_{n mod c} sum_{x mod c, unit} e((n^2 xbar + x + l n) / c).
std::complex<double> r_sum_bruteforce(std::int64_t l, std::int64_t c);

/// c * sum_{a | c} mu(c / a) * #{n mod a : n^2 + l n + 1 = 0 (mod a)}.
std::int64_t r_sum_closed(std::int64_t l, std::int64_t c);
std::int64_t r_sum_closed(std::int64_t l, const arith::Factorization& c);

/// Bound on |R(l; c)| / c valid for every l: each local factor is a difference
/// of two root counts, both at most 2 p^{floor(e/2)} (4 * 2^{floor(e/2)} at 2).
double r_sum_uniform_bound(const arith::Factorization& c);

/// sum_{n mod c} sum_{x mod c, unit} e((n x + n xbar + l n) / c).
std::complex<double> mu_variant_bruteforce(std::int64_t l, std::int64_t c);

/// c * #{x mod c : x^2 + l x + 1 = 0 (mod c)}; the inner n-sum collapses onto
/// x + xbar + l = 0 and every root of the quadratic is a unit.
std::int64_t mu_variant_closed(std::int64_t l, std::int64_t c);

/// Closed form plus (when cheap enough) the brute-force value and the bound.
ExpSumResult r_sum(std::int64_t l, std::int64_t c, bool with_bruteforce);
ExpSumResult mu_variant(std::int64_t l, std::int64_t c, bool with_bruteforce);

/// c * tau(c)^2.
double square_root_bound(std::int64_t c);

/// Batch evaluation of S(m_i, n_i; c) for many moduli.
///
/// Uses twisted multiplicativity
///   S(m, n; q r) = S(m rbar, n rbar; q) S(m qbar, n qbar; r),  gcd(q, r) = 1,
/// down to prime powers. A prime modulus not dividing m reduces further to
/// S(1, m n; p), evaluated from per-prime cosine and inverse tables. Tables for
/// primes up to `cache_limit` are kept; larger primes reuse the most recent
/// table, so callers should visit moduli grouped by their largest prime factor.
class KloostermanEngine {
 public:
  struct Pair {
    std::int64_t m;
    std::int64_t n;
  };

  explicit KloostermanEngine(std::int64_t cache_limit = 1000);

  /// out[i] = S(pairs[i].m, pairs[i].n; c) given the factorization of c.
  void evaluate(const arith::Factorization& c, std::span<const Pair> pairs, std::span<double> out);

 private:
  struct PrimeTable {
    std::int64_t p = 0;
    std::vector<double> cosines;        // cos(2 pi k / p)
    std::vector<std::int32_t> inverse;  // inverse[x] = xbar mod p
  };

  const PrimeTable& table_for(std::int64_t p);
  // Local factor at a prime power, arguments already reduced.
  void local_prime(const PrimeTable& t, std::span<const std::int64_t> alpha,
                   std::span<const std::int64_t> beta, std::span<double> out);
  double local_prime_power(std::int64_t alpha, std::int64_t beta, std::int64_t q);

  std::int64_t cache_limit_;
  std::unordered_map<std::int64_t, PrimeTable> cache_;
  PrimeTable scratch_;
};

}  // namespace selberg_edge::expsum
