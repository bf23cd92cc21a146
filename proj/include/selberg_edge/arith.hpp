#pragma once

// Exact integer and modular arithmetic on 64-bit integers.
//
// Products modulo c go through 128-bit intermediates, so every routine is
// exact for moduli up to 2^63 - 1.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace selberg_edge::arith {

/// Thrown when an argument is outside the domain of an arithmetic routine.
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PrimePower {
  std::int64_t prime;
  int exponent;

  bool operator==(const PrimePower&) const = default;
};

/// n = prod p^e with primes strictly increasing and every exponent >= 1.
struct Factorization {
  std::int64_t n = 1;
  std::vector<PrimePower> factors;

  /// Recomputes the product of the prime powers (used by invariant checks).
  std::int64_t product() const;
};

// Nonnegative residue of a modulo m (m >= 1).
std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t ipow(std::int64_t base, int exp);

/// Inverse of x modulo c in [0, c). Throws ArithmeticError when gcd(x, c) != 1.
std::int64_t inv_mod(std::int64_t x, std::int64_t c);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::int64_t n);

/// Accepts any n in [1, 2^63 - 1]; larger inputs are rejected rather than
/// wrapped. Pollard-Brent takes over once trial division stops paying off.
Factorization factorize(std::uint64_t n);

int mobius(std::int64_t n);
std::int64_t tau(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);

/// Positive divisors in increasing order.
std::vector<std::int64_t> divisors(std::int64_t n);
std::vector<std::int64_t> divisors(const Factorization& f);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(std::int64_t a, std::int64_t p);

/// Number of residues n mod p^k with n^2 + l n + 1 = 0 (mod p^k).
///
/// Completing the square reduces this to counting square roots of l^2 - 4
/// (odd p) or of m^2 - 1 with l = 2m (p = 2), read off from the valuation and
/// the unit part.
std::int64_t count_quadratic_roots_prime_power(std::int64_t l, std::int64_t p, int k);

/// Generic path: enumerate roots mod p (p <= 10^6), then lift each candidate
/// through p^2, ..., p^k. Kept as an independent route for cross-checks.
std::int64_t count_quadratic_roots_lifted(std::int64_t l, std::int64_t p, int k);

/// #{n mod a : n^2 + l n + 1 = 0 (mod a)}, multiplicative over the prime
/// powers of a.
std::int64_t count_quadratic_roots(std::int64_t l, std::int64_t a);
std::int64_t count_quadratic_roots(std::int64_t l, const Factorization& a);

/// Smallest-prime-factor table for bulk factorization of n <= limit.
class FactorSieve {
 public:
  explicit FactorSieve(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  Factorization factorize(std::int64_t n) const;
  bool is_prime(std::int64_t n) const;
  std::vector<std::int64_t> primes_up_to(std::int64_t bound) const;

 private:
  std::int64_t limit_;
  std::vector<std::uint32_t> spf_;
};

/// Primes p <= bound by a plain sieve.
std::vector<std::int64_t> primes_up_to(std::int64_t bound);

}  // namespace selberg_edge::arith
