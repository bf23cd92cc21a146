#include "doctest.h"

#include <numeric>

#include "selberg_edge/arith.hpp"

using namespace selberg_edge::arith;

namespace {

// Trial division, used as an independent factorization.
std::vector<std::int64_t> trial_primes(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t enumerate_roots(std::int64_t l, std::int64_t a) {
  // v = n^2 + l n + 1 mod a, stepped by 2n + 1 + l.
  std::int64_t count = 0;
  std::int64_t v = mod(1, a);
  std::int64_t step = mod(1 + l, a);
  const std::int64_t two = 2 % a;
  for (std::int64_t n = 0; n < a; ++n) {
    if (v == 0) ++count;
    v += step;
    if (v >= a) v -= a;
    step += two;
    if (step >= a) step -= a;
  }
  return count;
}

}  // namespace

TEST_CASE("factorize small values") {
  CHECK(factorize(1).factors.empty());
  const auto f12 = factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == PrimePower{2, 2});
  CHECK(f12.factors[1] == PrimePower{3, 1});
  const auto f = factorize(9973);
  REQUIRE(f.factors.size() == 1);
  CHECK(f.factors[0] == PrimePower{9973, 1});
}

TEST_CASE("factorize agrees with trial division") {
  for (std::int64_t n = 1; n <= 20000; ++n) {
    const auto f = factorize(static_cast<std::uint64_t>(n));
    CHECK(f.product() == n);
    std::vector<std::int64_t> flat;
    for (auto [p, e] : f.factors) flat.insert(flat.end(), e, p);
    REQUIRE(flat == trial_primes(n));
  }
}

TEST_CASE("factorize large inputs") {
  const std::uint64_t big = 1000000007ULL * 998244353ULL;
  const auto f = factorize(big);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].prime == 998244353);
  CHECK(f.factors[1].prime == 1000000007);
  CHECK(factorize(9223372036854775783ULL).factors.size() == 1);  // largest prime below 2^63
  CHECK_THROWS_AS(factorize(0), ArithmeticError);
  CHECK_THROWS_AS(factorize(1ULL << 63), ArithmeticError);
}

TEST_CASE("mobius, tau, phi") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(4) == 0);
  CHECK(mobius(30) == -1);
  CHECK(tau(1) == 1);
  CHECK(tau(12) == 6);
  CHECK(tau(720) == 30);
  for (std::int64_t n = 1; n <= 10000; ++n) {
    std::int64_t s = 0, t = 0, phi = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
      if (n % d == 0) {
        s += mobius(d);
        ++t;
      }
    }
    if (n <= 2000) {
      for (std::int64_t x = 1; x <= n; ++x) phi += std::gcd(x, n) == 1;
      REQUIRE(euler_phi(n) == phi);
    }
    REQUIRE(s == (n == 1 ? 1 : 0));
    REQUIRE(tau(n) == t);
  }
}

TEST_CASE("inv_mod") {
  CHECK(inv_mod(1, 5) == 1);
  CHECK(inv_mod(2, 5) == 3);
  CHECK(inv_mod(17, 101) == 6);
  CHECK(inv_mod(-3, 7) == 2);
  CHECK(inv_mod(0, 1) == 0);
  CHECK_THROWS_AS(inv_mod(4, 6), ArithmeticError);
}

TEST_CASE("count_quadratic_roots examples") {
  CHECK(count_quadratic_roots(0, 1) == 1);
  CHECK(count_quadratic_roots(0, 5) == 2);
  CHECK(count_quadratic_roots(0, 3) == 0);
}

TEST_CASE("count_quadratic_roots agrees with enumeration") {
  for (std::int64_t l = -20; l <= 20; ++l) {
    for (std::int64_t a = 1; a <= 10000; ++a) {
      REQUIRE(count_quadratic_roots(l, a) == enumerate_roots(l, a));
    }
  }
}

TEST_CASE("root counts: closed form vs lifting") {
  for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    for (int k = 0; k <= 12; ++k) {
      if (ipow(p, k) > 5000000) break;
      for (std::int64_t l = -30; l <= 30; ++l) {
        REQUIRE(count_quadratic_roots_prime_power(l, p, k) == count_quadratic_roots_lifted(l, p, k));
      }
    }
  }
}

TEST_CASE("root counts are multiplicative") {
  for (std::int64_t l = -5; l <= 5; ++l) {
    for (std::int64_t a = 1; a <= 60; ++a) {
      for (std::int64_t b = 1; b <= 60; ++b) {
        if (std::gcd(a, b) != 1) continue;
        REQUIRE(count_quadratic_roots(l, a * b) == count_quadratic_roots(l, a) * count_quadratic_roots(l, b));
      }
    }
  }
}

TEST_CASE("FactorSieve") {
  FactorSieve sieve(100000);
  for (std::int64_t n = 1; n <= 100000; n += 7) {
    const auto a = sieve.factorize(n);
    const auto b = factorize(static_cast<std::uint64_t>(n));
    REQUIRE(a.factors == b.factors);
    REQUIRE(sieve.is_prime(n) == is_prime(n));
  }
  CHECK(sieve.primes_up_to(100) == primes_up_to(100));
  CHECK(primes_up_to(30) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}
