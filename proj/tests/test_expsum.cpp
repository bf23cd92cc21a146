#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "selberg_edge/expsum.hpp"

using namespace selberg_edge;
using namespace selberg_edge::expsum;

namespace {

// Plain complex exponential sums, no shortcuts.
std::complex<double> e(double x) {
  return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

std::complex<double> naive_kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  std::complex<double> s = 0.0;
  for (std::int64_t x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    std::int64_t xb = 0;
    while ((xb * x) % c != 1 % c) ++xb;
    s += e(static_cast<double>(m * xb + n * x) / static_cast<double>(c));
  }
  return s;
}

std::complex<double> naive_r(std::int64_t l, std::int64_t c) {
  std::complex<double> s = 0.0;
  for (std::int64_t n = 0; n < c; ++n) {
    s += naive_kloosterman(n * n, 1, c) * e(static_cast<double>(l * n) / static_cast<double>(c));
  }
  return s;
}

}  // namespace

TEST_CASE("kloosterman examples") {
  CHECK(kloosterman(1, 1, 1) == doctest::Approx(1.0));
  CHECK(kloosterman(1, 1, 2) == doctest::Approx(1.0));
  CHECK(kloosterman(1, 1, 5) == doctest::Approx(2.0 + 2.0 * std::cos(4.0 * std::numbers::pi / 5.0)).epsilon(1e-12));
  CHECK(kloosterman(1, 1, 5) == doctest::Approx(0.381966).epsilon(1e-6));
}

TEST_CASE("kloosterman matches naive enumeration and is symmetric") {
  for (std::int64_t c = 1; c <= 60; ++c) {
    for (std::int64_t m = -3; m <= 6; ++m) {
      for (std::int64_t n = 0; n <= 6; ++n) {
        const auto ref = naive_kloosterman(m, n, c);
        REQUIRE(std::abs(kloosterman(m, n, c) - ref.real()) <= 1e-9);
        REQUIRE(std::abs(kloosterman(m, n, c) - kloosterman(n, m, c)) <= 1e-9 * static_cast<double>(c));
      }
    }
  }
}

TEST_CASE("ramanujan sums") {
  CHECK(ramanujan(0, 6) == 2);
  CHECK(ramanujan(2, 4) == -2);
  CHECK(ramanujan(1, 30) == -1);
  for (std::int64_t q = 1; q <= 200; ++q) {
    for (std::int64_t n = -10; n <= 40; ++n) {
      const auto b = ramanujan_bruteforce(n, q);
      REQUIRE(std::abs(b.real() - static_cast<double>(ramanujan(n, q))) <= 1e-9 * static_cast<double>(q));
      REQUIRE(std::abs(b.imag()) <= 1e-9 * static_cast<double>(q));
    }
  }
}

TEST_CASE("R(l; c) examples") {
  CHECK(std::abs(r_sum_bruteforce(7, 1) - 1.0) < 1e-12);
  CHECK(std::abs(r_sum_bruteforce(0, 5) - 5.0) < 1e-9);
  CHECK(std::abs(r_sum_bruteforce(0, 3) + 3.0) < 1e-9);
  CHECK(r_sum_closed(4, 1) == 1);
  CHECK(r_sum_closed(0, 5) == 5);
  CHECK(r_sum_closed(0, 3) == -3);
  CHECK(r_sum_closed(0, 9) == 0);
}

TEST_CASE("R(l; c) brute force agrees with the naive Kloosterman-sum definition") {
  for (std::int64_t c = 1; c <= 24; ++c) {
    for (std::int64_t l = -3; l <= 3; ++l) {
      REQUIRE(std::abs(r_sum_bruteforce(l, c) - naive_r(l, c)) <= 1e-8 * static_cast<double>(c * c));
    }
  }
}

TEST_CASE("R(l; c) closed form vs brute force, small grid") {
  for (std::int64_t c = 1; c <= 120; ++c) {
    for (std::int64_t l = -10; l <= 10; ++l) {
      const auto r = r_sum(l, c, true);
      REQUIRE(r.value_numeric.has_value());
      REQUIRE(r.consistent());
      REQUIRE(std::abs(static_cast<double>(*r.value_exact)) <= r.bound);
    }
  }
}

TEST_CASE("variant with the n-sum first") {
  CHECK(mu_variant_closed(3, 1) == 1);
  CHECK(std::abs(mu_variant_bruteforce(3, 1) - 1.0) < 1e-12);
  // x^2 + 1 = 0 has two roots mod 5, so the double sum is 5 * 2.
  CHECK(std::abs(mu_variant_bruteforce(0, 5) - 10.0) < 1e-9);
  CHECK(mu_variant_closed(0, 5) == 10);
  CHECK(std::abs(mu_variant_bruteforce(1, 7) - 14.0) < 1e-9);
  CHECK(mu_variant_closed(1, 7) == 14);
  for (std::int64_t c = 1; c <= 100; ++c) {
    for (std::int64_t l = -10; l <= 10; ++l) {
      REQUIRE(mu_variant(l, c, true).consistent());
    }
  }
}

TEST_CASE("brute-force cost guard") {
  CHECK_THROWS_AS(r_sum_bruteforce(0, 20011), TooLargeError);
  CHECK_THROWS_AS(mu_variant_bruteforce(0, 20011), TooLargeError);
  const auto r = r_sum(0, 20011, true);
  CHECK_FALSE(r.value_numeric.has_value());
  CHECK(r.value_exact.has_value());
}

TEST_CASE("KloostermanEngine agrees with direct sums") {
  KloostermanEngine engine(50);
  std::vector<KloostermanEngine::Pair> pairs;
  for (std::int64_t m = 1; m <= 4; ++m) {
    for (std::int64_t n = 1; n <= 4; ++n) pairs.push_back({m, n});
  }
  pairs.push_back({9, 1});
  pairs.push_back({0, 3});
  std::vector<double> out(pairs.size());
  for (std::int64_t c = 1; c <= 3000; c += (c < 400 ? 1 : 37)) {
    const auto fc = arith::factorize(static_cast<std::uint64_t>(c));
    engine.evaluate(fc, pairs, out);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      REQUIRE(std::abs(out[i] - kloosterman(pairs[i].m, pairs[i].n, c)) <= 1e-8 * static_cast<double>(c));
    }
  }
}

TEST_CASE("uniform bound on R(l; c) / c") {
  for (std::int64_t c = 1; c <= 3000; ++c) {
    const auto fc = arith::factorize(static_cast<std::uint64_t>(c));
    const double b = r_sum_uniform_bound(fc);
    for (std::int64_t l = -60; l <= 60; ++l) {
      REQUIRE(std::abs(static_cast<double>(r_sum_closed(l, fc))) <= b * static_cast<double>(c));
    }
  }
}
