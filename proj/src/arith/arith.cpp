#include "selberg_edge/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace selberg_edge::arith {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::int64_t kTrialBound = 1000;
constexpr std::int64_t kEnumerationCutoff = 1'000'000;

std::uint64_t mul_mod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod_u(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod_u(r, b, m);
    b = mul_mod_u(b, b, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = pow_mod_u(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mul_mod_u(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

// Pollard-Brent; returns a nontrivial factor of a composite n.
std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mul_mod_u(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod_u(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void collect_factors(std::uint64_t n, std::vector<std::int64_t>& out) {
  if (n == 1) return;
  if (is_prime(static_cast<std::int64_t>(n))) {
    out.push_back(static_cast<std::int64_t>(n));
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

Factorization from_prime_list(std::int64_t n, std::vector<std::int64_t> primes) {
  std::sort(primes.begin(), primes.end());
  Factorization f;
  f.n = n;
  for (auto p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

// Number of y mod 2^k with y^2 = e (mod 2^k).
std::int64_t count_square_roots_pow2(std::int64_t e, int k) {
  const std::int64_t modulus = ipow(2, k);
  e = mod(e, modulus);
  if (e == 0) return ipow(2, k / 2);
  int v = 0;
  while ((e & 1) == 0) {
    e >>= 1;
    ++v;
  }
  if (v % 2 == 1) return 0;
  const int r = k - v;
  std::int64_t unit_roots = 0;
  if (r == 1) {
    unit_roots = 1;
  } else if (r == 2) {
    unit_roots = (e % 4 == 1) ? 2 : 0;
  } else {
    unit_roots = (e % 8 == 1) ? 4 : 0;
  }
  return unit_roots * ipow(2, v / 2);
}

}  // namespace

std::int64_t Factorization::product() const {
  std::int64_t r = 1;
  for (const auto& [p, e] : factors) r *= ipow(p, e);
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  const i128 r = static_cast<i128>(mod(a, m)) * mod(b, m) % m;
  return static_cast<std::int64_t>(r);
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  return static_cast<std::int64_t>(
      pow_mod_u(static_cast<std::uint64_t>(mod(base, m)), exp, static_cast<std::uint64_t>(m)));
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::int64_t inv_mod(std::int64_t x, std::int64_t c) {
  if (c < 1) throw ArithmeticError("inv_mod: modulus must be positive");
  if (c == 1) return 0;
  std::int64_t a = mod(x, c), m = c;
  std::int64_t u0 = 1, u1 = 0;
  while (m != 0) {
    const std::int64_t q = a / m;
    std::int64_t t = a - q * m;
    a = m;
    m = t;
    t = u0 - q * u1;
    u0 = u1;
    u1 = t;
  }
  if (a != 1) {
    throw ArithmeticError("inv_mod: " + std::to_string(x) + " is not invertible modulo " +
                          std::to_string(c));
  }
  return mod(u0, c);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  const auto un = static_cast<std::uint64_t>(n);
  std::uint64_t d = un - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (miller_rabin_witness(un, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw ArithmeticError("factorize: n must be positive");
  if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ArithmeticError("factorize: n exceeds 2^63 - 1");
  }
  std::vector<std::int64_t> primes;
  std::uint64_t m = n;
  for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>(kTrialBound) && p * p <= m; ++p) {
    while (m % p == 0) {
      primes.push_back(static_cast<std::int64_t>(p));
      m /= p;
    }
  }
  collect_factors(m, primes);
  return from_prime_list(static_cast<std::int64_t>(n), std::move(primes));
}

int mobius(std::int64_t n) {
  if (n < 1) throw ArithmeticError("mobius: n must be positive");
  const auto f = factorize(static_cast<std::uint64_t>(n));
  for (const auto& pe : f.factors) {
    if (pe.exponent > 1) return 0;
  }
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

std::int64_t tau(std::int64_t n) {
  if (n < 1) throw ArithmeticError("tau: n must be positive");
  std::int64_t r = 1;
  for (const auto& pe : factorize(static_cast<std::uint64_t>(n)).factors) r *= pe.exponent + 1;
  return r;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw ArithmeticError("euler_phi: n must be positive");
  std::int64_t r = n;
  for (const auto& pe : factorize(static_cast<std::uint64_t>(n)).factors) r = r / pe.prime * (pe.prime - 1);
  return r;
}

std::vector<std::int64_t> divisors(const Factorization& f) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t current = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < current; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n < 1) throw ArithmeticError("divisors: n must be positive");
  return divisors(factorize(static_cast<std::uint64_t>(n)));
}

int legendre(std::int64_t a, std::int64_t p) {
  const std::int64_t r = pow_mod(a, static_cast<std::uint64_t>((p - 1) / 2), p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

std::int64_t count_quadratic_roots_prime_power(std::int64_t l, std::int64_t p, int k) {
  if (k == 0) return 1;
  if (p == 2) {
    // n(n + l) is even for odd l, so n^2 + l n + 1 is odd.
    if (mod(l, 2) == 1) return 0;
    // l = 2m: (n + m)^2 = m^2 - 1.
    const std::int64_t modulus = ipow(2, k);
    const std::int64_t m = mod(l / 2, modulus);
    const std::int64_t e = mod(mul_mod(m, m, modulus) - 1, modulus);
    return count_square_roots_pow2(e, k);
  }
  // Odd p: (2n + l)^2 = l^2 - 4 and n -> 2n + l is a bijection mod p^k.
  const std::int64_t modulus = ipow(p, k);
  std::int64_t d = mod(mul_mod(l, l, modulus) - 4, modulus);
  if (d == 0) return ipow(p, k / 2);
  int v = 0;
  while (d % p == 0) {
    d /= p;
    ++v;
  }
  if (v % 2 == 1) return 0;
  return legendre(d % p, p) == 1 ? 2 * ipow(p, v / 2) : 0;
}

std::int64_t count_quadratic_roots_lifted(std::int64_t l, std::int64_t p, int k) {
  if (k == 0) return 1;
  if (p > kEnumerationCutoff) {
    throw ArithmeticError("count_quadratic_roots_lifted: prime above enumeration cutoff");
  }
  auto f_mod = [l](std::int64_t n, std::int64_t m) {
    return mod(mul_mod(n, n, m) + mul_mod(l, n, m) + 1, m);
  };
  std::vector<std::int64_t> roots;
  for (std::int64_t n = 0; n < p; ++n) {
    if (f_mod(n, p) == 0) roots.push_back(n);
  }
  std::int64_t pj = p;
  for (int j = 1; j < k; ++j) {
    const std::int64_t next = pj * p;
    std::vector<std::int64_t> lifted;
    for (auto r : roots) {
      for (std::int64_t t = 0; t < p; ++t) {
        const std::int64_t cand = r + t * pj;
        if (f_mod(cand, next) == 0) lifted.push_back(cand);
      }
    }
    if (lifted.size() > 50'000'000) {
      throw ArithmeticError("count_quadratic_roots_lifted: root set too large to lift explicitly");
    }
    roots = std::move(lifted);
    pj = next;
  }
  return static_cast<std::int64_t>(roots.size());
}

std::int64_t count_quadratic_roots(std::int64_t l, const Factorization& a) {
  std::int64_t r = 1;
  for (const auto& [p, e] : a.factors) {
    r *= count_quadratic_roots_prime_power(l, p, e);
    if (r == 0) return 0;
  }
  return r;
}

std::int64_t count_quadratic_roots(std::int64_t l, std::int64_t a) {
  if (a < 1) throw ArithmeticError("count_quadratic_roots: modulus must be positive");
  return count_quadratic_roots(l, factorize(static_cast<std::uint64_t>(a)));
}

FactorSieve::FactorSieve(std::int64_t limit) : limit_(limit), spf_(static_cast<std::size_t>(limit) + 1, 0) {
  if (limit < 1 || limit > 2'000'000'000) throw ArithmeticError("FactorSieve: limit out of range");
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i > limit / i) continue;
    for (std::int64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

Factorization FactorSieve::factorize(std::int64_t n) const {
  if (n < 1 || n > limit_) return arith::factorize(static_cast<std::uint64_t>(n));
  Factorization f;
  f.n = n;
  while (n > 1) {
    const std::int64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

bool FactorSieve::is_prime(std::int64_t n) const {
  if (n < 2) return false;
  if (n > limit_) return arith::is_prime(n);
  return spf_[n] == n;
}

std::vector<std::int64_t> FactorSieve::primes_up_to(std::int64_t bound) const {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 2; i <= std::min(bound, limit_); ++i) {
    if (spf_[i] == i) out.push_back(i);
  }
  return out;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  if (bound < 2) return {};
  return FactorSieve(bound).primes_up_to(bound);
}

}  // namespace selberg_edge::arith
