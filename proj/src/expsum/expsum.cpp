#include "selberg_edge/expsum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace selberg_edge::expsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::int64_t kPrimePowerTableLimit = 1 << 17;

using i128 = __int128;

// Kahan-compensated accumulator for the brute-force sums.
class Compensated {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::complex<double> sum_histogram(const std::vector<std::int64_t>& counts) {
  const auto c = static_cast<double>(counts.size());
  Compensated re, im;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const double angle = kTwoPi * static_cast<double>(k) / c;
    const auto w = static_cast<double>(counts[k]);
    re.add(w * std::cos(angle));
    im.add(w * std::sin(angle));
  }
  return {re.value(), im.value()};
}

void check_cost(std::int64_t c, const char* what) {
  if (c < 1) throw arith::ArithmeticError(std::string(what) + ": modulus must be positive");
  const double cost = static_cast<double>(c) * static_cast<double>(arith::euler_phi(c));
  if (cost > kBruteForceCostGuard) {
    throw TooLargeError(std::string(what) + ": c = " + std::to_string(c) +
                        " is too large for brute force (c*phi(c) > 1e8)");
  }
}

// Cosines cos(2 pi k / q) by rotation, resynchronised every 64 steps.
std::vector<double> cosine_table(std::int64_t q) {
  std::vector<double> out(static_cast<std::size_t>(q));
  const double step = kTwoPi / static_cast<double>(q);
  const std::complex<double> rot(std::cos(step), std::sin(step));
  std::complex<double> z;
  const std::int64_t half = q / 2;
  for (std::int64_t k = 0; k <= half; ++k) {
    if (k % 64 == 0) {
      const double a = step * static_cast<double>(k);
      z = {std::cos(a), std::sin(a)};
    }
    out[k] = z.real();
    if (k > 0) out[q - k] = z.real();
    z *= rot;
  }
  return out;
}

}  // namespace

bool ExpSumResult::consistent() const {
  if (!value_exact || !value_numeric) return true;
  const double tol = 1e-6 * std::max<double>(1.0, static_cast<double>(modulus));
  return std::abs(*value_numeric - std::complex<double>(static_cast<double>(*value_exact), 0.0)) <= tol;
}

double kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw arith::ArithmeticError("kloosterman: modulus must be positive");
  Compensated re, im;
  for (std::int64_t x = 0; x < c; ++x) {
    if (arith::gcd(x, c) != 1) continue;
    const std::int64_t xbar = arith::inv_mod(x, c);
    const std::int64_t k = arith::mod(arith::mul_mod(m, xbar, c) + arith::mul_mod(n, x, c), c);
    const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(c);
    re.add(std::cos(angle));
    im.add(std::sin(angle));
  }
  if (std::abs(im.value()) > 1e-9 * static_cast<double>(c)) {
    throw std::logic_error("kloosterman: imaginary part did not cancel");
  }
  return re.value();
}

std::int64_t ramanujan(std::int64_t n, std::int64_t q) {
  if (q < 1) throw arith::ArithmeticError("ramanujan: modulus must be positive");
  const std::int64_t g = arith::gcd(q, n);  // gcd(q, 0) = q
  std::int64_t total = 0;
  for (auto a : arith::divisors(g)) total += a * arith::mobius(q / a);
  return total;
}

std::complex<double> ramanujan_bruteforce(std::int64_t n, std::int64_t q) {
  if (q < 1) throw arith::ArithmeticError("ramanujan_bruteforce: modulus must be positive");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(q), 0);
  for (std::int64_t x = 0; x < q; ++x) {
    if (arith::gcd(x, q) == 1) ++counts[arith::mul_mod(n, x, q)];
  }
  return sum_histogram(counts);
}

std::complex<double> r_sum_bruteforce(std::int64_t l, std::int64_t c) {
  check_cost(c, "r_sum_bruteforce");
  // counts[k] = #{(n, x) : n^2 xbar + x + l n = k (mod c)}; along n the
  // phase increases by (2n + 1) xbar + l.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(c), 0);
  const std::int64_t lm = arith::mod(l, c);
  for (std::int64_t x = 0; x < c; ++x) {
    if (arith::gcd(x, c) != 1) continue;
    const std::int64_t xbar = arith::inv_mod(x, c);
    const std::int64_t two_xbar = (2 * xbar) % c;
    std::int64_t v = x % c;
    std::int64_t d = (xbar + lm) % c;
    for (std::int64_t n = 0; n < c; ++n) {
      ++counts[v];
      v += d;
      if (v >= c) v -= c;
      d += two_xbar;
      if (d >= c) d -= c;
    }
  }
  return sum_histogram(counts);
}

std::int64_t r_sum_closed(std::int64_t l, std::int64_t c) {
  if (c < 1) throw arith::ArithmeticError("r_sum_closed: modulus must be positive");
  return r_sum_closed(l, arith::factorize(static_cast<std::uint64_t>(c)));
}

std::int64_t r_sum_closed(std::int64_t l, const arith::Factorization& fc) {
  const std::int64_t c = fc.n;
  // rho[i][j] = count of roots modulo p_i^j.
  std::vector<std::vector<std::int64_t>> rho;
  for (const auto& [p, e] : fc.factors) {
    std::vector<std::int64_t> row(static_cast<std::size_t>(e) + 1);
    for (int j = 0; j <= e; ++j) row[j] = arith::count_quadratic_roots_prime_power(l, p, j);
    rho.push_back(std::move(row));
  }
  // Walk every divisor a | c by its exponent vector.
  const std::size_t k = fc.factors.size();
  std::vector<int> exps(k, 0);
  i128 total = 0;
  while (true) {
    int sign = 1;
    bool squareful = false;
    i128 roots = 1;
    for (std::size_t i = 0; i < k; ++i) {
      const int gap = fc.factors[i].exponent - exps[i];
      if (gap >= 2) squareful = true;
      if (gap == 1) sign = -sign;
      roots *= rho[i][exps[i]];
    }
    if (!squareful) total += sign * roots;
    std::size_t i = 0;
    while (i < k && exps[i] == fc.factors[i].exponent) exps[i++] = 0;
    if (i == k) break;
    ++exps[i];
  }
  const i128 value = total * c;
  if (value > INT64_MAX || value < INT64_MIN) throw arith::ArithmeticError("r_sum_closed: overflow");
  return static_cast<std::int64_t>(value);
}

std::complex<double> mu_variant_bruteforce(std::int64_t l, std::int64_t c) {
  check_cost(c, "mu_variant_bruteforce");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(c), 0);
  for (std::int64_t x = 0; x < c; ++x) {
    if (arith::gcd(x, c) != 1) continue;
    const std::int64_t xbar = arith::inv_mod(x, c);
    const std::int64_t step = arith::mod(x + xbar + l, c);
    std::int64_t v = 0;
    for (std::int64_t n = 0; n < c; ++n) {
      ++counts[v];
      v += step;
      if (v >= c) v -= c;
    }
  }
  return sum_histogram(counts);
}

std::int64_t mu_variant_closed(std::int64_t l, std::int64_t c) {
  if (c < 1) throw arith::ArithmeticError("mu_variant_closed: modulus must be positive");
  const i128 value = static_cast<i128>(c) * arith::count_quadratic_roots(l, c);
  if (value > INT64_MAX) throw arith::ArithmeticError("mu_variant_closed: overflow");
  return static_cast<std::int64_t>(value);
}

double r_sum_uniform_bound(const arith::Factorization& fc) {
  double b = 1.0;
  for (const auto& [p, e] : fc.factors) {
    const double half = std::pow(static_cast<double>(p), e / 2);
    b *= (p == 2 ? 4.0 : 2.0) * half;
  }
  return b;
}

double square_root_bound(std::int64_t c) {
  const auto t = static_cast<double>(arith::tau(c));
  return static_cast<double>(c) * t * t;
}

namespace {

bool brute_force_affordable(std::int64_t c) {
  return static_cast<double>(c) * static_cast<double>(arith::euler_phi(c)) <= kBruteForceCostGuard;
}

}  // namespace

ExpSumResult r_sum(std::int64_t l, std::int64_t c, bool with_bruteforce) {
  ExpSumResult r;
  r.modulus = c;
  r.value_exact = r_sum_closed(l, c);
  r.bound = square_root_bound(c);
  if (with_bruteforce && brute_force_affordable(c)) r.value_numeric = r_sum_bruteforce(l, c);
  return r;
}

ExpSumResult mu_variant(std::int64_t l, std::int64_t c, bool with_bruteforce) {
  ExpSumResult r;
  r.modulus = c;
  r.value_exact = mu_variant_closed(l, c);
  r.bound = square_root_bound(c);
  if (with_bruteforce && brute_force_affordable(c)) r.value_numeric = mu_variant_bruteforce(l, c);
  return r;
}

// ---------------------------------------------------------------------------
// KloostermanEngine

KloostermanEngine::KloostermanEngine(std::int64_t cache_limit) : cache_limit_(cache_limit) {}

const KloostermanEngine::PrimeTable& KloostermanEngine::table_for(std::int64_t q) {
  auto build = [](PrimeTable& t, std::int64_t modulus) {
    t.p = modulus;
    t.cosines = cosine_table(modulus);
    t.inverse.assign(static_cast<std::size_t>(modulus), -1);
    if (modulus == 1) {
      t.inverse[0] = 0;
      return;
    }
    if (arith::is_prime(modulus)) {
      t.inverse[1] = 1;
      for (std::int64_t i = 2; i < modulus; ++i) {
        const std::int64_t v = modulus - (modulus / i) * t.inverse[modulus % i] % modulus;
        t.inverse[i] = static_cast<std::int32_t>(v % modulus);
      }
    } else {
      for (std::int64_t x = 1; x < modulus; ++x) {
        if (arith::gcd(x, modulus) == 1) t.inverse[x] = static_cast<std::int32_t>(arith::inv_mod(x, modulus));
      }
    }
  };
  const bool cacheable = arith::is_prime(q) ? q <= cache_limit_ : q <= kPrimePowerTableLimit;
  if (cacheable) {
    auto it = cache_.find(q);
    if (it == cache_.end()) {
      it = cache_.emplace(q, PrimeTable{}).first;
      build(it->second, q);
    }
    return it->second;
  }
  if (scratch_.p != q) build(scratch_, q);
  return scratch_;
}

void KloostermanEngine::local_prime(const PrimeTable& t, std::span<const std::int64_t> alpha,
                                    std::span<const std::int64_t> beta, std::span<double> out) {
  const std::int64_t p = t.p;
  // Distinct products a = alpha * beta with both factors units.
  std::int64_t distinct[32];
  double sums[32];
  std::size_t nd = 0;
  std::vector<int> slot(alpha.size(), -1);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const bool za = alpha[i] == 0, zb = beta[i] == 0;
    if (za && zb) {
      out[i] = static_cast<double>(p - 1);
    } else if (za || zb) {
      out[i] = -1.0;
    } else {
      const std::int64_t a = alpha[i] * beta[i] % p;
      std::size_t j = 0;
      while (j < nd && distinct[j] != a) ++j;
      if (j == nd) {
        if (nd == 32) throw std::logic_error("KloostermanEngine: too many distinct parameters");
        distinct[nd++] = a;
      }
      slot[i] = static_cast<int>(j);
    }
  }
  if (nd > 0) {
    if (p == 2) {
      for (std::size_t j = 0; j < nd; ++j) sums[j] = 1.0;  // S(1, 1; 2) = e(2 / 2)
    } else {
      // S(1, a; p) = 2 sum_{x=1}^{(p-1)/2} cos(2 pi (xbar + a x) / p).
      std::int64_t ax[32];
      for (std::size_t j = 0; j < nd; ++j) {
        ax[j] = 0;
        sums[j] = 0.0;
      }
      const std::int64_t half = (p - 1) / 2;
      const double* cosines = t.cosines.data();
      const std::int32_t* inverse = t.inverse.data();
      for (std::int64_t x = 1; x <= half; ++x) {
        const std::int64_t xb = inverse[x];
        for (std::size_t j = 0; j < nd; ++j) {
          ax[j] += distinct[j];
          if (ax[j] >= p) ax[j] -= p;
          std::int64_t idx = xb + ax[j];
          if (idx >= p) idx -= p;
          sums[j] += cosines[idx];
        }
      }
      for (std::size_t j = 0; j < nd; ++j) sums[j] *= 2.0;
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (slot[i] >= 0) out[i] = sums[slot[i]];
    }
  }
}

double KloostermanEngine::local_prime_power(std::int64_t alpha, std::int64_t beta, std::int64_t q) {
  const PrimeTable& t = table_for(q);
  double s = 0.0;
  for (std::int64_t x = 1; x < q; ++x) {
    const std::int32_t xb = t.inverse[x];
    if (xb < 0) continue;
    const std::int64_t idx = (static_cast<i128>(alpha) * xb + static_cast<i128>(beta) * x) % q;
    s += t.cosines[idx];
  }
  return s;
}

void KloostermanEngine::evaluate(const arith::Factorization& c, std::span<const Pair> pairs,
                                 std::span<double> out) {
  const std::size_t np = pairs.size();
  for (std::size_t i = 0; i < np; ++i) out[i] = 1.0;
  std::vector<std::int64_t> alpha(np), beta(np);
  std::vector<double> local(np);
  for (const auto& [p, e] : c.factors) {
    const std::int64_t q = arith::ipow(p, e);
    const std::int64_t r = c.n / q;
    const std::int64_t rbar = arith::inv_mod(r % q, q);
    for (std::size_t i = 0; i < np; ++i) {
      alpha[i] = arith::mul_mod(pairs[i].m, rbar, q);
      beta[i] = arith::mul_mod(pairs[i].n, rbar, q);
    }
    if (e == 1) {
      local_prime(table_for(p), alpha, beta, local);
    } else {
      for (std::size_t i = 0; i < np; ++i) local[i] = local_prime_power(alpha[i], beta[i], q);
    }
    for (std::size_t i = 0; i < np; ++i) out[i] *= local[i];
  }
}

}  // namespace selberg_edge::expsum
