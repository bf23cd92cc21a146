#include "doctest.h"

#include <cmath>
#include <numbers>

#include "selberg_edge/arith.hpp"
#include "selberg_edge/expsum.hpp"
#include "selberg_edge/hecke.hpp"
#include "selberg_edge/lfun.hpp"
#include "selberg_edge/petersson.hpp"
#include "selberg_edge/specfun.hpp"

using namespace selberg_edge;
using namespace selberg_edge::petersson;

namespace {

constexpr double pi = std::numbers::pi;

struct Spectral {
  std::vector<hecke::EigenSystem> systems;
  std::vector<lfun::Sym2Value> values;
  std::vector<double> L1;
};

Spectral spectral(std::int64_t N) {
  lfun::AfeConfig cfg;
  cfg.oracle = false;
  const lfun::LevelKernels k(N, cfg);
  Spectral out;
  out.systems = hecke::eigen_systems(hecke::ManinSpace(N), k.length());
  for (const auto& f : out.systems) {
    out.values.push_back(lfun::evaluate(f, k));
    out.L1.push_back(out.values.back().L1);
  }
  return out;
}

// Straight c-loop with Kloosterman sums from the definition.
double naive_geometric(std::int64_t N, std::int64_t m, std::int64_t n, std::int64_t c_max) {
  double acc = 0.0;
  for (std::int64_t c = N; c <= c_max; c += N) {
    acc += expsum::kloosterman(m, n, c) / c *
           specfun::bessel_j1(4 * pi * std::sqrt(static_cast<double>(m * n)) / c);
  }
  return (m == n ? 1.0 : 0.0) - 2 * pi * acc;
}

}  // namespace

TEST_CASE("divisor tail bound dominates the partial sums") {
  for (std::int64_t N : {11, 37}) {
    for (std::int64_t C : {N, 10 * N, 1000 * N}) {
      double partial = 0.0;
      for (std::int64_t c = C + N - C % N; c <= 400 * C; c += N) {
        partial += static_cast<double>(arith::tau(c)) * std::pow(static_cast<double>(c), -1.5);
      }
      CHECK(partial <= divisor_tail(N, C));
    }
  }
  CHECK_THROWS_AS(divisor_tail(11, 5), PeterssonError);
}

TEST_CASE("geometric side: engine agrees with the naive c-loop") {
  const auto batch = delta_geometric(17, {{1, 1}, {2, 3}, {4, 4}}, 3000);
  CHECK(batch[0].value == doctest::Approx(naive_geometric(17, 1, 1, 3000)).epsilon(1e-12));
  CHECK(batch[1].value == doctest::Approx(naive_geometric(17, 2, 3, 3000)).epsilon(1e-12));
  CHECK(batch[2].value == doctest::Approx(naive_geometric(17, 4, 4, 3000)).epsilon(1e-12));
}

TEST_CASE("genus zero: the geometric side vanishes") {
  const auto g = delta_geometric(13, {{1, 1}, {1, 2}, {3, 3}}, 100000);
  for (const auto& v : g) CHECK(std::fabs(v.value) <= v.tail_bound);
  for (const auto& v : g) CHECK(std::fabs(v.value) < 1e-3);
  CHECK(delta_spectral(13, {}, {}, 1, 1) == 0.0);
}

TEST_CASE("Petersson identity at level 11 and 23") {
  for (std::int64_t N : {11, 23}) {
    const auto S = spectral(N);
    const auto table = petersson_table(N, S.systems, S.L1, 3, 100000);
    for (const auto& d : table) {
      CHECK(d.ok(1e-4));
      CHECK(d.gap() < 1e-3);
    }
    CHECK(delta_spectral(N, S.systems, S.L1, 2, 3) ==
          doctest::Approx(delta_spectral(N, S.systems, S.L1, 3, 2)).epsilon(1e-12));
  }
}

TEST_CASE("doubling c_max moves the geometric side by less than the tail bound") {
  const auto a = delta_geometric(19, 2, 2, 20000);
  const auto b = delta_geometric(19, 2, 2, 40000);
  CHECK(std::fabs(a.value - b.value) <= a.tail_bound);
  CHECK(b.tail_bound < a.tail_bound);
}

TEST_CASE("B(Y): direct and Poisson forms agree") {
  BsumOptions o;
  o.c_max = 300;
  for (int s : {0, 1}) {
    const auto d = B_sum(11, s, 8.0, Mode::direct, o);
    const auto p = B_sum(11, s, 8.0, Mode::poisson, o);
    CHECK(std::fabs(d.value - p.value) <= 1e-6 + p.truncation_certificate());
    CHECK(std::fabs(d.value - p.value) < 1e-12);
    CHECK(p.l_tail < 1e-9);
    CHECK(d.c_tail == p.c_tail);
  }
  o.ibp_order = 1;
  CHECK_THROWS_AS(B_sum(11, 0, 8.0, Mode::poisson, o), CertificateError);
}

TEST_CASE("A_s: both routes and the m = 1 gate") {
  const auto S = spectral(17);
  for (int s : {0, 1}) {
    const auto A = A_sum(17, s, 10000);
    CHECK(std::fabs(A.value - A.B_first) <= A.m_tail);
    CHECK(std::fabs(A.value - A_spectral(17, S.values, s)) <= A.c_tail);
    CHECK(std::fabs(A.value - A_spectral(17, S.values, s)) < 1e-6);
  }
}

TEST_CASE("level average and the unfolded constant") {
  const auto S = spectral(37);
  const auto avg = estimate_cZ(37, S.values);
  CHECK(avg.genus == 2);
  double sum = 0.0;
  for (const auto& v : S.values) sum += v.logderiv_afe;
  const double z = lfun::two_zeta_logderiv_2();
  CHECK(avg.deviation == doctest::Approx(sum / 2 - z));
  const double identity = avg.volume * 2 * avg.C_F - sum -
                          2 * (-z + 1 - std::log(4 * pi) + std::log(37.0) / 38.0);
  CHECK(std::fabs(identity) < 1e-12);
  CHECK(std::isnan(estimate_cZ(13, {}).mean_logderiv));
}
