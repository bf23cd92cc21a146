#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "selberg_edge/specfun.hpp"

using namespace selberg_edge::specfun;

namespace {

constexpr double pi = std::numbers::pi;

double boost_j1(double x) { return boost::math::cyl_bessel_j(1, x); }

// gamma(s) on the real axis from Boost's Gamma.
double real_gamma_factor(double s) {
  auto GR = [](double z) { return std::pow(pi, -z / 2) * boost::math::tgamma(z / 2); };
  return GR(s + 1) * GR(s + 1) * GR(s + 2);
}

// Composite Simpson for int_1^2 e(-l Y t / c) phi(t) J1(4 pi Y t / c) (Y / c) dt.
std::complex<double> simpson_g(std::int64_t l, double c, double Y, const Window& phi, int n) {
  std::complex<double> acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double t = 1.0 + static_cast<double>(j) / n;
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * std::polar(1.0, -2 * pi * l * Y * t / c) * phi(t) * boost_j1(4 * pi * Y * t / c);
  }
  return acc * (Y / c) / (3.0 * n);
}

}  // namespace

TEST_CASE("J1 against Boost across all three regimes") {
  double worst = 0.0;
  for (double x = 0.0; x < 200.0; x += 0.0137) {
    worst = std::max(worst, std::fabs(bessel_j1(x) - boost_j1(x)));
  }
  CHECK(worst < 1e-12);
  CHECK(bessel_j1(0.0) == 0.0);
  for (double x : {1e-8, 1e-4, 11.99, 12.01, 39.99, 40.01, 1e3, 1e5}) {
    CHECK(bessel_j1(x) == doctest::Approx(boost_j1(x)).epsilon(1e-11));
  }
}

TEST_CASE("complex Gamma") {
  for (double x : {0.3, 1.0, 2.5, 7.25, -0.5, -2.7}) {
    CHECK(gamma_complex(x).real() == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-13));
    CHECK(std::abs(gamma_complex(x).imag()) < 1e-15);
  }
  // |Gamma(1/2 + it)|^2 = pi / cosh(pi t).
  for (double t : {0.5, 3.0, 12.0}) {
    const double m = std::norm(gamma_complex(cplx(0.5, t)));
    CHECK(m == doctest::Approx(pi / std::cosh(pi * t)).epsilon(1e-12));
  }
  // Recurrence Gamma(z + 1) = z Gamma(z) off the axis.
  const cplx z(1.3, 4.2);
  CHECK(std::abs(gamma_complex(z + 1.0) - z * gamma_complex(z)) < 1e-13 * std::abs(gamma_complex(z + 1.0)));
  CHECK(digamma_complex(1.0).real() == doctest::Approx(-kEulerGamma).epsilon(1e-13));
  CHECK(digamma_complex(3.7).real() == doctest::Approx(boost::math::digamma(3.7)).epsilon(1e-13));
}

TEST_CASE("gamma factor") {
  const auto g1 = gamma_factor(1.0);
  CHECK(std::fabs(g1.value.real() - 1.0 / (2 * pi * pi * pi)) < 1e-12);
  for (double s : {0.0, 0.5, 1.0, 2.3}) {
    CHECK(gamma_factor(s).value.real() == doctest::Approx(real_gamma_factor(s)).epsilon(1e-13));
    const double h = 1e-5;
    const double fd = (std::log(real_gamma_factor(s + h)) - std::log(real_gamma_factor(s - h))) / (2 * h);
    CHECK(gamma_factor(s).logderiv.real() == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("zeta and zeta'") {
  const auto z2 = zeta_and_deriv(2.0);
  CHECK(z2.value == doctest::Approx(pi * pi / 6).epsilon(1e-14));
  CHECK(z2.deriv == doctest::Approx(-0.93754825431584375370).epsilon(1e-13));
  const double r1 = 2 * z2.deriv / z2.value;
  const auto z2b = zeta_and_deriv(2.0, 20000);
  CHECK(std::fabs(r1 - 2 * z2b.deriv / z2b.value) < 1e-10);
  CHECK(r1 == doctest::Approx(-1.1399219861890656).epsilon(1e-12));
  for (double s : {1.5, 3.0, 6.5}) {
    CHECK(zeta_and_deriv(s).value == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
  }
  const auto zN = zeta_N(2.0, 11);
  CHECK(zN.value == doctest::Approx((1 - 1.0 / 121) * pi * pi / 6).epsilon(1e-14));
}

TEST_CASE("complex zeta") {
  CHECK(std::abs(zeta_complex(2.0) - pi * pi / 6) < 1e-13);
  // Dirichlet series with an Euler-Maclaurin end correction.
  for (const cplx z : {cplx(2.0, 3.0), cplx(4.0, 25.0), cplx(2.5, -40.0)}) {
    const int M = 200000;
    cplx s = 0.0;
    for (int n = 1; n < M; ++n) s += std::exp(-z * std::log(static_cast<double>(n)));
    const cplx lm = std::log(static_cast<double>(M));
    s += std::exp((1.0 - z) * lm) / (z - 1.0) + 0.5 * std::exp(-z * lm) + z / 12.0 * std::exp((-z - 1.0) * lm);
    CHECK(std::abs(zeta_complex(z) - s) < 1e-11);
  }
}

TEST_CASE("V_s small-y law") {
  for (int s : {0, 1}) {
    const CutoffFunction V(s);
    const auto g = gamma_factor(static_cast<double>(s));
    double C = 0.0;
    for (double y = 1e-4; y <= 0.1; y *= 1.3) {
      const double main = g.value.real() * g.logderiv.real() - g.value.real() * std::log(y);
      C = std::max(C, std::fabs(V.V(y) - main) / std::sqrt(y));
    }
    // Fitted constant; the next pole sits at u = -1 - s so E(y) is O(y log^2 y).
    CHECK(C < 5.0);
  }
  const CutoffFunction V1(1.0);
  const auto g1 = gamma_factor(1.0);
  const double y = 1e-3;
  const double main = g1.value.real() * g1.logderiv.real() - g1.value.real() * std::log(y);
  CHECK(std::fabs(V1.V(y) - main) <= 1e-2 * g1.value.real());
}

TEST_CASE("V_s is independent of the contour abscissa") {
  for (int s : {0, 1}) {
    const CutoffFunction V(s);
    for (double y : {0.3, 1.0, 2.0, 7.5}) {
      const double a = V.raw(y, 1.0).value.real();
      const double b = V.raw(y, 3.0).value.real();
      const double c = V.raw(y, 5.5).value.real();
      CHECK(std::fabs(a - b) < 1e-10);
      CHECK(std::fabs(c - b) < 1e-10);
      // Across the pole at 0.
      const double left = V.raw(y, -0.5 * (1 + s)).value.real() + V.residue_at_zero(y);
      CHECK(std::fabs(left - b) < 1e-10);
    }
  }
}

TEST_CASE("V_s, W_s and the decay bound") {
  for (int s : {0, 1}) {
    const CutoffFunction V(s);
    for (double y : {0.5, 2.0, 9.0, 20.0}) {
      CHECK(V.W(y) == doctest::Approx(std::pow(y, -s) * V.V(y)).epsilon(1e-14));
      CHECK(std::fabs(V.V(y)) <= V.decay_bound(y));
    }
    const double y0 = V.decay_point(1e-13);
    CHECK(V.decay_bound(y0) <= 1e-13);
    CHECK(y0 > 5.0);
    CHECK(y0 < 30.0);
  }
  // The simple-pole kernel near y = 0 tends to gamma(s).
  CutoffConfig cfg;
  cfg.G.order = 1;
  const CutoffFunction V1(0.3, cfg);
  CHECK(V1.V(1e-6) == doctest::Approx(gamma_factor(0.3).value.real()).epsilon(1e-3));
  CHECK_THROWS_AS(CutoffFunction(-1.5), SpecfunError);
}

TEST_CASE("bump and window jets") {
  const Bump U;
  CHECK(U(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(U(1.0) == 0.0);
  CHECK(U(2.0) == 0.0);
  const double h = 1e-4;
  for (double t : {1.2, 1.5, 1.77}) {
    const auto d = U.jet(t, 3);
    CHECK(d[0] == doctest::Approx(U(t)).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx((U(t + h) - U(t - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d[2] == doctest::Approx((U(t + h) - 2 * U(t) + U(t - h)) / (h * h)).epsilon(1e-5));
  }
  const Window plain;
  CHECK(plain(1.3) == doctest::Approx(U(1.3)).epsilon(1e-15));
  const Window w([](double t) { return std::exp(0.7 * t) / (1 + t * t); });
  CHECK(w.interpolation_error() < 1e-14);
  for (double t : {1.25, 1.6}) {
    const auto d = w.jet(t, 2);
    auto f = [&](double x) { return U(x) * std::exp(0.7 * x) / (1 + x * x); };
    CHECK(d[0] == doctest::Approx(f(t)).epsilon(1e-13));
    CHECK(d[1] == doctest::Approx((f(t + h) - f(t - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d[2] == doctest::Approx((f(t + h) - 2 * f(t) + f(t - h)) / (h * h)).epsilon(1e-5));
  }
  const auto m = U.derivative_l1(2);
  CHECK(m[0] == doctest::Approx(0.388).epsilon(0.01));
}

TEST_CASE("Fourier-Bessel transform against Simpson with Boost J1") {
  const Window phi;
  for (double c : {11.0, 143.0, 1001.0}) {
    for (double Y : {8.0, 32.0}) {
      const BesselTransform g(c, Y, 40);
      CHECK(g.discretization() < 1e-13);
      for (std::int64_t l : {0, 1, 2, 3, -5, 17, 40}) {
        CHECK(std::abs(g(l) - simpson_g(l, c, Y, phi, 20000)) < 1e-11);
      }
      CHECK(std::abs(g(-7) - std::conj(g(7))) < 1e-15);
    }
  }
}

TEST_CASE("integration-by-parts bound on g") {
  const Window phi;
  const auto norms = phi.derivative_l1(6);
  const double c = 77.0, Y = 8.0;
  const BesselTransform g(c, Y, 400);
  for (int i = 1; i <= 6; ++i) {
    const double K = BesselTransform::ibp_constant(c, Y, i, norms);
    for (std::int64_t l : {5, 20, 100, 400}) {
      CHECK(std::abs(g(l)) <= K * std::pow(static_cast<double>(l), -i));
    }
  }
}
