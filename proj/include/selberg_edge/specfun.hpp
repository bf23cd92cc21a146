#pragma once

// Archimedean pieces: complex Gamma and digamma, the gamma factor
// gamma(s) = Gamma_R(s + 1)^2 Gamma_R(s + 2), Bessel J1, zeta and zeta', the
// contour-integral cutoffs V_s and W_s, and the Fourier-Bessel transform
// g(l, c) against a smooth bump.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace selberg_edge::specfun {

using cplx = std::complex<double>;

class SpecfunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature that failed its own error estimate.
class ConvergenceError : public SpecfunError {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : SpecfunError(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

inline constexpr double kEulerGamma = 0.57721566490153286061;

cplx gamma_complex(cplx z);
cplx digamma_complex(cplx z);

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
cplx gamma_R(cplx s);

struct GammaFactor {
  cplx s;
  cplx value;     // gamma(s)
  cplx logderiv;  // gamma'(s) / gamma(s)
};

/// gamma'/gamma(s) = -(3/2) log pi + psi((s + 1)/2) + psi((s + 2)/2) / 2.
GammaFactor gamma_factor(cplx s);

/// J1(x) for x >= 0: power series up to 12, Miller's backward recurrence up to
/// 40, Hankel asymptotics beyond.
double bessel_j1(double x);

struct ZetaValue {
  double value;
  double deriv;
};

/// Euler-Maclaurin with `terms` explicit terms and 8 Bernoulli corrections.
ZetaValue zeta_and_deriv(double s, int terms = 10000);

/// zeta^{(N)}(s) = (1 - N^{-s}) zeta(s) and its derivative.
ZetaValue zeta_N(double s, std::int64_t N, int terms = 10000);

/// zeta(z) for Re z > 1, Euler-Maclaurin with the cutoff scaled to |z|.
cplx zeta_complex(cplx z);

/// G(u) = exp(kappa u^2) / u^order. order 2 is the even weight of the edge
/// functional equation (Laurent 1/u^2 + kappa + ...); order 1 is odd with a
/// simple pole of residue 1 and serves the plain functional equation.
struct GFamily {
  double kappa = 0.05;
  int order = 2;
  cplx operator()(cplx u) const;
};

struct CutoffConfig {
  double sigma0 = 3.0;   // right abscissa, used for y >= 1
  double step = 0.05;    // trapezoid step in Im u
  double tail_tol = 1e-13;
  GFamily G;
};

struct ContourValue {
  cplx value;
  double tail_bound;       // truncation of |Im u| > T
  double discretization;   // |trapezoid(h) - trapezoid(2h)|
  double height;           // the T used
};

/// V_s(y) = int_{(sigma)} y^{-u} gamma(s + u) G(u) du / (2 pi i), s > -1
/// (the edge functional equation uses s in {0, 1}).
///
/// For y >= 1 the line Re u = sigma0 is used. For y < 1 the contour sits
/// at Re u = -(1 + s)/2, between the pole of G at 0 and the first pole of
/// gamma(s + u), and the residue at 0 is added back: gamma'(s) - gamma(s) log y
/// for the double pole, gamma(s) for the simple one.
class CutoffFunction {
 public:
  CutoffFunction(double s, CutoffConfig cfg = {});

  double s() const { return s_; }
  const CutoffConfig& config() const { return cfg_; }

  double V(double y) const;
  /// W_s(y) = y^{-s} V_s(y).
  double W(double y) const;

  /// Raw integral on Re u = sigma with its certificates, no residues added.
  /// sigma must avoid the poles 0, -1 - s, -2 - s, ...
  ContourValue raw(double y, double sigma) const;

  /// Residue at u = 0.
  double residue_at_zero(double y) const;

  /// min over sigma in [1/2, 40] of y^{-sigma} int |gamma(s + u) G(u)| |du| / (2 pi)
  /// on Re u = sigma (integral tabulated once); bounds |V_s(y)|, decreasing in y.
  double decay_bound(double y) const;

  /// Smallest y with decay_bound(y) <= tol, to bisection accuracy.
  double decay_point(double tol) const;

 private:
  struct Line {
    double sigma = 0.0;
    double height = 0.0;
    std::vector<double> t;
    std::vector<cplx> f;  // gamma(s + u) G(u) at the nodes, |t| <= height
  };
  Line make_line(double sigma, double y_scale) const;
  cplx integrate(const Line& line, double log_y, bool half_step, double* imag_out) const;
  double tail_bound(double sigma, double height, double y) const;

  double s_;
  CutoffConfig cfg_;
  Line right_;
  Line left_;
  std::vector<double> bound_sigma_, bound_log_;  // decay_bound grid
};

/// U(t) = e^4 exp(-1 / ((t - 1)(2 - t))) on (1, 2), zero elsewhere; U(3/2) = 1.
struct Bump {
  double operator()(double t) const;
  /// Derivatives U(t), U'(t), ..., U^{(k)}(t) from Taylor jets.
  std::vector<double> jet(double t, int k) const;
  /// int |U^{(j)}(t)| dt for j = 0..k (fine trapezoid, inflated by 1%).
  std::vector<double> derivative_l1(int k) const;
};

/// phi(t) = U(t) w(t) on (1, 2) with w smooth on [1, 2], held as a Chebyshev
/// interpolant. The default window is the bump itself (w = 1).
class Window {
 public:
  Window() = default;
  Window(const std::function<double(double)>& w, int degree = 48);

  double operator()(double t) const;
  /// phi, phi', ..., phi^{(k)} at t (Leibniz on the bump jet), k <= 8.
  std::vector<double> jet(double t, int k) const;
  /// int |phi^{(j)}(t)| dt for j = 0..k (fine trapezoid, inflated by 1%).
  std::vector<double> derivative_l1(int k) const;
  /// Size of the last Chebyshev coefficients of w.
  double interpolation_error() const { return interp_error_; }

 private:
  double w_derivative(double t, int j) const;

  Bump U_;
  std::vector<std::vector<double>> coeffs_;  // coeffs_[j]: series of w^{(j)} in x = 2t - 3
  double interp_error_ = 0.0;
};

/// g(l, c) = int e(-l x / c) phi(x / Y) J1(4 pi x / c) dx / c for all |l| <= l_max
/// at one modulus c. Nodes and Bessel values are shared across l; the rule is
/// the trapezoid on (1, 2), refined by doubling until the highest frequency
/// agrees with the half-resolution rule to `tol` (absolute).
class BesselTransform {
 public:
  BesselTransform(double c, double Y, std::int64_t l_max, double tol = 1e-13,
                  const Window& phi = {});

  cplx operator()(std::int64_t l) const;
  double discretization() const { return discretization_; }
  int nodes() const { return static_cast<int>(w_.size()); }

  /// |g(l, c)| <= K_i |l|^{-i} for l != 0 by i integrations by parts.
  /// phi_l1[j] = int |phi^{(j)}|.
  static double ibp_constant(double c, double Y, int i, const std::vector<double>& phi_l1);

 private:
  cplx sum(std::int64_t l, int stride) const;

  double c_, Y_;
  std::vector<double> w_;  // (Y/c) (1/n) U(t_j) J1(4 pi Y t_j / c)
  double discretization_ = 0.0;
};

/// Single evaluation of g(l, c), same rule as BesselTransform.
cplx transform_g(std::int64_t l, double c, double Y, double tol = 1e-13);

}  // namespace selberg_edge::specfun
