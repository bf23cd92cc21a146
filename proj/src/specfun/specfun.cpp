#include "selberg_edge/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace selberg_edge::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// B_2, B_4, ..., B_22.
constexpr std::array<double, 11> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,  1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0, 7.0 / 6.0,        -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0, 854513.0 / 138.0};

constexpr double kStirlingShift = 15.0;

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx log_gamma_stirling(cplx w) {
  cplx sum = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi);
  const cplx w2 = w * w;
  cplx wp = w;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double kk = static_cast<double>(k);
    sum += kBernoulli[k - 1] / (2.0 * kk * (2.0 * kk - 1.0) * wp);
    wp *= w2;
  }
  return sum;
}

cplx digamma_asymptotic(cplx w) {
  cplx sum = std::log(w) - 0.5 / w;
  const cplx w2 = w * w;
  cplx wp = w2;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    sum -= kBernoulli[k - 1] / (2.0 * static_cast<double>(k) * wp);
    wp *= w2;
  }
  return sum;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// ---------------------------------------------------------------------------
// J1

double j1_series(double x) {
  const long double h = x / 2.0L;
  const long double h2 = h * h;
  long double term = h;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::max(1.0L, std::fabs(sum))) break;
  }
  return static_cast<double>(sum);
}

double j1_miller(double x) {
  const int start = 2 * ((static_cast<int>(x) + 60) / 2);
  double next = 0.0, cur = 1e-300, j1 = 0.0, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == 1) j1 = cur;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * cur;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  return j1 / norm;
}

double j1_hankel(double x) {
  constexpr double mu = 4.0;
  double p = 0.0, q = 0.0;
  double a = 1.0;  // a_k / x^k
  for (int k = 0; k < 200; ++k) {
    const double term = a;
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    const double odd = 2.0 * k + 1.0;
    const double nexta = a * (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
    if (std::fabs(nexta) < 1e-18 || std::fabs(nexta) > std::fabs(a)) break;
    a = nexta;
  }
  const double c = std::cos(x), s = std::sin(x);
  const double cos_chi = (s - c) / std::numbers::sqrt2;
  const double sin_chi = -(s + c) / std::numbers::sqrt2;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

// ---------------------------------------------------------------------------
// Zeta, real and complex Euler-Maclaurin.

cplx zeta_em(cplx s, int M) {
  cplx sum = 0.0;
  for (int n = M - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double logM = std::log(static_cast<double>(M));
  const cplx Ms = std::exp(-s * logM);
  sum += Ms * static_cast<double>(M) / (s - 1.0) + 0.5 * Ms;
  cplx poch = s;  // s (s + 1) ... (s + 2k - 2)
  cplx Mpow = Ms / static_cast<double>(M);
  for (int k = 1; k <= 8; ++k) {
    sum += kBernoulli[k - 1] / factorial(2 * k) * poch * Mpow;
    poch *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    Mpow /= static_cast<double>(M) * M;
  }
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------

cplx gamma_complex(cplx z) {
  if (is_pole(z)) throw SpecfunError("gamma_complex: pole at " + std::to_string(z.real()));
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
  cplx prod = 1.0;
  cplx w = z;
  while (w.real() < kStirlingShift) {
    prod *= w;
    w += 1.0;
  }
  return std::exp(log_gamma_stirling(w)) / prod;
}

cplx digamma_complex(cplx z) {
  if (is_pole(z)) throw SpecfunError("digamma_complex: pole at " + std::to_string(z.real()));
  if (z.real() < 0.5) return digamma_complex(1.0 - z) - kPi / std::tan(kPi * z);
  cplx shift = 0.0;
  cplx w = z;
  while (w.real() < kStirlingShift) {
    shift += 1.0 / w;
    w += 1.0;
  }
  return digamma_asymptotic(w) - shift;
}

cplx gamma_R(cplx s) {
  return std::exp(-0.5 * s * std::log(kPi)) * gamma_complex(0.5 * s);
}

GammaFactor gamma_factor(cplx s) {
  const cplx a = gamma_R(s + 1.0);
  const cplx b = gamma_R(s + 2.0);
  GammaFactor g;
  g.s = s;
  g.value = a * a * b;
  g.logderiv = -1.5 * std::log(kPi) + digamma_complex(0.5 * (s + 1.0)) + 0.5 * digamma_complex(0.5 * (s + 2.0));
  return g;
}

double bessel_j1(double x) {
  if (x < 0.0 || std::isnan(x)) throw SpecfunError("bessel_j1: x must be nonnegative");
  if (x <= 12.0) return j1_series(x);
  if (x <= 40.0) return j1_miller(x);
  return j1_hankel(x);
}

ZetaValue zeta_and_deriv(double s, int terms) {
  if (!(s > 1.0)) throw SpecfunError("zeta_and_deriv: s must exceed 1");
  if (terms < 10) throw SpecfunError("zeta_and_deriv: too few terms");
  const int M = terms;
  double value = 0.0, deriv = 0.0;
  for (int n = M - 1; n >= 1; --n) {
    const double ln = std::log(static_cast<double>(n));
    const double t = std::exp(-s * ln);
    value += t;
    deriv -= ln * t;
  }
  const double logM = std::log(static_cast<double>(M));
  const double Ms = std::exp(-s * logM);
  const double tail = Ms * M / (s - 1.0);
  value += tail + 0.5 * Ms;
  deriv += tail * (-logM - 1.0 / (s - 1.0)) - 0.5 * logM * Ms;
  // Correction k: B_2k/(2k)! * P_k(s) * M^{1 - s - 2k}, P_k = s (s+1) ... (s+2k-2).
  double poch = s, dpoch = 1.0;
  double Mpow = Ms / M;
  for (int k = 1; k <= 8; ++k) {
    const double coef = kBernoulli[k - 1] / factorial(2 * k);
    value += coef * poch * Mpow;
    deriv += coef * (dpoch - poch * logM) * Mpow;
    for (double a : {2.0 * k - 1.0, 2.0 * k}) {
      dpoch = dpoch * (s + a) + poch;
      poch *= s + a;
    }
    Mpow /= static_cast<double>(M) * M;
  }
  return {value, deriv};
}

ZetaValue zeta_N(double s, std::int64_t N, int terms) {
  const auto z = zeta_and_deriv(s, terms);
  const double lnN = std::log(static_cast<double>(N));
  const double f = 1.0 - std::exp(-s * lnN);
  const double df = lnN * std::exp(-s * lnN);
  return {f * z.value, f * z.deriv + df * z.value};
}

cplx zeta_complex(cplx z) {
  if (!(z.real() > 1.0)) throw SpecfunError("zeta_complex: Re z must exceed 1");
  const int M = 20 + static_cast<int>(2.0 * std::abs(z));
  return zeta_em(z, M);
}

// ---------------------------------------------------------------------------
// Cutoff functions

cplx GFamily::operator()(cplx u) const {
  return std::exp(kappa * u * u) / (order == 1 ? u : u * u);
}

CutoffFunction::CutoffFunction(double s, CutoffConfig cfg) : s_(s), cfg_(cfg) {
  if (!(s > -1.0)) throw SpecfunError("CutoffFunction: s must exceed -1");
  if (cfg_.G.order != 1 && cfg_.G.order != 2) throw SpecfunError("CutoffFunction: G order must be 1 or 2");
  if (!(cfg_.G.kappa > 0.0)) throw SpecfunError("CutoffFunction: kappa must be positive");
  if (!(cfg_.step > 0.0) || !(cfg_.tail_tol > 0.0)) throw SpecfunError("CutoffFunction: bad quadrature parameters");
  if (!(cfg_.sigma0 > 0.0)) throw SpecfunError("CutoffFunction: sigma0 must be positive");
  right_ = make_line(cfg_.sigma0, 1.0);
  left_ = make_line(-0.5 * (1.0 + s_), 1.0);
  // log of int |gamma(s + u) G(u)| |du| / (2 pi) on Re u = sigma, trapezoid in t.
  for (double sigma = 0.5; sigma <= 40.0; sigma += 0.5) {
    constexpr double dt = 0.1;
    double acc = 0.0, first = 0.0;
    for (int j = 0;; ++j) {
      const cplx u(sigma, j * dt);
      const double v = std::abs(gamma_factor(s_ + u).value * cfg_.G(u));
      if (j == 0) first = v;
      acc += (j == 0 ? 0.5 : 1.0) * v;
      if (v < 1e-22 * first || j > 20000) break;
    }
    bound_sigma_.push_back(sigma);
    bound_log_.push_back(std::log(2.0 * acc * dt / (2.0 * kPi)));
  }
}

double CutoffFunction::tail_bound(double sigma, double height, double y) const {
  // |gamma(s + u)| <= gamma(s + sigma), |G| <= e^{kappa sigma^2} e^{-kappa t^2} / t^order.
  const double k = cfg_.G.kappa;
  const double gam = gamma_factor(cplx(s_ + sigma, 0.0)).value.real();
  return std::pow(y, -sigma) * gam * std::exp(k * sigma * sigma) * std::exp(-k * height * height) /
         (kPi * 2.0 * k * std::pow(height, cfg_.G.order + 1));
}

CutoffFunction::Line CutoffFunction::make_line(double sigma, double y_scale) const {
  const double pole_gap = std::min(std::fabs(sigma), std::fabs(sigma + 1.0 + s_));
  if (pole_gap < 1e-3 && sigma <= 0.0) throw SpecfunError("CutoffFunction: contour passes through a pole");
  if (sigma <= -1.0 - s_) throw SpecfunError("CutoffFunction: contour left of the first gamma pole");
  Line line;
  line.sigma = sigma;
  double T = 2.0;
  while (tail_bound(sigma, T, y_scale) > cfg_.tail_tol) T += 0.5;
  line.height = T;
  const int J = static_cast<int>(std::ceil(T / cfg_.step));
  // Even J keeps the half-resolution rule on the same endpoints.
  const int Je = J + (J % 2);
  line.height = Je * cfg_.step;
  for (int j = -Je; j <= Je; ++j) {
    const double t = j * cfg_.step;
    const cplx u(sigma, t);
    line.t.push_back(t);
    line.f.push_back(gamma_factor(static_cast<double>(s_) + u).value * cfg_.G(u));
  }
  return line;
}

cplx CutoffFunction::integrate(const Line& line, double log_y, bool half_step, double* imag_out) const {
  const int stride = half_step ? 2 : 1;
  const std::size_t mid = line.t.size() / 2;
  // y^{-u} advanced by a rotation per node, resynchronised every 32 nodes.
  const double amp = std::exp(-line.sigma * log_y);
  const double dt = stride * cfg_.step;
  const cplx rot = std::polar(1.0, -dt * log_y);
  cplx sum = 0.0;
  std::size_t j = mid % stride;
  cplx phase = std::polar(amp, -line.t[j] * log_y);
  for (int n = 0; j < line.t.size(); j += stride, ++n) {
    if (n % 32 == 0) phase = std::polar(amp, -line.t[j] * log_y);
    sum += phase * line.f[j];
    phase *= rot;
  }
  const cplx v = sum * (stride * cfg_.step / (2.0 * kPi));
  if (imag_out) *imag_out = v.imag();
  return v;
}

ContourValue CutoffFunction::raw(double y, double sigma) const {
  if (!(y > 0.0)) throw SpecfunError("CutoffFunction: y must be positive");
  const double y_scale = sigma > 0 ? std::min(1.0, y) : std::max(1.0, y);
  const bool reuse_right = sigma == right_.sigma && y >= 1.0;
  const bool reuse_left = sigma == left_.sigma && y <= 1.0;
  Line tmp;
  const Line* line = nullptr;
  if (reuse_right) {
    line = &right_;
  } else if (reuse_left) {
    line = &left_;
  } else {
    tmp = make_line(sigma, y_scale);
    line = &tmp;
  }
  const double log_y = std::log(y);
  ContourValue out;
  out.value = integrate(*line, log_y, false, nullptr);
  out.discretization = std::abs(out.value - integrate(*line, log_y, true, nullptr));
  out.tail_bound = tail_bound(sigma, line->height, y);
  out.height = line->height;
  return out;
}

double CutoffFunction::residue_at_zero(double y) const {
  const auto g = gamma_factor(cplx(s_, 0.0));
  const double gamma_s = g.value.real();
  if (cfg_.G.order == 1) return gamma_s;
  return gamma_s * g.logderiv.real() - gamma_s * std::log(y);
}

double CutoffFunction::V(double y) const {
  const bool right = y >= 1.0;
  const auto c = raw(y, right ? right_.sigma : left_.sigma);
  const double scale = std::max(1.0, std::abs(c.value));
  if (c.discretization > 1e-10 * scale) {
    throw ConvergenceError("cutoff V: trapezoid rule did not settle", c.discretization);
  }
  return c.value.real() + (right ? 0.0 : residue_at_zero(y));
}

double CutoffFunction::W(double y) const { return std::pow(y, -s_) * V(y); }

double CutoffFunction::decay_bound(double y) const {
  // |V_s(y)| <= y^{-sigma} gamma(s + sigma) e^{kappa sigma^2} A(sigma), any sigma > 0.
  double best = std::numeric_limits<double>::infinity();
  const double ly = std::log(y);
  for (std::size_t i = 0; i < bound_sigma_.size(); ++i) {
    best = std::min(best, -bound_sigma_[i] * ly + bound_log_[i]);
  }
  return std::exp(best);
}

double CutoffFunction::decay_point(double tol) const {
  double lo = 1.0, hi = 2.0;
  while (decay_bound(hi) > tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw SpecfunError("CutoffFunction: no decay point found");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    (decay_bound(mid) > tol ? lo : hi) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Bump and Fourier-Bessel transform

double Bump::operator()(double t) const {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return std::exp(4.0 - 1.0 / ((t - 1.0) * (2.0 - t)));
}

std::vector<double> Bump::jet(double t, int k) const {
  std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
  if (t <= 1.0 || t >= 2.0) return out;
  // q(t + e) = q0 + q1 e - e^2, r = 1/q, h = -r, E = exp(h).
  const double q0 = (t - 1.0) * (2.0 - t);
  const double q1 = 3.0 - 2.0 * t;
  const double q2 = -1.0;
  std::vector<double> r(out.size()), h(out.size()), E(out.size());
  r[0] = 1.0 / q0;
  for (int i = 1; i <= k; ++i) {
    double acc = q1 * r[i - 1];
    if (i >= 2) acc += q2 * r[i - 2];
    r[i] = -acc / q0;
  }
  for (int i = 0; i <= k; ++i) h[i] = -r[i];
  E[0] = std::exp(4.0 + h[0]);
  for (int i = 1; i <= k; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= i; ++j) acc += j * h[j] * E[i - j];
    E[i] = acc / i;
  }
  for (int i = 0; i <= k; ++i) out[i] = E[i] * factorial(i);
  return out;
}

std::vector<double> Bump::derivative_l1(int k) const {
  constexpr int n = 40000;
  std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
  for (int j = 1; j < n; ++j) {
    const auto d = jet(1.0 + static_cast<double>(j) / n, k);
    for (int i = 0; i <= k; ++i) out[i] += std::fabs(d[i]);
  }
  for (auto& v : out) v = 1.01 * v / n;
  return out;
}

Window::Window(const std::function<double(double)>& w, int degree) {
  if (degree < 4) throw SpecfunError("Window: degree too small");
  const int n = degree + 1;
  std::vector<double> f(n), a(n, 0.0);
  for (int k = 0; k < n; ++k) f[k] = w(1.5 + 0.5 * std::cos(kPi * (k + 0.5) / n));
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += f[k] * std::cos(kPi * j * (k + 0.5) / n);
    a[j] = 2.0 * acc / n;
  }
  a[0] *= 0.5;
  interp_error_ = std::fabs(a[n - 1]) + std::fabs(a[n - 2]) + std::fabs(a[n - 3]);
  coeffs_.push_back(a);
  // Derivative series: b_{j-1} = b_{j+1} + 2 j a_j, then b_0 halved; d/dt = 2 d/dx.
  for (int order = 1; order <= 8; ++order) {
    const auto& prev = coeffs_.back();
    const int m = static_cast<int>(prev.size());
    std::vector<double> b(static_cast<std::size_t>(std::max(m - 1, 1)) + 1, 0.0);
    for (int j = m - 1; j >= 1; --j) b[j - 1] = (j + 1 < static_cast<int>(b.size()) ? b[j + 1] : 0.0) + 2.0 * j * prev[j];
    b[0] *= 0.5;
    for (auto& v : b) v *= 2.0;
    coeffs_.push_back(b);
  }
}

double Window::w_derivative(double t, int j) const {
  if (coeffs_.empty()) return j == 0 ? 1.0 : 0.0;
  const auto& a = coeffs_[j];
  // Clenshaw.
  const double x = 2.0 * t - 3.0;
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
    const double b0 = 2.0 * x * b1 - b2 + a[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + a[0];
}

double Window::operator()(double t) const {
  const double u = U_(t);
  return u == 0.0 ? 0.0 : u * w_derivative(t, 0);
}

std::vector<double> Window::jet(double t, int k) const {
  if (k > 8) throw SpecfunError("Window: derivatives above order 8 are not tabulated");
  const auto u = U_.jet(t, k);
  std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
  if (u[0] == 0.0 && t <= 1.0) return out;
  if (t >= 2.0) return out;
  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) w[j] = w_derivative(t, j);
  for (int i = 0; i <= k; ++i) {
    double binom = 1.0, acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      acc += binom * u[j] * w[i - j];
      binom = binom * (i - j) / (j + 1);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> Window::derivative_l1(int k) const {
  constexpr int n = 40000;
  std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
  for (int j = 1; j < n; ++j) {
    const auto d = jet(1.0 + static_cast<double>(j) / n, k);
    for (int i = 0; i <= k; ++i) out[i] += std::fabs(d[i]);
  }
  for (auto& v : out) v = 1.01 * v / n;
  return out;
}

BesselTransform::BesselTransform(double c, double Y, std::int64_t l_max, double tol, const Window& U)
    : c_(c), Y_(Y) {
  if (!(c > 0.0) || !(Y >= 1.0)) throw SpecfunError("BesselTransform: need c > 0 and Y >= 1");
  const double top_freq = (static_cast<double>(std::llabs(l_max)) + 2.0) * Y / c;
  int n = 64;
  while (n < 8.0 * top_freq + 64.0) n *= 2;
  for (;; n *= 2) {
    if (n > (1 << 22)) throw ConvergenceError("BesselTransform: node limit reached", discretization_);
    w_.assign(static_cast<std::size_t>(n) - 1, 0.0);
    for (int j = 1; j < n; ++j) {
      const double t = 1.0 + static_cast<double>(j) / n;
      w_[j - 1] = (Y / c) / n * U(t) * bessel_j1(4.0 * kPi * Y * t / c);
    }
    discretization_ = 0.0;
    for (std::int64_t l : {std::int64_t{0}, l_max, -l_max}) {
      discretization_ = std::max(discretization_, std::abs(sum(l, 1) - sum(l, 2)));
    }
    if (discretization_ <= tol) break;
  }
}

cplx BesselTransform::sum(std::int64_t l, int stride) const {
  // Node j sits at t = 1 + (j + 1)/n; the stride-2 rule keeps odd j (even
  // multiples of 1/n) with doubled weight.
  const std::size_t n = w_.size() + 1;
  const double freq = -2.0 * kPi * static_cast<double>(l) * Y_ / c_;
  const double dt = 1.0 / static_cast<double>(n);
  cplx acc = 0.0;
  const cplx rot = std::polar(1.0, freq * dt * stride);
  cplx z;
  const std::size_t first = stride == 1 ? 0 : 1;
  std::size_t count = 0;
  for (std::size_t j = first; j < w_.size(); j += stride, ++count) {
    if (count % 128 == 0) z = std::polar(1.0, freq * (1.0 + static_cast<double>(j + 1) * dt));
    acc += w_[j] * z;
    z *= rot;
  }
  return acc * static_cast<double>(stride);
}

cplx BesselTransform::operator()(std::int64_t l) const { return sum(l, 1); }

double BesselTransform::ibp_constant(double c, double Y, int i, const std::vector<double>& phi_l1) {
  if (i < 0 || static_cast<std::size_t>(i) >= phi_l1.size()) {
    throw SpecfunError("ibp_constant: derivative norms missing for the requested order");
  }
  double total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= i; ++j) {
    total += binom * std::pow(2.0, i - j) * std::pow(c / (2.0 * kPi * Y), j) * phi_l1[j];
    binom = binom * (i - j) / (j + 1);
  }
  return (Y / c) * total;
}

cplx transform_g(std::int64_t l, double c, double Y, double tol) {
  return BesselTransform(c, Y, std::llabs(l), tol)(l);
}

}  // namespace selberg_edge::specfun
