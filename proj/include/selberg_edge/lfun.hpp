#pragma once

// L(s, Sym^2 f) near the edge s = 1 for weight-2 newforms of prime level N.
//
// Lambda(s) = N^s gamma(s) L(s, Sym^2 f) = Lambda(1 - s) and
// L(s, Sym^2 f) = sum_k b_k k^{-s}, b_k = sum_{m^2 n = k, (m, N) = 1} lambda_f(n^2).
// Every quantity here is a finite k-sum against tabulated cutoff kernels
// (N/k)^s V_s(k/N); the tables depend on the level only and are shared by
// all forms. Truncation points come from the decay bound of V_s together
// with |b_k| <= sum_{m^2 n = k} tau(n^2) <= tau(k)^2 <= 4k.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "selberg_edge/hecke.hpp"
#include "selberg_edge/specfun.hpp"

namespace selberg_edge::lfun {

class LfunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The eigenvalue table does not reach the primes a sum needs.
class TableTooShort : public LfunError {
 public:
  TableTooShort(const std::string& what, std::int64_t needed) : LfunError(what), needed_(needed) {}
  std::int64_t needed_prime_bound() const { return needed_; }

 private:
  std::int64_t needed_;
};

struct AfeConfig {
  double kappa = 0.05;        // G(u) = exp(kappa u^2) / u^2
  double step = 0.05;         // trapezoid step of every vertical contour
  double tail_tol = 1e-12;    // certified bound on each discarded k-tail
  double length_scale = 1.0;  // multiplies every truncation point
  double oracle_h = 1e-3;     // oracle step; Richardson with h/2
  bool oracle = true;         // build the kernels of the differentiation oracle
};

/// A tabulated kernel q[k] = (N/k)^s V_s(k/N), k = 1..K, with its tail bound.
struct Kernel {
  double s = 0.0;
  int order = 2;
  std::vector<double> q;  // q[0] unused
  double tail = 0.0;      // bound on sum_{k > K} 4k |q_k|
};

/// Level data shared by all forms of level N.
class LevelKernels {
 public:
  LevelKernels(std::int64_t N, AfeConfig cfg = {});

  std::int64_t N() const { return N_; }
  const AfeConfig& config() const { return cfg_; }
  /// Largest k used by any kernel; eigenvalues are needed for primes up to it.
  std::int64_t length() const { return K_; }

  const Kernel& edge(int s) const { return s == 0 ? edge0_ : edge1_; }   // double pole
  const Kernel& plain(int s) const { return s == 0 ? plain0_ : plain1_; }  // simple pole
  /// Simple-pole kernels at 1 + h, -h, 1 - h, h for h = oracle_h / 2^j, j = 0, 1.
  const std::vector<Kernel>& oracle() const { return oracle_; }

  /// Z(s) = int_{(1)} N^{s+u} zeta^{(N)}(2s + 2u) gamma(s + u) G(u) du / (2 pi i).
  double Z(int s) const { return s == 0 ? Z0_ : Z1_; }
  double Z_error() const { return Z_err_; }

  double gamma1() const { return gamma1_; }
  double gamma1_logderiv() const { return gamma1_ld_; }

 private:
  Kernel build(const specfun::CutoffFunction& V, std::int64_t K) const;
  std::int64_t truncation(const specfun::CutoffFunction& V) const;
  double contour_Z(int s, double* err) const;

  std::int64_t N_;
  AfeConfig cfg_;
  std::int64_t K_ = 0;
  Kernel edge0_, edge1_, plain0_, plain1_;
  std::vector<Kernel> oracle_;
  double Z0_ = 0.0, Z1_ = 0.0, Z_err_ = 0.0;
  double gamma1_ = 0.0, gamma1_ld_ = 0.0;
};

/// Tail bound of sum_{k > K} 4k (N/k)^s |V_s(k/N)| from the decay bound.
double kernel_tail(const specfun::CutoffFunction& V, std::int64_t N, std::int64_t K);

/// b_k for k = 1..K, and the same with the n = 1 terms (k = m^2) removed.
struct Coefficients {
  std::vector<double> b;
  std::vector<double> b_star;
};
Coefficients sym2_coefficients(const hecke::EigenSystem& sys, std::int64_t K);

struct Sym2Value {
  std::int64_t level = 0;
  int form = 0;
  double L1 = 0.0;
  double I_star_0 = 0.0;
  double I_star_1 = 0.0;
  double rho_N = 0.0;            // exact minus asymptotic assembly, times L1 / zeta(2)
  double logderiv_afe = 0.0;     // exact-remainder assembly
  double logderiv_asymptotic = 0.0;   // remainder dropped
  double logderiv_oracle = 0.0;  // NaN when the oracle kernels were not built
  double oracle_gap = 0.0;       // |D(h) - D(h/2)| before extrapolation
  double tail = 0.0;             // summed k-tail certificates
  double omega() const { return 1.0 / L1; }
};

/// Full evaluation of one form.
Sym2Value evaluate(const hecke::EigenSystem& sys, const LevelKernels& kernels);

/// L(1, Sym^2 f) from Lambda(1) = J(1) + J(0) with the simple-pole kernel.
double sym2_L1(const hecke::EigenSystem& sys, const LevelKernels& kernels);

/// (1/N) sum_{(m,N)=1} sum_{n>=2} lambda(n^2) (N/m^2 n)^s V_s(m^2 n / N).
double I_star(const hecke::EigenSystem& sys, const LevelKernels& kernels, int s);

/// Exact and asymptotic assemblies of L'/L(1, Sym^2 f).
double logderiv_afe(const hecke::EigenSystem& sys, const LevelKernels& kernels);
double logderiv_asymptotic(const hecke::EigenSystem& sys, const LevelKernels& kernels);

/// Centered difference of log Lambda at 1 +- h and 1 +- h/2, Richardson
/// extrapolated. Throws when the two steps disagree by more than 1e-5.
double logderiv_oracle(const hecke::EigenSystem& sys, const LevelKernels& kernels);

/// (1/g) sum_f omega_f with omega_f = 1 / L(1, Sym^2 f); NaN for g = 0.
double omega_average(const std::vector<hecke::EigenSystem>& systems, const LevelKernels& kernels);

/// 2 zeta'/zeta(2).
double two_zeta_logderiv_2();

}  // namespace selberg_edge::lfun
