#pragma once

// Hecke eigenvalues of weight-2 newforms of prime level N from modular
// symbols, plus a CSV reader/writer for eigenvalue tables.
//
// The symbol space is the plus quotient of the Manin symbols (c : d) on
// P^1(Z/N) modulo the two- and three-term relations; its cuspidal part has
// dimension equal to the genus of X_0(N). Linear algebra over Q is exact
// until the Hecke matrices are handed to a floating eigen-solver.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

namespace selberg_edge::hecke {

using Rational = boost::multiprecision::cpp_rational;

class HeckeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed or inconsistent eigenvalue table; row is 1-based (header = 1).
class IngestError : public HeckeError {
 public:
  IngestError(const std::string& what, std::int64_t row) : HeckeError(what), row_(row) {}
  std::int64_t row() const { return row_; }

 private:
  std::int64_t row_;
};

struct Level {
  std::int64_t N = 0;
  int genus = 0;
  std::int64_t index = 0;  // [SL2(Z) : Gamma0(N)] = N + 1
};

/// Genus of X_0(N) for N prime from the standard formula.
int genus_prime_level(std::int64_t N);
Level make_level(std::int64_t N);

struct IntMatrix2 {
  std::int64_t a, b, c, d;
};

/// Cremona's Heilbronn matrices of determinant p (p prime).
std::vector<IntMatrix2> heilbronn_cremona(std::int64_t p);
/// Merel's set of determinant n, used for U_N.
std::vector<IntMatrix2> heilbronn_merel(std::int64_t n);

class ManinSpace {
 public:
  explicit ManinSpace(std::int64_t N);

  const Level& level() const { return level_; }
  std::int64_t N() const { return level_.N; }
  /// Dimension of the plus quotient (cuspidal part plus Eisenstein line).
  int dimension() const { return static_cast<int>(free_.size()); }
  int cuspidal_dimension() const { return static_cast<int>(cusp_basis_.size()); }

  /// P^1(Z/N) index: (c : d) with c a unit is (1 : d/c) -> d/c; (0 : 1) -> N.
  /// Returns -1 when c = d = 0 mod N.
  std::int64_t symbol_index(std::int64_t c, std::int64_t d) const;

  /// Coordinates of the class of a symbol in the quotient basis.
  const std::vector<Rational>& coordinates(std::int64_t symbol) const { return coords_[symbol]; }

  /// Boundary of a symbol: coefficients of the cusps (infinity, 0).
  std::pair<int, int> boundary(std::int64_t symbol) const;

  /// Basis of the cuspidal subspace, each vector in quotient coordinates.
  const std::vector<std::vector<Rational>>& cuspidal_basis() const { return cusp_basis_; }

  /// Exact matrix on the cuspidal subspace of sum_h (x |-> x h) over `mats`.
  std::vector<std::vector<Rational>> operator_matrix(const std::vector<IntMatrix2>& mats) const;

 private:
  Level level_;
  std::vector<std::int64_t> rep_;            // representative symbol of each free generator
  std::vector<std::int64_t> free_;           // generator ids forming the quotient basis
  std::vector<std::vector<Rational>> coords_;
  std::vector<std::vector<Rational>> cusp_basis_;
  std::vector<int> cusp_read_;  // coordinates that read off a cuspidal vector
};

/// T_p on the cuspidal plus space, p prime not dividing N.
Eigen::MatrixXd hecke_matrix(const ManinSpace& space, std::int64_t p);
std::vector<std::vector<Rational>> hecke_matrix_exact(const ManinSpace& space, std::int64_t p);
/// U_N on the cuspidal plus space (Merel's set with non-invertible terms dropped).
Eigen::MatrixXd atkin_lehner_matrix(const ManinSpace& space);

enum class Source { computed, ingested };

struct EigenSystem {
  Level level;
  int form = 0;
  std::map<std::int64_t, double> ap;  // arithmetic normalization, primes only
  Source source = Source::computed;

  /// lambda_f(p) = a_f(p) / sqrt(p); throws naming a missing prime.
  double lambda_p(std::int64_t p) const;
  std::int64_t max_prime() const { return ap.empty() ? 0 : ap.rbegin()->first; }
};

/// lambda_f(n) through the Hecke relations.
double lambda_at(const EigenSystem& sys, std::int64_t n);

/// lambda_f(n) for every n in [1, n_max] from one sieve pass.
std::vector<double> lambda_table(const EigenSystem& sys, std::int64_t n_max);

struct EigenOptions {
  std::uint64_t seed = 20240607;
  int retries = 5;
  double residual_tol = 1e-8;
};

/// Simultaneous eigenvectors of T_p for p <= p_max (p != N) and of U_N,
/// ordered by lambda(2) ascending, ties by lambda(3), lambda(5), ...
std::vector<EigenSystem> eigen_systems(const ManinSpace& space, std::int64_t p_max,
                                       const EigenOptions& opts = {});

/// Checks the invariants of a single system (Deligne bound, a_N = +-1).
void validate_system(const EigenSystem& sys, double ap_slack = 1e-6);

/// Reads `level,form,p,ap` rows. `levels` restricts which levels are kept;
/// empty means all. Every kept level must have exactly genus(N) forms.
std::map<std::int64_t, std::vector<EigenSystem>> ingest_eigen_table(
    const std::filesystem::path& path, const std::vector<std::int64_t>& levels = {});

/// Writes the same format with round-trip precision.
void write_eigen_table(const std::filesystem::path& path, const std::vector<EigenSystem>& systems);
std::string format_eigen_table(const std::vector<EigenSystem>& systems);

/// Per-level CSV cache (eigen_N.csv), written through a temporary file and a
/// rename. The directory is SELBERG_EDGE_CACHE when set.
class EigenCache {
 public:
  explicit EigenCache(std::filesystem::path dir);
  static std::filesystem::path default_dir();

  std::filesystem::path path_for(std::int64_t N) const;
  /// Cached systems covering primes up to p_max, if present.
  std::optional<std::vector<EigenSystem>> load(std::int64_t N, std::int64_t p_max) const;
  void store(std::int64_t N, const std::vector<EigenSystem>& systems) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace selberg_edge::hecke
