#include "selberg_edge/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "selberg_edge/arith.hpp"

namespace selberg_edge::hecke {

namespace {

using RatRow = std::vector<Rational>;

// Signed union-find: value(i) = sign(i) * value(parent(i)).
class SignedUnionFind {
 public:
  explicit SignedUnionFind(std::size_t n) : parent_(n), sign_(n, 1), zero_(n, false) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  std::pair<std::size_t, int> find(std::size_t i) {
    int s = 1;
    std::size_t r = i;
    while (parent_[r] != r) {
      s *= sign_[r];
      r = parent_[r];
    }
    // Path compression keeps the accumulated sign.
    std::size_t cur = i;
    int cs = s;
    while (parent_[cur] != cur) {
      const std::size_t next = parent_[cur];
      const int ns = cs * sign_[cur];
      parent_[cur] = r;
      sign_[cur] = cs;
      cur = next;
      cs = ns;
    }
    return {r, s};
  }

  // Impose value(i) = s * value(j).
  void relate(std::size_t i, std::size_t j, int s) {
    auto [ri, si] = find(i);
    auto [rj, sj] = find(j);
    if (ri == rj) {
      if (si != s * sj) zero_[ri] = true;
      return;
    }
    parent_[ri] = rj;
    sign_[ri] = si * s * sj;
    if (zero_[ri]) zero_[rj] = true;
  }

  bool is_zero_root(std::size_t r) const { return zero_[r]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> sign_;
  std::vector<bool> zero_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<RatRow>& rows, int ncols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int col = 0; col < ncols && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Rational inv = 1 / rows[r][col];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][col] == 0) continue;
      const Rational f = rows[k][col];
      for (int j = col; j < ncols; ++j) rows[k][j] -= f * rows[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Nullspace basis of an RREF matrix: one vector per non-pivot column.
std::vector<RatRow> nullspace(const std::vector<RatRow>& rows, const std::vector<int>& pivots, int ncols,
                              std::vector<int>* free_cols) {
  std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RatRow> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RatRow v(static_cast<std::size_t>(ncols), Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
    basis.push_back(std::move(v));
    if (free_cols) free_cols->push_back(f);
  }
  return basis;
}

// lround-style quotient (half away from zero) in exact integers.
std::int64_t round_div(std::int64_t a, std::int64_t b) {
  const bool neg = (a < 0) != (b < 0);
  const std::int64_t aa = std::llabs(a), bb = std::llabs(b);
  const std::int64_t q = (2 * aa + bb) / (2 * bb);
  return neg ? -q : q;
}

Eigen::MatrixXd to_double(const std::vector<RatRow>& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = static_cast<double>(m[i][j]);
  }
  return out;
}

}  // namespace

int genus_prime_level(std::int64_t N) {
  if (!arith::is_prime(N)) throw HeckeError(fmt::format("level {} is not prime", N));
  // 12 g = N + 1 - 3 nu2 - 4 nu3 for prime N.
  int nu2 = 0, nu3 = 0;
  if (N == 2) {
    nu2 = 1;
  } else {
    nu2 = 1 + arith::legendre(N - 1, N);
  }
  if (N == 3) {
    nu3 = 1;
  } else if (N == 2) {
    nu3 = 0;
  } else {
    nu3 = 1 + arith::legendre(arith::mod(-3, N), N);
  }
  return static_cast<int>((N + 1 - 3 * nu2 - 4 * nu3) / 12);
}

Level make_level(std::int64_t N) {
  Level L;
  L.N = N;
  L.genus = genus_prime_level(N);
  L.index = N + 1;
  return L;
}

std::vector<IntMatrix2> heilbronn_cremona(std::int64_t p) {
  std::vector<IntMatrix2> out;
  out.push_back({1, 0, 0, p});
  for (std::int64_t s = 0; s < p; ++s) {
    const std::int64_t r = s - (p - 1) / 2;
    std::int64_t x1 = p, x2 = -r, y1 = 0, y2 = 1, a = -p, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      const std::int64_t q = round_div(a, b);
      const std::int64_t c = a - b * q;
      a = -b;
      b = c;
      const std::int64_t x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const std::int64_t y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

std::vector<IntMatrix2> heilbronn_merel(std::int64_t n) {
  std::vector<IntMatrix2> out;
  for (std::int64_t a = 1; a <= n; ++a) {
    const std::int64_t q = n / a;
    if (q * a == n) {
      const std::int64_t d = q;
      for (std::int64_t b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (std::int64_t c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (std::int64_t d = q + 1; d <= n; ++d) {
      const std::int64_t bc = a * d - n;
      for (std::int64_t c = bc / a + 1; c < d; ++c) {
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ManinSpace

std::int64_t ManinSpace::symbol_index(std::int64_t c, std::int64_t d) const {
  const std::int64_t N = level_.N;
  c = arith::mod(c, N);
  d = arith::mod(d, N);
  if (c != 0) return arith::mul_mod(d, arith::inv_mod(c, N), N);
  if (d != 0) return N;
  return -1;
}

std::pair<int, int> ManinSpace::boundary(std::int64_t symbol) const {
  // (c : d) = [g inf] - [g 0] with g = [[a, b], [c, d]]; a/c is the cusp
  // infinity iff N | c, and b/d iff N | d.
  if (symbol == level_.N) return {1, -1};  // (0 : 1)
  if (symbol == 0) return {-1, 1};         // (1 : 0)
  return {0, 0};
}

ManinSpace::ManinSpace(std::int64_t N) : level_(make_level(N)) {
  const std::size_t n = static_cast<std::size_t>(N) + 1;
  auto rep_cd = [N](std::int64_t i) -> std::pair<std::int64_t, std::int64_t> {
    return i == N ? std::pair<std::int64_t, std::int64_t>{0, 1} : std::pair<std::int64_t, std::int64_t>{1, i};
  };

  // Two-term relations x + x S = 0 and the plus quotient x = x*.
  SignedUnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [c, d] = rep_cd(static_cast<std::int64_t>(i));
    uf.relate(i, static_cast<std::size_t>(symbol_index(d, -c)), -1);
    uf.relate(i, static_cast<std::size_t>(symbol_index(-c, d)), 1);
  }
  std::vector<int> gen_of(n, -1);
  std::vector<int> sign_of(n, 0);
  std::vector<int> root_gen(n, -1);
  int G = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [r, s] = uf.find(i);
    if (uf.is_zero_root(r)) continue;
    if (root_gen[r] < 0) {
      root_gen[r] = G++;
      rep_.push_back(static_cast<std::int64_t>(i));
    }
    gen_of[i] = root_gen[r];
    sign_of[i] = s;
  }
  // Make each generator equal to its representative symbol.
  std::vector<int> rep_sign(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g) rep_sign[g] = sign_of[rep_[g]];
  for (std::size_t i = 0; i < n; ++i) {
    if (gen_of[i] >= 0) sign_of[i] *= rep_sign[gen_of[i]];
  }

  // Three-term relations x + x T + x T^2 = 0, T = [[0, -1], [1, -1]].
  std::vector<RatRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [c, d] = rep_cd(static_cast<std::int64_t>(i));
    RatRow row(static_cast<std::size_t>(G), Rational(0));
    bool nonzero = false;
    for (std::int64_t s : {static_cast<std::int64_t>(i), symbol_index(d, -c - d), symbol_index(-c - d, c)}) {
      if (gen_of[s] < 0) continue;
      row[gen_of[s]] += sign_of[s];
      nonzero = true;
    }
    if (nonzero && std::any_of(row.begin(), row.end(), [](const Rational& v) { return v != 0; })) {
      rows.push_back(std::move(row));
    }
  }
  const auto pivots = rref(rows, G);
  std::vector<bool> is_pivot(static_cast<std::size_t>(G), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> position(static_cast<std::size_t>(G), -1);
  for (int g = 0; g < G; ++g) {
    if (!is_pivot[g]) {
      position[g] = static_cast<int>(free_.size());
      free_.push_back(g);
    }
  }
  const std::size_t dim = free_.size();
  std::vector<RatRow> gen_coords(static_cast<std::size_t>(G), RatRow(dim, Rational(0)));
  for (int g = 0; g < G; ++g) {
    if (!is_pivot[g]) gen_coords[g][position[g]] = 1;
  }
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    for (std::size_t k = 0; k < dim; ++k) gen_coords[pivots[r]][k] = -rows[r][free_[k]];
  }
  coords_.assign(n, RatRow(dim, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (gen_of[i] < 0) continue;
    for (std::size_t k = 0; k < dim; ++k) coords_[i][k] = sign_of[i] * gen_coords[gen_of[i]][k];
  }

  // Kernel of the boundary map on the quotient basis.
  std::vector<RatRow> bnd(2, RatRow(dim, Rational(0)));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto [inf, zero] = boundary(rep_[free_[k]]);
    bnd[0][k] = inf;
    bnd[1][k] = zero;
  }
  const auto bp = rref(bnd, static_cast<int>(dim));
  cusp_basis_ = nullspace(bnd, bp, static_cast<int>(dim), &cusp_read_);
  if (static_cast<int>(cusp_basis_.size()) != level_.genus) {
    throw HeckeError(fmt::format("level {}: cuspidal dimension {} differs from genus {}", N,
                                 cusp_basis_.size(), level_.genus));
  }
}

std::vector<std::vector<Rational>> ManinSpace::operator_matrix(const std::vector<IntMatrix2>& mats) const {
  const std::size_t dim = free_.size();
  const std::size_t g = cusp_basis_.size();
  // Image of each quotient basis vector, as symbol multiplicities first.
  std::vector<RatRow> image(dim, RatRow(dim, Rational(0)));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(level_.N) + 1);
  for (std::size_t k = 0; k < dim; ++k) {
    std::fill(counts.begin(), counts.end(), 0);
    const std::int64_t s = rep_[free_[k]];
    const std::int64_t c = s == level_.N ? 0 : 1;
    const std::int64_t d = s == level_.N ? 1 : s;
    for (const auto& h : mats) {
      const std::int64_t idx = symbol_index(c * h.a + d * h.c, c * h.b + d * h.d);
      if (idx >= 0) ++counts[idx];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (coords_[i][j] != 0) image[k][j] += counts[i] * coords_[i][j];
      }
    }
  }
  std::vector<RatRow> out(g, RatRow(g, Rational(0)));
  for (std::size_t col = 0; col < g; ++col) {
    RatRow v(dim, Rational(0));
    for (std::size_t k = 0; k < dim; ++k) {
      if (cusp_basis_[col][k] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) v[j] += cusp_basis_[col][k] * image[k][j];
    }
    for (std::size_t row = 0; row < g; ++row) out[row][col] = v[cusp_read_[row]];
  }
  return out;
}

std::vector<std::vector<Rational>> hecke_matrix_exact(const ManinSpace& space, std::int64_t p) {
  if (!arith::is_prime(p)) throw HeckeError(fmt::format("hecke_matrix: {} is not prime", p));
  if (p == space.N()) throw HeckeError("hecke_matrix: p divides the level; use atkin_lehner_matrix");
  return space.operator_matrix(heilbronn_cremona(p));
}

Eigen::MatrixXd hecke_matrix(const ManinSpace& space, std::int64_t p) {
  return to_double(hecke_matrix_exact(space, p));
}

Eigen::MatrixXd atkin_lehner_matrix(const ManinSpace& space) {
  return to_double(space.operator_matrix(heilbronn_merel(space.N())));
}

// ---------------------------------------------------------------------------
// Eigensystems

double EigenSystem::lambda_p(std::int64_t p) const {
  const auto it = ap.find(p);
  if (it == ap.end()) {
    throw HeckeError(fmt::format("level {} form {}: eigenvalue for prime {} not available", level.N, form, p));
  }
  return it->second / std::sqrt(static_cast<double>(p));
}

double lambda_at(const EigenSystem& sys, std::int64_t n) {
  if (n < 1) throw HeckeError("lambda_at: n must be positive");
  double value = 1.0;
  for (const auto& [p, k] : arith::factorize(static_cast<std::uint64_t>(n)).factors) {
    const double lp = sys.lambda_p(p);
    if (p == sys.level.N) {
      value *= std::pow(lp, k);
      continue;
    }
    double prev = 1.0, cur = lp;
    for (int j = 1; j < k; ++j) {
      const double next = lp * cur - prev;
      prev = cur;
      cur = next;
    }
    value *= cur;
  }
  return value;
}

std::vector<double> lambda_table(const EigenSystem& sys, std::int64_t n_max) {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 1)) + 1, 0.0);
  out[1] = 1.0;
  if (n_max < 2) return out;
  const arith::FactorSieve sieve(n_max);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const auto f = sieve.factorize(n);
    const auto [p, k] = f.factors.front();
    const std::int64_t pk = arith::ipow(p, k);
    if (pk != n) {
      out[n] = out[pk] * out[n / pk];
      continue;
    }
    const double lp = sys.lambda_p(p);
    if (k == 1) {
      out[n] = lp;
    } else if (p == sys.level.N) {
      out[n] = lp * out[n / p];
    } else {
      out[n] = lp * out[n / p] - (k == 2 ? 1.0 : out[n / (p * p)]);
    }
  }
  return out;
}

void validate_system(const EigenSystem& sys, double ap_slack) {
  for (const auto& [p, a] : sys.ap) {
    if (!std::isfinite(a)) throw HeckeError(fmt::format("level {}: non-finite a_{}", sys.level.N, p));
    if (p == sys.level.N) {
      if (std::fabs(std::fabs(a) - 1.0) > 1e-6) {
        throw HeckeError(fmt::format("level {}: a_N = {} is not +-1", sys.level.N, a));
      }
    } else if (std::fabs(a) > 2.0 * std::sqrt(static_cast<double>(p)) * (1.0 + ap_slack)) {
      throw HeckeError(fmt::format("level {}: a_{} = {} violates the Deligne bound", sys.level.N, p, a));
    }
  }
}

std::vector<EigenSystem> eigen_systems(const ManinSpace& space, std::int64_t p_max, const EigenOptions& opts) {
  const Level level = space.level();
  const int g = level.genus;
  std::vector<EigenSystem> out;
  if (g == 0) return out;

  std::vector<std::int64_t> primes;
  for (auto p : arith::primes_up_to(p_max)) {
    if (p != level.N) primes.push_back(p);
  }
  if (primes.empty()) throw HeckeError("eigen_systems: no primes requested");
  std::vector<Eigen::MatrixXd> T;
  T.reserve(primes.size());
  for (auto p : primes) T.push_back(hecke_matrix(space, p));
  const Eigen::MatrixXd U = atkin_lehner_matrix(space);

  std::mt19937_64 rng(opts.seed);
  const std::size_t mix = std::min<std::size_t>(primes.size(), 4);
  double last_gap = 0.0;
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g, g);
    for (std::size_t i = 0; i < mix; ++i) {
      const double r = static_cast<double>(rng() % 2001) / 1000.0 - 1.0;
      A += r * T[i];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) continue;
    const auto ev = es.eigenvalues();
    const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
    double gap = std::numeric_limits<double>::infinity();
    bool complex_pair = false;
    for (int i = 0; i < g; ++i) {
      if (std::fabs(ev[i].imag()) > 1e-8 * scale) complex_pair = true;
      for (int j = i + 1; j < g; ++j) gap = std::min(gap, std::abs(ev[i] - ev[j]));
    }
    last_gap = g > 1 ? gap : scale;
    if (complex_pair || (g > 1 && gap < 1e-6 * scale)) continue;

    std::vector<EigenSystem> systems;
    bool ok = true;
    for (int i = 0; i < g && ok; ++i) {
      Eigen::VectorXd v = es.eigenvectors().col(i).real();
      v /= v.norm();
      EigenSystem sys;
      sys.level = level;
      sys.source = Source::computed;
      auto read = [&](const Eigen::MatrixXd& M, std::int64_t p) {
        const Eigen::VectorXd Mv = M * v;
        const double lam = v.dot(Mv);
        if ((Mv - lam * v).norm() > opts.residual_tol) ok = false;
        sys.ap[p] = lam;
      };
      for (std::size_t k = 0; k < primes.size(); ++k) read(T[k], primes[k]);
      read(U, level.N);
      systems.push_back(std::move(sys));
    }
    if (!ok) continue;
    std::sort(systems.begin(), systems.end(), [](const EigenSystem& a, const EigenSystem& b) {
      for (const auto& [p, x] : a.ap) {
        const double y = b.ap.at(p);
        if (x != y) return x < y;
      }
      return false;
    });
    for (int i = 0; i < g; ++i) {
      systems[i].form = i;
      validate_system(systems[i]);
    }
    return systems;
  }
  throw HeckeError(fmt::format("level {}: could not separate eigenspaces after {} attempts (nearest gap {:.3e})",
                               level.N, opts.retries, last_gap));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::int64_t parse_int(const std::string& s, std::int64_t row, const char* what) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno != 0) {
    throw IngestError(fmt::format("row {}: bad {} '{}'", row, what, s), row);
  }
  return v;
}

double parse_double(const std::string& s, std::int64_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw IngestError(fmt::format("row {}: bad ap '{}'", row, s), row);
  }
  return v;
}

}  // namespace

std::map<std::int64_t, std::vector<EigenSystem>> ingest_eigen_table(const std::filesystem::path& path,
                                                                   const std::vector<std::int64_t>& levels) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string(), 0);
  std::string line;
  std::int64_t row = 0;
  if (!std::getline(in, line)) throw IngestError("empty eigenvalue table", 1);
  ++row;
  if (split_csv(line) != std::vector<std::string>{"level", "form", "p", "ap"}) {
    throw IngestError("header must be 'level,form,p,ap'", row);
  }
  struct Entry {
    std::map<int, EigenSystem> forms;
    std::int64_t first_row = 0;
  };
  std::map<std::int64_t, Entry> by_level;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw IngestError(fmt::format("row {}: expected 4 fields", row), row);
    const std::int64_t N = parse_int(cells[0], row, "level");
    const std::int64_t form = parse_int(cells[1], row, "form");
    const std::int64_t p = parse_int(cells[2], row, "prime");
    const double a = parse_double(cells[3], row);
    if (!levels.empty() && std::find(levels.begin(), levels.end(), N) == levels.end()) continue;
    if (N < 2 || !arith::is_prime(N)) throw IngestError(fmt::format("row {}: level {} is not prime", row, N), row);
    if (p < 2 || !arith::is_prime(p)) throw IngestError(fmt::format("row {}: {} is not prime", row, p), row);
    const Level L = make_level(N);
    if (form < 0 || form >= L.genus) {
      throw IngestError(fmt::format("row {}: form index {} outside [0, {})", row, form, L.genus), row);
    }
    auto& entry = by_level[N];
    if (entry.first_row == 0) entry.first_row = row;
    auto& sys = entry.forms[static_cast<int>(form)];
    sys.level = L;
    sys.form = static_cast<int>(form);
    sys.source = Source::ingested;
    if (sys.ap.count(p)) throw IngestError(fmt::format("row {}: duplicate prime {}", row, p), row);
    sys.ap[p] = a;
    try {
      EigenSystem one = sys;
      one.ap = {{p, a}};
      validate_system(one, 1e-3);
    } catch (const HeckeError& e) {
      throw IngestError(fmt::format("row {}: {}", row, e.what()), row);
    }
  }
  std::map<std::int64_t, std::vector<EigenSystem>> out;
  for (auto& [N, entry] : by_level) {
    const int g = genus_prime_level(N);
    if (static_cast<int>(entry.forms.size()) != g) {
      throw IngestError(fmt::format("level {}: {} forms present, genus is {}", N, entry.forms.size(), g),
                        entry.first_row);
    }
    std::vector<EigenSystem> systems;
    for (auto& [f, sys] : entry.forms) {
      if (!systems.empty() && sys.ap.size() != systems.front().ap.size()) {
        throw IngestError(fmt::format("level {}: forms cover different primes", N), entry.first_row);
      }
      systems.push_back(std::move(sys));
    }
    out[N] = std::move(systems);
  }
  for (auto N : levels) {
    if (!out.count(N) && genus_prime_level(N) == 0) out[N] = {};
  }
  return out;
}

std::string format_eigen_table(const std::vector<EigenSystem>& systems) {
  std::string s = "level,form,p,ap\n";
  for (const auto& sys : systems) {
    for (const auto& [p, a] : sys.ap) s += fmt::format("{},{},{},{}\n", sys.level.N, sys.form, p, a);
  }
  return s;
}

void write_eigen_table(const std::filesystem::path& path, const std::vector<EigenSystem>& systems) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw HeckeError("cannot write " + path.string());
  out << format_eigen_table(systems);
  if (!out) throw HeckeError("write failed for " + path.string());
}

EigenCache::EigenCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path EigenCache::default_dir() {
  if (const char* env = std::getenv("SELBERG_EDGE_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "selberg-edge";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "selberg-edge";
  }
  return std::filesystem::temp_directory_path() / "selberg-edge";
}

std::filesystem::path EigenCache::path_for(std::int64_t N) const { return dir_ / fmt::format("eigen_{}.csv", N); }

std::optional<std::vector<EigenSystem>> EigenCache::load(std::int64_t N, std::int64_t p_max) const {
  const auto path = path_for(N);
  if (!std::filesystem::exists(path)) return std::nullopt;
  auto table = ingest_eigen_table(path, {N});
  auto systems = std::move(table[N]);
  for (auto& s : systems) {
    s.source = Source::computed;
    std::int64_t top = 0;
    for (const auto& [p, a] : s.ap) {
      if (p != N) top = std::max(top, p);
    }
    const auto primes = arith::primes_up_to(p_max);
    const std::int64_t need = primes.empty() ? 0 : (primes.back() == N && primes.size() > 1
                                                          ? primes[primes.size() - 2]
                                                          : primes.back());
    if (top < need || !s.ap.count(N)) return std::nullopt;
  }
  return systems;
}

void EigenCache::store(std::int64_t N, const std::vector<EigenSystem>& systems) const {
  std::filesystem::create_directories(dir_);
  const auto final_path = path_for(N);
  auto tmp = final_path;
  tmp += fmt::format(".tmp{}", static_cast<long long>(std::random_device{}() & 0xffffff));
  write_eigen_table(tmp, systems);
  std::filesystem::rename(tmp, final_path);
}

}  // namespace selberg_edge::hecke
