#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "selberg_edge/arith.hpp"
#include "selberg_edge/hecke.hpp"

using namespace selberg_edge;
using namespace selberg_edge::hecke;

namespace {

// Genus of X_0(p) from the elliptic-point counts.
int genus_oracle(std::int64_t p) {
  if (p == 2 || p == 3) return 0;
  const int nu2 = 1 + arith::legendre(-1 + p, p);  // 1 + (-1/p)
  const int nu3 = 1 + arith::legendre(-3 + 3 * p, p);
  // g = 1 + (p + 1)/12 - nu2/4 - nu3/3 - 1 (two cusps).
  const double g = (p + 1) / 12.0 - nu2 / 4.0 - nu3 / 3.0;
  return static_cast<int>(std::lround(g));
}

// q prod (1 - q^n)^2 (1 - q^{11 n})^2 up to q^M.
std::vector<std::int64_t> eta_11(int M) {
  std::vector<std::int64_t> c(M + 1, 0);
  c[1] = 1;
  auto mul = [&](int step) {
    for (int k = M; k >= step; --k) c[k] -= c[k - step];
  };
  for (int n = 1; n <= M; ++n) {
    mul(n);
    mul(n);
    if (11 * n <= M) {
      mul(11 * n);
      mul(11 * n);
    }
  }
  return c;
}

// a_p = p + 1 - #E(F_p) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
std::int64_t curve_ap(std::int64_t p, std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t a4,
                      std::int64_t a6) {
  std::int64_t count = 1;
  auto m = [p](std::int64_t v) { return ((v % p) + p) % p; };
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t lhs = m(y * y + a1 * x * y + a3 * y);
      const std::int64_t rhs = m(x * x * x + a2 * x * x + a4 * x + a6);
      if (lhs == rhs) ++count;
    }
  }
  return p + 1 - count;
}

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("selberg_edge_test_") + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("genus and cuspidal dimension for primes up to 200") {
  for (auto p : arith::primes_up_to(200)) {
    CHECK(genus_prime_level(p) == genus_oracle(p));
    if (p < 11) continue;
    const ManinSpace space(p);
    CHECK(space.cuspidal_dimension() == genus_oracle(p));
    CHECK(space.dimension() == space.cuspidal_dimension() + 1);
  }
}

TEST_CASE("level 11 against the eta product") {
  const ManinSpace space(11);
  const auto sys = eigen_systems(space, 97);
  REQUIRE(sys.size() == 1);
  const auto eta = eta_11(100);
  for (auto p : arith::primes_up_to(97)) {
    CHECK(sys[0].ap.at(p) == doctest::Approx(static_cast<double>(eta[p])).epsilon(1e-9));
  }
  CHECK(sys[0].ap.at(2) == doctest::Approx(-2.0));
  CHECK(sys[0].ap.at(3) == doctest::Approx(-1.0));
  CHECK(sys[0].ap.at(5) == doctest::Approx(1.0));
  CHECK(sys[0].ap.at(7) == doctest::Approx(-2.0));
  // lambda(n) = a(n) / sqrt(n) for composite n too.
  for (int n : {4, 6, 9, 12, 22, 25, 49, 50, 77, 99}) {
    CHECK(lambda_at(sys[0], n) * std::sqrt(static_cast<double>(n)) ==
          doctest::Approx(static_cast<double>(eta[n])).epsilon(1e-9));
  }
}

TEST_CASE("levels 37 and 43 against point counts") {
  {
    const auto sys = eigen_systems(ManinSpace(37), 60);
    REQUIRE(sys.size() == 2);
    // Ordered by a_2: 37a (y^2 + y = x^3 - x) has a_2 = -2, 37b has a_2 = 0.
    for (auto p : arith::primes_up_to(60)) {
      if (p == 37) continue;
      CHECK(sys[0].ap.at(p) == doctest::Approx(static_cast<double>(curve_ap(p, 0, 0, 1, -1, 0))).epsilon(1e-9));
      CHECK(sys[1].ap.at(p) ==
            doctest::Approx(static_cast<double>(curve_ap(p, 0, 1, 1, -23, -50))).epsilon(1e-9));
    }
    CHECK(sys[0].ap.at(37) == doctest::Approx(-1.0));  // rank one, root number -1
    CHECK(sys[1].ap.at(37) == doctest::Approx(1.0));
  }
  {
    const auto sys = eigen_systems(ManinSpace(43), 50);
    REQUIRE(sys.size() == 3);
    int matches = 0;
    for (const auto& s : sys) {
      bool all = true;
      for (auto p : arith::primes_up_to(50)) {
        if (p == 43) continue;
        all = all && std::fabs(s.ap.at(p) - static_cast<double>(curve_ap(p, 0, 1, 1, 0, 0))) < 1e-9;
      }
      matches += all;
    }
    CHECK(matches == 1);
  }
}

TEST_CASE("level 23: golden-ratio eigenvalues and trace of T_2") {
  const ManinSpace space(23);
  const auto T2 = hecke_matrix(space, 2);
  CHECK(T2.trace() == doctest::Approx(-1.0).epsilon(1e-12));
  const auto sys = eigen_systems(space, 30);
  REQUIRE(sys.size() == 2);
  CHECK(sys[0].ap.at(2) == doctest::Approx((-1 - std::sqrt(5.0)) / 2).epsilon(1e-10));
  CHECK(sys[1].ap.at(2) == doctest::Approx((-1 + std::sqrt(5.0)) / 2).epsilon(1e-10));
}

TEST_CASE("Hecke operators commute exactly") {
  const ManinSpace space(67);
  const auto A = hecke_matrix_exact(space, 2);
  const auto B = hecke_matrix_exact(space, 3);
  const std::size_t n = A.size();
  bool equal = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational ab = 0, ba = 0;
      for (std::size_t k = 0; k < n; ++k) {
        ab += A[i][k] * B[k][j];
        ba += B[i][k] * A[k][j];
      }
      equal = equal && ab == ba;
    }
  }
  CHECK(equal);
}

TEST_CASE("every system up to level 100 is valid and ordered") {
  for (auto p : arith::primes_up_to(100)) {
    if (p < 11) continue;
    const auto sys = eigen_systems(ManinSpace(p), 50);
    CHECK(static_cast<int>(sys.size()) == genus_prime_level(p));
    for (std::size_t i = 0; i < sys.size(); ++i) {
      CHECK_NOTHROW(validate_system(sys[i]));
      CHECK(sys[i].form == static_cast<int>(i));
      if (i > 0) CHECK(sys[i - 1].ap.at(2) <= sys[i].ap.at(2) + 1e-9);
    }
  }
}

TEST_CASE("lambda table and Hecke relations") {
  const auto sys = eigen_systems(ManinSpace(53), 200);
  const auto& f = sys.back();
  const auto table = lambda_table(f, 200);
  for (int n = 1; n <= 200; ++n) CHECK(table[n] == doctest::Approx(lambda_at(f, n)).epsilon(1e-12));
  CHECK(table[4] == doctest::Approx(table[2] * table[2] - 1).epsilon(1e-12));
  CHECK(table[6] == doctest::Approx(table[2] * table[3]).epsilon(1e-12));
  CHECK(table[106] == doctest::Approx(table[2] * table[53]).epsilon(1e-12));
  CHECK(std::fabs(std::fabs(f.lambda_p(53)) - 1 / std::sqrt(53.0)) < 1e-12);
  CHECK_THROWS_AS(f.lambda_p(211), HeckeError);
}

TEST_CASE("eigenvalue table round trip and cache") {
  const auto dir = scratch_dir("ingest");
  const auto sys = eigen_systems(ManinSpace(29), 100);
  write_eigen_table(dir / "t.csv", sys);
  const auto back = ingest_eigen_table(dir / "t.csv");
  REQUIRE(back.count(29));
  REQUIRE(back.at(29).size() == sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    CHECK(back.at(29)[i].ap == sys[i].ap);  // bit-exact
    CHECK(back.at(29)[i].source == Source::ingested);
  }
  const EigenCache cache(dir / "cache");
  CHECK_FALSE(cache.load(29, 100).has_value());
  cache.store(29, sys);
  const auto loaded = cache.load(29, 100);
  REQUIRE(loaded.has_value());
  CHECK((*loaded)[1].ap == sys[1].ap);
  CHECK_FALSE(cache.load(29, 1000).has_value());
  CHECK(format_eigen_table(*loaded) == format_eigen_table(sys));
}

TEST_CASE("eigenvalue table rejections") {
  const auto dir = scratch_dir("reject");
  auto write = [&](const std::string& body) {
    std::ofstream(dir / "x.csv") << body;
    return dir / "x.csv";
  };
  // Deligne violation on row 3.
  CHECK_THROWS_AS(ingest_eigen_table(write("level,form,p,ap\n11,0,2,-2\n11,0,3,4\n")), IngestError);
  try {
    ingest_eigen_table(write("level,form,p,ap\n11,0,2,-2\n11,0,3,4\n"));
  } catch (const IngestError& e) {
    CHECK(e.row() == 3);
  }
  // Level 37 has genus 2; one form is not enough.
  CHECK_THROWS_AS(ingest_eigen_table(write("level,form,p,ap\n37,0,2,-2\n37,0,3,-3\n")), IngestError);
  CHECK_THROWS_AS(ingest_eigen_table(write("level,form,p,ap\n11,0,two,-2\n")), IngestError);
  CHECK_THROWS_AS(ingest_eigen_table(write("lvl,form,p,ap\n")), IngestError);
  CHECK_THROWS_AS(ingest_eigen_table(write("level,form,p,ap\n12,0,2,0\n")), IngestError);
  // Restricting to other levels skips the bad level.
  const auto ok = ingest_eigen_table(write("level,form,p,ap\n11,0,2,-2\n11,0,3,-1\n37,0,2,-2\n"), {11});
  CHECK(ok.size() == 1);
}
