#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadmod/ck.hpp"
#include "quadmod/ktheory.hpp"

#include <numeric>
#include <random>

using namespace quadmod;

namespace {

bool is_diagonal(const IntegerMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && sgn(m(i, j)) != 0) return false;
  return true;
}

IntegerMatrix random_matrix(std::mt19937& rng) {
  std::uniform_int_distribution<int> dim(1, 8), entry(-9, 9), sparse(0, 3);
  IntegerMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = sparse(rng) == 0 ? 0 : entry(rng);
  return m;
}

IntegerMatrix minor_of(const IntegerMatrix& m, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
  IntegerMatrix out(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = m(r[i], c[j]);
  return out;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t x = start; x < n; ++x) {
      cur.push_back(x);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// d_k = D_k / D_{k-1}, D_k = gcd of all k x k minors
std::vector<mpz_class> determinantal_divisors(const IntegerMatrix& m) {
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
    mpz_class g = 0;
    for (const auto& r : subsets(m.rows(), k))
      for (const auto& c : subsets(m.cols(), k)) {
        mpz_class d = determinant(minor_of(m, r, c));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntegerMatrix ones(std::size_t n) {
  IntegerMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = 1;
  return e;
}

}  // namespace

TEST_CASE("smith normal form on hand examples") {
  auto f = smith_normal_form(IntegerMatrix::from_ints({{2, 0}, {0, 3}}));
  CHECK(f.D == IntegerMatrix::from_ints({{1, 0}, {0, 6}}));
  CHECK(f.U * IntegerMatrix::from_ints({{2, 0}, {0, 3}}) * f.V == f.D);

  IntegerMatrix z(2, 3);
  f = smith_normal_form(z);
  CHECK(f.D == z);
  CHECK(f.U == IntegerMatrix::identity(2));
  CHECK(f.V == IntegerMatrix::identity(3));

  CHECK(cokernel(IntegerMatrix::from_ints({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})).to_string() == "Z/2 ⊕ Z/6 ⊕ Z/12");
  CHECK(cokernel(IntegerMatrix::from_ints({{1, 2}})).to_string() == "0");
  CHECK(cokernel(IntegerMatrix::from_ints({{1}, {2}})).to_string() == "Z");
  CHECK(cokernel(IntegerMatrix(3, 1)).to_string() == "Z^3");
  CHECK(kernel_rank(IntegerMatrix::from_ints({{1, 1}, {1, 1}})) == 1);
  CHECK(determinant(IntegerMatrix::from_ints({{0, 2, 1}, {3, 0, 0}, {1, 1, 1}})) == -3);
}

TEST_CASE("A + B - I for small H_{M,N}") {
  auto ck = ck_matrix(2, 2);
  IntegerMatrix d = ck.A + ck.B - IntegerMatrix::identity(4);
  CHECK(smith_normal_form(d).D == IntegerMatrix::from_ints({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 3}}));

  ck = ck_matrix(2, 3);
  d = ck.A + ck.B - IntegerMatrix::identity(6);
  CHECK(cokernel(d).to_string() == "Z/8");
  CHECK(kernel_rank(d) == 0);
}

TEST_CASE("random smith normal form suite") {
  std::mt19937 rng(20240607);
  int oracleChecked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    IntegerMatrix m = random_matrix(rng);
    SmithForm f = smith_normal_form(m);
    INFO("matrix\n" << m.to_string());
    REQUIRE(f.U * m * f.V == f.D);
    CHECK(abs(determinant(f.U)) == 1);
    CHECK(abs(determinant(f.V)) == 1);
    REQUIRE(is_diagonal(f.D));
    const std::size_t r = std::min(m.rows(), m.cols());
    bool zeroSeen = false;
    for (std::size_t t = 0; t < r; ++t) {
      CHECK(sgn(f.D(t, t)) >= 0);
      if (sgn(f.D(t, t)) == 0) zeroSeen = true;
      else CHECK_FALSE(zeroSeen);
      if (t + 1 < r && sgn(f.D(t + 1, t + 1)) != 0)
        CHECK(mpz_divisible_p(f.D(t + 1, t + 1).get_mpz_t(), f.D(t, t).get_mpz_t()));
    }
    if (m.rows() == m.cols()) {
      mpz_class det = determinant(m);
      FGAbelianGroup g = cokernel(m);
      if (det != 0) {
        CHECK(g.freeRank == 0);
        CHECK(g.order() == abs(det));
      } else {
        CHECK(g.freeRank > 0);
      }
    }
    if (std::max(m.rows(), m.cols()) <= 5) {
      ++oracleChecked;
      auto dd = determinantal_divisors(m);
      REQUIRE(dd.size() <= r);
      for (std::size_t t = 0; t < r; ++t) CHECK(f.D(t, t) == (t < dd.size() ? dd[t] : mpz_class(0)));
    }
  }
  CHECK(oracleChecked > 50);
}

TEST_CASE("K-groups of H_{2,N}") {
  for (std::size_t N = 2; N <= 8; ++N) {
    KGroups k = k_groups(2, N);
    CHECK(k.K0.to_string() == "Z/" + std::to_string(N * N - 1));
    CHECK(k.K1.is_trivial());
  }
  CHECK(k_groups(2, 4).to_string() == "K0 = Z/15, K1 = 0");
  CHECK_THROWS_AS(k_groups(1, 3), Error);
}

TEST_CASE("K-groups via amalgamated H agree with A + B") {
  for (std::size_t M = 2; M <= 4; ++M)
    for (std::size_t N = 2; N <= 4; ++N) {
      auto ck = ck_matrix(M, N);
      IntegerMatrix I2 = IntegerMatrix::identity(2 * M * N);
      CHECK(column_amalgamation(ck.H) == ck.A + ck.B);
      CHECK(cokernel(ck.H - I2) == cokernel(ck.A + ck.B - IntegerMatrix::identity(M * N)));
      CHECK(kernel_rank(ck.H - I2) == kernel_rank(ck.A + ck.B - IntegerMatrix::identity(M * N)));
    }
}

TEST_CASE("lambda_circ from the Fock space") {
  TruncatedFock f = build_fock(build_example_MN(2, 2), 3);
  GeneratorFamily g = make_generators(f);
  auto ck = ck_matrix(2, 2);
  CHECK(lambda_circ_matrix(g) == ck.A + ck.B);
  CHECK(lambda_circ_summed(g) == ck.A + ck.B);
  CHECK(k_groups_from_matrix(lambda_circ_matrix(g)).to_string() == "K0 = Z/3, K1 = 0");

  // Example 1: lambda_circ = alpha + beta acting on K0(C^3) = Z^3
  TruncatedFock e = build_fock(build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3)), 3);
  GeneratorFamily ge = make_generators(e);
  IntegerMatrix lam = lambda_circ_matrix(ge);
  CHECK(lam == lambda_circ_summed(ge));
  for (std::size_t p = 0; p < 3; ++p) {
    long colSum = 0;
    for (std::size_t q = 0; q < 3; ++q) colSum += lam(q, p).get_si();
    CHECK(colSum == 2);
  }
  // lambda = J - I, so I - lambda = 2I - J: determinantal divisors 1, 2, 4
  CHECK(lam + IntegerMatrix::identity(3) == ones(3));
  KGroups k = k_groups_from_matrix(lam);
  CHECK(k.K0.to_string() == "Z/2 ⊕ Z/2");
  CHECK(k.K1.is_trivial());

  // sigma = tau: lambda = 2P, det(I - 2P) = 1 - 8 for a 3-cycle
  IntegerMatrix same = lambda_circ_matrix(build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(123)", 3)), 3);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) CHECK(same(q, p) == (q == (p + 1) % 3 ? 2 : 0));
  CHECK(k_groups_from_matrix(same).to_string() == "K0 = Z/7, K1 = 0");
}

TEST_CASE("aperiodicity and amalgamation helpers") {
  for (std::size_t M = 2; M <= 4; ++M)
    for (std::size_t N = 2; N <= 4; ++N) {
      auto a = is_aperiodic(ck_matrix(M, N).H);
      CHECK(a.aperiodic);
      CHECK(a.exponent == 2);
    }
  auto cyc = is_aperiodic(IntegerMatrix::from_ints({{0, 1}, {1, 0}}));
  CHECK_FALSE(cyc.aperiodic);
  CHECK(is_aperiodic(IntegerMatrix::from_ints({{1, 1}, {1, 0}})).exponent == 2);
  CHECK(column_amalgamation(IntegerMatrix::from_ints({{1, 2, 1}, {0, 3, 0}, {4, 5, 4}})) ==
        IntegerMatrix::from_ints({{5, 7}, {0, 3}}));
  CHECK(column_amalgamation(ones(3)) == IntegerMatrix::from_ints({{3}}));
}
