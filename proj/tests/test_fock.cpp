#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadmod/fock.hpp"

using namespace quadmod;
using G = GaussianRational;

namespace {

std::string failed_ids(const Report& r) {
  std::string s;
  for (const auto& c : r.checks())
    if (!c.pass && !c.informational) s += c.id + " [" + c.witness + "] ";
  return s;
}

Vector level0_vector(const TruncatedFock& f, const Vector& b1, const Vector& b2) {
  Vector v(b1);
  v.insert(v.end(), b2.begin(), b2.end());
  CHECK(v.size() == f.level_dims()[0]);
  return v;
}

// Embeds a level vector into the whole space.
Vector at_level(const TruncatedFock& f, std::size_t level, const Vector& v) {
  Vector out(f.total_dim());
  std::size_t off = 0;
  for (std::size_t n = 0; n < level; ++n) off += f.level_dims()[n];
  for (std::size_t k = 0; k < v.size(); ++k) out[off + k] = v[k];
  return out;
}

Vector restrict_level(const TruncatedFock& f, std::size_t level, const Vector& v) {
  std::size_t off = 0;
  for (std::size_t n = 0; n < level; ++n) off += f.level_dims()[n];
  return Vector(v.begin() + off, v.begin() + off + f.level_dims()[level]);
}

}  // namespace

TEST_CASE("level dimensions of the truncated Fock space") {
  auto f = build_fock(build_example_MN(2, 2), 3);
  CHECK(f.level_dims() == std::vector<std::size_t>{4, 4, 16, 64});
  CHECK(f.total_dim() == 88);
  INFO(failed_ids(f.build_report()));
  CHECK(f.build_report().passed());

  // H (x)_1 H and H (x)_2 H for M = 2, N = 3: dim H = 6, balanced over C^N resp. C^M
  auto f23 = build_fock(build_example_MN(2, 3), 2);
  REQUIRE(f23.words(2).size() == 2);
  CHECK(f23.words(2)[0].letters == std::vector<int>{1});
  CHECK(f23.words(2)[0].dim() == 12);
  CHECK(f23.words(2)[1].dim() == 18);
  CHECK(f23.level_dims()[0] == 3 + 2);

  auto e1 = build_fock(build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3)), 4);
  CHECK(e1.level_dims() == std::vector<std::size_t>{6, 3, 6, 12, 24});
  INFO(failed_ids(e1.build_report()));
  CHECK(e1.build_report().passed());
}

TEST_CASE("build_fock errors") {
  auto s = build_example_MN(2, 2);
  CHECK_THROWS_WITH_AS(build_fock(s, 1), doctest::Contains("DepthTooSmall"), Error);
  CHECK_THROWS_WITH_AS(build_fock(s, 3, 50), doctest::Contains("TooLarge"), Error);
}

TEST_CASE("truncation is monotone") {
  auto s = build_example_MN(2, 2);
  auto f3 = build_fock(s, 3);
  auto f4 = build_fock(s, 4);
  for (std::size_t n = 0; n <= 3; ++n) {
    CHECK(f3.level_dims()[n] == f4.level_dims()[n]);
    CHECK(f3.level_gram(n).matrix() == f4.level_gram(n).matrix());
  }
  CHECK(f4.level_dims()[4] == 256);
  // creation blocks agree below the cut
  Vector xi = s.basisU[0];
  auto c3 = creation(f3, CreationKind::s, xi), c4 = creation(f4, CreationKind::s, xi);
  for (std::size_t n = 0; n + 1 < 3; ++n) {
    REQUIRE(c3.block(n + 1, n));
    REQUIRE(c4.block(n + 1, n));
    CHECK(*c3.block(n + 1, n) == *c4.block(n + 1, n));
  }
  CHECK(!c3.block(0, 3));
}

TEST_CASE("creation operators on explicit vectors") {
  auto s = build_example_MN(2, 2);
  auto f = build_fock(s, 3);
  const Vector& u1 = s.basisU[0];
  const Vector& u2 = s.basisU[1];
  auto S1 = creation(f, CreationKind::s, u1);
  CHECK(S1.degree() == 1);

  // s_xi (b (+) 0) = varphi_1(b) xi, so s_{u1}(1 (+) 0) = u1 on level 1
  Vector one = level0_vector(f, s.algebraB1.unit(), s.algebraB2.zero());
  Vector img = S1.to_dense() * at_level(f, 0, one);
  CHECK(restrict_level(f, 1, img) == u1);
  // t-part of the level-0 vector is ignored by s
  Vector two = level0_vector(f, s.algebraB1.zero(), s.algebraB2.unit());
  CHECK(restrict_level(f, 1, S1.to_dense() * at_level(f, 0, two)) == Vector(4));

  // s_{u1}^* u2 = <u1|u2>_{B1} (+) 0 = 0 ; s_{u1}^* u1 = 1 (+) 0
  auto S1a = f.adjoint(S1);
  CHECK(restrict_level(f, 0, S1a.to_dense() * at_level(f, 1, u2)) == Vector(4));
  CHECK(restrict_level(f, 0, S1a.to_dense() * at_level(f, 1, u1)) == one);

  // t_v^* s_u vanishes from level 1 on
  auto T1 = creation(f, CreationKind::t, s.basisV[0]);
  auto ts = f.adjoint(T1) * S1;
  CHECK(f.defect_witness(ts, Window{1, 3}).empty());

  // top level is annihilated
  CHECK(!S1.block(0, 3));
}

TEST_CASE("creation is linear in xi") {
  auto s = build_example_MN(2, 3);
  auto f = build_fock(s, 3);
  Vector x = s.basis_vector(0), y = s.basis_vector(4);
  G c = G(mpq_class(1, 2), mpq_class(2)), d = G(-3);
  Vector z(s.dimH);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = c * x[k] + d * y[k];
  for (auto kind : {CreationKind::s, CreationKind::t})
    CHECK(creation(f, kind, z) == creation(f, kind, x) * c + creation(f, kind, y) * d);
}

TEST_CASE("adjoint against the block-diagonal Gram") {
  auto s = build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3));
  auto f = build_fock(s, 3);
  auto S = creation(f, CreationKind::s, s.basis_vector(1));
  auto Sa = f.adjoint(S);
  GramForm g = f.gram();
  // oracle: the generic dense adjoint formula
  CHECK(Sa.to_dense() == gram_adjoint(S.to_dense(), g, g));
  CHECK(f.adjoint(Sa) == S);
}

TEST_CASE("verification reports on the examples") {
  for (auto spec : {build_example_MN(2, 2), build_example_MN(2, 3),
                    build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3))}) {
    auto f = build_fock(spec, 3);
    Report r;
    for (std::size_t k = 0; k < spec.basisU.size(); ++k)
      r.append(verify_creation(f, CreationKind::s, spec.basisU[k], "s" + std::to_string(k)));
    for (std::size_t k = 0; k < spec.basisV.size(); ++k)
      r.append(verify_creation(f, CreationKind::t, spec.basisV[k], "t" + std::to_string(k)));
    r.append(verify_left_actions(f));
    r.append(verify_projections(f, projections(f)));
    r.append(verify_associativity(f));
    INFO(spec.name, " ", failed_ids(r));
    CHECK(r.passed());
  }
}

TEST_CASE("gauge action") {
  auto s = build_example_MN(2, 2);
  auto f = build_fock(s, 3);
  auto S = creation(f, CreationKind::s, s.basisU[1]);
  auto u = gauge_unitary(f);
  CHECK(u * u * u * u == f.identity());
  std::vector<GradedOperator> ops = {{"s", S, 1}, {"s*", f.adjoint(S), -1}, {"ss*", S * f.adjoint(S), 0}};
  Report r = gauge_check(f, ops);
  INFO(failed_ids(r));
  CHECK(r.passed());
  // a wrong degree is caught
  CHECK_FALSE(gauge_check(f, {{"s", S, 0}}).passed());
}

TEST_CASE("degree_zero_part") {
  auto s = build_example_MN(2, 2);
  auto f = build_fock(s, 3);
  auto S = creation(f, CreationKind::s, s.basisU[0]);
  auto mixed = S + f.identity();
  CHECK(!mixed.degree());
  CHECK(degree_zero_part(mixed) == f.identity());
  CHECK(degree_zero_part(S).is_zero());
  CHECK(f.identity().degree() == 0);
}

TEST_CASE("defect witness names the location") {
  auto s = build_example_MN(2, 2);
  auto f = build_fock(s, 3);
  auto S = creation(f, CreationKind::s, s.basisU[0]);
  std::string w = f.defect_witness(S, Window{1, 2});
  CHECK(w.find("level 2") != std::string::npos);
  CHECK(w.find("level 1") != std::string::npos);
  CHECK(f.defect_witness(S, Window{3, 3}).empty());
}
