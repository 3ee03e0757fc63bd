#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadmod/quad_module.hpp"

using namespace quadmod;
using G = GaussianRational;

namespace {

Permutation cyc(const char* s, std::size_t d = 3) { return parse_cycles(s, d); }

std::string failed_ids(const Report& r) {
  std::string s;
  for (const auto& c : r.checks())
    if (!c.pass) s += c.id + " ";
  return s;
}

}  // namespace

TEST_CASE("H_{M,N} construction") {
  auto s = build_example_MN(2, 2);
  CHECK(s.dimH == 4);
  CHECK(s.basisU.size() == 2);
  CHECK(s.basisV.size() == 2);
  // u_1 = e_1 (x) 1
  CHECK(s.basisU[0] == Vector{G(1), G(1), G(0), G(0)});

  auto s23 = build_example_MN(2, 3);
  CHECK(s23.dimH == 6);
  CHECK(alg_is_zero(s23.ipB1(s23.basisU[0], s23.basisU[1])));

  auto s32 = build_example_MN(3, 2);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l)
      CHECK(s32.ipB2(s32.basisV[k], s32.basisV[l]) == (k == l ? s32.algebraB2.unit() : s32.algebraB2.zero()));

  CHECK_THROWS_WITH_AS(build_example_MN(1, 3), doctest::Contains("InvalidParameter"), Error);
  CHECK_THROWS_AS(build_example_MN(3, 1), Error);
}

TEST_CASE("validate_axioms on the two examples") {
  for (auto [M, N] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
    Report r = validate_axioms(build_example_MN(M, N));
    INFO(failed_ids(r));
    CHECK(r.passed());
  }
  Report r = validate_axioms(build_example_alpha_beta(3, cyc("(123)"), cyc("(132)")));
  INFO(failed_ids(r));
  CHECK(r.passed());
  CHECK(validate_axioms(build_example_alpha_beta(3, cyc("(123)"), cyc("(123)"))).passed());
  CHECK(validate_axioms(build_example_alpha_beta(1, cyc("", 1), cyc("", 1))).passed());
}

TEST_CASE("non-commuting permutations break agreement of the left actions on A") {
  Report r = validate_axioms(build_example_alpha_beta(3, cyc("(12)"), cyc("(23)")));
  CHECK_FALSE(r.passed());
  const CheckResult* c = r.find("left_actions.agree_on_A");
  REQUIRE(c);
  CHECK_FALSE(c->pass);
  CHECK(c->witness.find("minimal idempotent") != std::string::npos);
}

TEST_CASE("dimension errors are exceptions, not report entries") {
  auto s = build_example_MN(2, 2);
  s.phi1.pop_back();
  CHECK_THROWS_WITH_AS(validate_axioms(s), doctest::Contains("DimensionMismatch"), Error);
  auto t = build_example_MN(2, 2);
  t.basisU.clear();
  CHECK_THROWS_AS(validate_axioms(t), Error);
}

TEST_CASE("axiom failures carry witnesses") {
  auto s = build_example_MN(2, 2);
  s.innerB1[0](0, 0) = -1;
  Report r = validate_axioms(s);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.find("innerB1.positivity")->pass);
  CHECK(!r.first_failure()->witness.empty());

  auto t = build_example_MN(2, 2);
  t.innerA[0](0, 1) = G::i();
  CHECK_FALSE(validate_axioms(t).find("innerA.conjugate_symmetry")->pass);
}

TEST_CASE("finite type") {
  CHECK(verify_finite_type(build_example_MN(2, 3)).passed());
  CHECK(verify_finite_type(build_example_alpha_beta(3, cyc("(123)"), cyc("(132)"))).passed());
  auto s = build_example_MN(3, 2);
  s.basisU.pop_back();
  Report r = verify_finite_type(s);
  const CheckResult* c = r.find("finite_type.reconstruction");
  REQUIRE(c);
  CHECK_FALSE(c->pass);
  CHECK(c->witness.find("basis vector") != std::string::npos);
}

TEST_CASE("derive_lambda") {
  auto s = build_example_MN(2, 2);
  LambdaMaps lm = derive_lambda(s);
  CHECK(lm.report.passed());
  // lambda_2(1_{B2}) = sum_i <u_i|u_i> coordinates = M
  CHECK(lm.lambda2 * s.algebraB2.unit() == Vector{G(2)});
  for (auto [M, N] : {std::pair{2, 3}, std::pair{3, 4}}) {
    auto t = build_example_MN(M, N);
    LambdaMaps l = derive_lambda(t);
    for (std::size_t k = 0; k < t.algebraB1.dim; ++k) CHECK(l.lambda1 * t.algebraB1.idempotent(k) == Vector{G(1)});
    CHECK(l.lambda1 * t.algebraB1.unit() == Vector{G(N)});
  }

  // Example 1: lambda_1 = alpha, lambda_2 = beta (permutation matrices)
  auto sig = cyc("(123)"), tau = cyc("(132)");
  auto e1 = build_example_alpha_beta(3, sig, tau);
  LambdaMaps le = derive_lambda(e1);
  CHECK(le.report.passed());
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(le.lambda1(sig[j], j) == G(1));
    CHECK(le.lambda2(tau[j], j) == G(1));
  }
  // scalarized Grams agree: tau_A <.|.>_A == tau_A lambda_i <.|.>_B_i
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      Vector x = e1.basis_vector(p), y = e1.basis_vector(q);
      CHECK(le.lambda1 * e1.ipB1(x, y) == e1.ipA(x, y));
    }

  auto bad = build_example_MN(2, 2);
  bad.phi1[0] = ExactMatrix(4, 4);
  CHECK_THROWS_WITH_AS(derive_lambda(bad), doctest::Contains("LambdaNotFaithful"), Error);
}

TEST_CASE("strongly finite type and right A-bases") {
  auto s = build_example_MN(2, 2);
  CHECK(verify_strongly_finite_type(s).passed());
  auto e1 = build_example_alpha_beta(3, cyc("(123)"), cyc("(132)"));
  std::vector<Vector> one = {Vector(3, G(1))};
  CHECK(verify_strongly_finite_type(e1, one, one).passed());
  CHECK(verify_strongly_finite_type(e1).passed());
  std::vector<Vector> zero = {Vector(2)};
  Report r = verify_strongly_finite_type(s, zero, s.algebraB2.minimal_idempotents());
  CHECK_FALSE(r.passed());
  CHECK(r.find("strongly_finite.B1")->witness.find("z = e0") != std::string::npos);

  RightABasis rb = derive_right_A_basis(s, s.algebraB1.minimal_idempotents(), s.algebraB2.minimal_idempotents());
  CHECK(rb.fromU.size() == 4);
  CHECK(rb.report.passed());
  RightABasis rb1 = derive_right_A_basis(e1, one, one);
  CHECK(rb1.fromU.size() == 1);
  CHECK(rb1.report.passed());
}

TEST_CASE("cycle notation") {
  CHECK(parse_cycles("(123)", 3) == Permutation{1, 2, 0});
  CHECK(parse_cycles("(12)(3)", 3) == Permutation{1, 0, 2});
  CHECK(parse_cycles("()", 2) == Permutation{0, 1});
  CHECK(cycles_to_string(Permutation{1, 2, 0}) == "(123)");
  CHECK_THROWS_AS(parse_cycles("(14)", 3), Error);
  CHECK_THROWS_AS(parse_cycles("(121)", 3), Error);
  CHECK_THROWS_AS(build_example_alpha_beta(3, Permutation{0, 0, 1}, Permutation{0, 1, 2}), Error);
}

TEST_CASE("validation is deterministic") {
  auto s = build_example_alpha_beta(3, cyc("(12)"), cyc("(23)"));
  Report a = validate_axioms(s), b = validate_axioms(s);
  REQUIRE(a.checks().size() == b.checks().size());
  for (std::size_t k = 0; k < a.checks().size(); ++k) {
    CHECK(a.checks()[k].id == b.checks()[k].id);
    CHECK(a.checks()[k].witness == b.checks()[k].witness);
  }
}
