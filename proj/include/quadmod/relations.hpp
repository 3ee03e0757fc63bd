#pragma once

#include "quadmod/fock.hpp"

#include <functional>
#include <string>
#include <vector>

namespace quadmod {

/// Concrete model of the algebra generated by phi_1(B_1) and phi_2(B_2) on H.
/// Only the commutative case with diagonal generators is supported; the
/// minimal idempotents are indicators of the coordinate classes that no
/// generator separates, ordered by smallest coordinate.
struct BCircModel {
  std::vector<ExactMatrix> idempotents;  // dimH x dimH, diagonal 0/1
  std::size_t dim() const { return idempotents.size(); }
  /// Coordinates of L in the idempotent basis; throws NotInBCirc.
  Vector coordinates(const ExactMatrix& L) const;
  bool contains(const ExactMatrix& L) const;
};

/// Throws AssumptionsViolated when a generator is not diagonal.
BCircModel bcirc_model(const QuadModuleSpec& spec);

struct GeneratorFamily {
  const TruncatedFock* fock = nullptr;
  std::vector<FockOperator> S, T;    // s_{u_i}, t_{v_k}
  std::vector<FockOperator> Sa, Ta;  // their adjoints
  BCircModel bcirc;
  Window window;  // interior window [2, K-1]
  Report report;  // expansion of s_xi, t_xi over the basis

  /// phi-bar_i; replaceable to model a corrupted Phi_i.
  std::function<FockOperator(int, const Vector&)> leftAction;

  FockOperator Phi1(const Vector& z) const { return leftAction(1, z); }
  FockOperator Phi2(const Vector& w) const { return leftAction(2, w); }
  /// Sum_ij S_i Phi1(<u_i|L u_j>) S_j* + Sum_kl T_k Phi2(<v_k|L v_l>) T_l*.
  FockOperator pi_formula(const ExactMatrix& L) const;
  std::size_t M() const { return S.size(); }
  std::size_t N() const { return T.size(); }
};

/// Requires depth >= 3 (DepthTooSmall).
GeneratorFamily make_generators(const TruncatedFock& fock);

/// Linearity, s_{L xi phi(z)} = L s_xi Phi(z), s_zeta* L s_xi = Phi(<zeta|L xi>) for L in the model.
Report verify_section3(const GeneratorFamily& gen);
/// S*T orthogonality, range projections, unit decomposition, inner products, intertwinings.
Report verify_section4(const GeneratorFamily& gen);
/// The eight relations (H) and S_i* z S_j = <u_i|phi(z) u_j>.
Report verify_relations_H(const GeneratorFamily& gen);
/// Membership in A and trace formulas, the z/w/z*/w*/zw/wz expansions, the reconstruction of B_circ elements.
Report verify_section5_core(const GeneratorFamily& gen);

struct PiResult {
  FockOperator op;
  Report report;
};
/// Throws NotInBCirc when L is outside the model.
PiResult compute_pi(const GeneratorFamily& gen, const ExactMatrix& L);

/// dim span{ S_mu b S_nu* : |mu| = |nu| = m, b in the model } on the top level, m = 0..n.
std::vector<std::size_t> core_filtration_dims(const GeneratorFamily& gen, std::size_t n);

/// Single-entry corruptions of the H_{2,2} spec used for mutation testing.
struct Mutation {
  std::string name;
  std::function<void(QuadModuleSpec&)> apply;
};
const std::vector<Mutation>& mutation_catalog();

}  // namespace quadmod
