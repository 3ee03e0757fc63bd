#pragma once

#include "quadmod/exact.hpp"
#include "quadmod/report.hpp"

#include <string>
#include <vector>

namespace quadmod {

/// The diagonal algebra C^dim: coordinatewise product, conjugation as *.
struct FinDimCommAlgebra {
  std::size_t dim = 0;
  std::string label;

  Vector unit() const { return Vector(dim, GaussianRational(1)); }
  Vector zero() const { return Vector(dim); }
  /// k-th minimal idempotent.
  Vector idempotent(std::size_t k) const;
  std::vector<Vector> minimal_idempotents() const;
};

Vector alg_mul(const Vector& a, const Vector& b);
Vector alg_conj(const Vector& a);
Vector alg_add(const Vector& a, const Vector& b);
bool alg_is_zero(const Vector& a);

/// Linear map between diagonal algebras, target.dim x source.dim.
struct AlgebraHom {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  ExactMatrix matrix;

  Vector operator()(const Vector& a) const { return matrix * a; }
  static AlgebraHom from_matrix(ExactMatrix m);
  /// Multiplicative on minimal idempotents; unital if requested.
  bool is_multiplicative(std::string* witness = nullptr) const;
  bool is_unital() const;
};

/// One dimH x dimH matrix per algebra basis element. Right actions are also
/// stored as matrices acting on column vectors, so xi.b = act(R, b) * xi.
using ActionTensor = std::vector<ExactMatrix>;
/// One Gram matrix per algebra coordinate: <x|y>_c = x^H G_c y.
using InnerTensor = std::vector<ExactMatrix>;

ExactMatrix act(const ActionTensor& t, const Vector& b);
Vector inner(const InnerTensor& g, const Vector& x, const Vector& y);
/// Coordinate sum of the per-coordinate Grams.
ExactMatrix scalarize(const InnerTensor& g);

struct QuadModuleSpec {
  std::string name;
  FinDimCommAlgebra algebraA, algebraB1, algebraB2;
  AlgebraHom embed1, embed2;  // iota_i : A -> B_i
  AlgebraHom psi1, psi2;      // right A-actions on B_i
  std::size_t dimH = 0;
  ActionTensor rightA;
  ActionTensor varphi1, varphi2;  // right B_i actions on H
  ActionTensor phi1, phi2;        // left B_i actions on H
  InnerTensor innerA, innerB1, innerB2;
  std::vector<Vector> basisU, basisV;

  /// Throws DimensionMismatch on malformed tensors.
  void check_dimensions() const;
  Vector ipA(const Vector& x, const Vector& y) const { return inner(innerA, x, y); }
  Vector ipB1(const Vector& x, const Vector& y) const { return inner(innerB1, x, y); }
  Vector ipB2(const Vector& x, const Vector& y) const { return inner(innerB2, x, y); }
  Vector basis_vector(std::size_t p) const;
};

Report validate_axioms(const QuadModuleSpec& spec);
Report verify_finite_type(const QuadModuleSpec& spec);

/// lambda_i as dimA x dimB_i matrices.
struct LambdaMaps {
  ExactMatrix lambda1;
  ExactMatrix lambda2;
  Report report;
};
/// Throws LambdaNotFaithful, or NotInA when a trace value leaves iota(A).
LambdaMaps derive_lambda(const QuadModuleSpec& spec);

Report verify_strongly_finite_type(const QuadModuleSpec& spec, const std::vector<Vector>& eBasis,
                                   const std::vector<Vector>& fBasis);
Report verify_strongly_finite_type(const QuadModuleSpec& spec);  // minimal idempotents

struct RightABasis {
  std::vector<Vector> fromU;  // u_i varphi1(e_j)
  std::vector<Vector> fromV;  // v_k varphi2(f_l)
  Report report;
};
RightABasis derive_right_A_basis(const QuadModuleSpec& spec, const std::vector<Vector>& eBasis,
                                 const std::vector<Vector>& fBasis);

/// H_{M,N} = C^M (x) C^N, index i*N + k.
QuadModuleSpec build_example_MN(std::size_t M, std::size_t N);

/// Permutation of {0..d-1}; p[j] is the image of j.
using Permutation = std::vector<std::size_t>;
/// Parses cycle notation with 1-based letters, e.g. "(123)", "(12)(3)", "()".
Permutation parse_cycles(const std::string& text, std::size_t d);
std::string cycles_to_string(const Permutation& p);

/// Example over A = B1 = B2 = C^d twisted by the automorphisms alpha, beta
/// with alpha(e_j) = e_{sigma(j)}, beta(e_j) = e_{tau(j)}.
QuadModuleSpec build_example_alpha_beta(std::size_t d, const Permutation& sigma, const Permutation& tau);

}  // namespace quadmod
