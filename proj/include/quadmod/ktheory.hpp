#pragma once

#include "quadmod/integer_matrix.hpp"
#include "quadmod/relations.hpp"

namespace quadmod {

struct KGroups {
  FGAbelianGroup K0, K1;
  /// "K0 = Z/15, K1 = 0"
  std::string to_string() const { return "K0 = " + K0.to_string() + ", K1 = " + K1.to_string(); }
};

/// K0 = coker(I - lambda), K1 = ker(I - lambda) for a square integer matrix.
KGroups k_groups_from_matrix(const IntegerMatrix& lambda);

/// Closed form for H_{M,N}: coker and kernel of A + B - I.
KGroups k_groups(std::size_t M, std::size_t N);

/// lambda_circ on K0(B_circ) = Z^{minimal idempotents}; column p is the image of the
/// p-th idempotent. Each term S_i* P-bar S_i (and T_k* P-bar T_k) is read on level 1.
/// Throws AssumptionsViolated when S_i is not a partial isometry on the window, when
/// S_i S_i* fails to commute with a lifted idempotent, or when a term is not 0/1-valued.
IntegerMatrix lambda_circ_matrix(const GeneratorFamily& gen);

/// Same map summed over the whole basis before reading coordinates; only the total
/// needs nonnegative integer coordinates, so it survives a unitary change of basis.
IntegerMatrix lambda_circ_summed(const GeneratorFamily& gen);

/// Builds the depth-K Fock space and generators first (K >= 3).
IntegerMatrix lambda_circ_matrix(const QuadModuleSpec& spec, std::size_t K);

}  // namespace quadmod
