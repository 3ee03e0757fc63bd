#pragma once

#include "quadmod/integer_matrix.hpp"
#include "quadmod/relations.hpp"

#include <memory>
#include <optional>

namespace quadmod {

/// Partial isometries S_(i,k) = e_(i,k) S_i, T_(i,k) = e_(i,k) T_k on the
/// Fock space of H_{M,N}; index (i,k) -> i * N + k.
struct CKGenerators {
  std::size_t M = 0, N = 0;
  std::shared_ptr<const TruncatedFock> fock;
  GeneratorFamily gen;
  std::vector<FockOperator> sIdx, tIdx, idem;
  Report report;  // the defining relations of the generators
};

/// Throws InvalidParameter (M or N < 2) or DepthTooSmall (K < 3).
CKGenerators build_ck_generators(std::size_t M, std::size_t N, std::size_t K);
/// Reuses a Fock space already built over build_example_MN(M, N).
CKGenerators build_ck_generators(std::shared_ptr<const TruncatedFock> fock, std::size_t M, std::size_t N);

/// e = S S* + T T*, S_i = sum S_(i,k), the unit relation, the range relations, partial isometries.
Report verify_ck_relations(const CKGenerators& g);

struct CKMatrixBundle {
  IntegerMatrix A, B, H;
};
/// A = E_M (x) I_N, B = I_M (x) E_N, H = [[A, A], [B, B]].
CKMatrixBundle ck_matrix(std::size_t M, std::size_t N);

/// Reads H back from the relations: row a lists the range projections
/// summing to X_a* X_a (S-indices first). The report compares it with ck_matrix.
IntegerMatrix ck_matrix_from_relations(const CKGenerators& g, Report& rep);

struct Aperiodicity {
  bool aperiodic = false;
  std::size_t exponent = 0;  // least p with m^p > 0 entrywise
};
/// Boolean powers up to the Wielandt bound (n-1)^2 + 1.
Aperiodicity is_aperiodic(const IntegerMatrix& m);

/// Merges identical columns (representative = smallest index) and sums the rows of each class.
IntegerMatrix column_amalgamation(const IntegerMatrix& m);

/// Example 1 relations for U = s_1, V = t_1 on a depth-K Fock space, plus an
/// informational record of whether U* x U realizes alpha or beta.
Report verify_prop_7_1(std::size_t d, const Permutation& sigma, const Permutation& tau, std::size_t K);

}  // namespace quadmod
