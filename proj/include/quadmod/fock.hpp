#pragma once

#include "quadmod/exact.hpp"
#include "quadmod/quad_module.hpp"
#include "quadmod/report.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace quadmod {

/// A quad module realized on C^dim: all actions and inner products as
/// matrices in a fixed basis. Level-0 data leaves the B_i-valued products empty.
struct ModuleData {
  std::size_t dim = 0;
  ActionTensor rightA, varphi1, varphi2, phi1, phi2;
  InnerTensor innerA, innerB1, innerB2;

  static ModuleData from_spec(const QuadModuleSpec& spec);
  ExactMatrix scalar_gram() const { return scalarize(innerA); }
};

/// left (x)_{B_i} right, quotiented by the null space of the scalarized Gram.
/// Ambient index of x_a (x) y_q is a * right.dim + q.
struct RelTensorSpace {
  ModuleData data;  // structure on the quotient basis
  int letter = 1;
  std::size_t leftDim = 0, rightDim = 0, ambientDim = 0;
  std::vector<std::size_t> pivots;  // ambient basis vectors whose classes form the quotient basis
  ExactMatrix classMap;             // dim x ambientDim, class of an ambient vector
  GramForm gramA;                   // scalarized A-valued Gram on the quotient
  Report report;                    // balancing, well-definedness, lambda consistency

  std::size_t dim() const { return data.dim; }
  /// classMap * (L (x) I), ambient columns.
  ExactMatrix class_of_left(const ExactMatrix& L) const;
  /// classMap * (I (x) R), ambient columns.
  ExactMatrix class_of_right(const ExactMatrix& R) const;
  /// L (x) I pushed to the quotient.
  ExactMatrix lift_left(const ExactMatrix& L) const { return class_of_left(L).select_cols(pivots); }
  ExactMatrix lift_right(const ExactMatrix& R) const { return class_of_right(R).select_cols(pivots); }
};

/// `quotient = false` keeps the full algebraic tensor (used to compare bracketings).
RelTensorSpace relative_tensor(const ModuleData& left, int i, const ModuleData& right, const LambdaMaps& lambda,
                               bool quotient = true);

/// Summand H (x)_{i1} ... (x)_{i_{n-1}} H of F_n.
struct WordSpace {
  std::vector<int> letters;
  std::size_t offset = 0;  // within its level
  std::size_t child = 0;   // index of the tail word at level n-1 (n >= 2)
  std::shared_ptr<const RelTensorSpace> tensor;  // null at level 1
  std::shared_ptr<const ModuleData> data;        // aliases tensor->data from level 2 on
  std::size_t dim() const { return data->dim; }
};

/// Level-graded operator: one optional dense block per (row level, column level).
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(std::vector<std::size_t> levelDims);

  std::size_t levels() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const ExactMatrix* block(std::size_t r, std::size_t c) const {
    const auto& b = blocks_[r * dims_.size() + c];
    return b ? &*b : nullptr;
  }
  /// Creates a zero block on first access.
  ExactMatrix& block_mut(std::size_t r, std::size_t c);
  void set_block(std::size_t r, std::size_t c, ExactMatrix b);

  /// Common level shift of all nonzero blocks; nullopt when mixed.
  std::optional<int> degree() const;
  bool is_zero() const;
  ExactMatrix to_dense() const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(const GaussianRational& s);
  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(FockOperator a, const GaussianRational& s) { return a *= s; }
  friend FockOperator operator*(const GaussianRational& s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  /// Entrywise equality, absent blocks counting as zero.
  friend bool operator==(const FockOperator& a, const FockOperator& b);

 private:
  void require_same_shape(const FockOperator& o) const;
  std::vector<std::size_t> dims_;
  std::vector<std::optional<ExactMatrix>> blocks_;
};

/// Keeps the blocks F_n -> F_n and drops the rest.
FockOperator degree_zero_part(const FockOperator& op);

class TruncatedFock {
 public:
  const QuadModuleSpec& spec() const { return spec_; }
  const LambdaMaps& lambda() const { return lambda_; }
  std::size_t depth() const { return K_; }
  std::size_t total_dim() const { return total_; }
  const std::vector<std::size_t>& level_dims() const { return levelDims_; }
  const std::vector<WordSpace>& words(std::size_t level) const { return words_.at(level); }
  const ModuleData& level0() const { return level0_; }
  const GramForm& level_gram(std::size_t level) const { return levelGram_.at(level); }
  /// Whole direct-sum Gram (block diagonal), built on demand.
  GramForm gram() const;
  const Report& build_report() const { return report_; }

  FockOperator zero() const { return FockOperator(levelDims_); }
  FockOperator identity() const;
  /// Adjoint for the scalarized A-valued Gram, level by level.
  FockOperator adjoint(const FockOperator& op) const;

  /// Degree-0 operator acting by L on the first tensor factor at levels >= 1
  /// and by zero on level 0.
  FockOperator lift(const ExactMatrix& L) const;
  /// Right A-action (level 0 via psi_i).
  FockOperator right_action_A(const Vector& a) const;

  /// "level 3 word (1,2) basis 5"
  std::string locate(std::size_t level, std::size_t index) const;
  /// Empty when op vanishes on every column level in w; otherwise the first nonzero entry.
  std::string defect_witness(const FockOperator& op, Window w) const;

  static std::string word_name(const std::vector<int>& letters);

 private:
  friend TruncatedFock build_fock(const QuadModuleSpec&, std::size_t, std::size_t);
  QuadModuleSpec spec_;
  LambdaMaps lambda_;
  std::size_t K_ = 0;
  ModuleData level0_;
  std::vector<std::vector<WordSpace>> words_;  // words_[0] empty
  std::vector<std::size_t> levelDims_;
  std::vector<GramForm> levelGram_;
  std::size_t total_ = 0;
  Report report_;
};

/// Throws DepthTooSmall (K < 2), TooLarge (dimension budget), DegenerateQuotient.
TruncatedFock build_fock(const QuadModuleSpec& spec, std::size_t K, std::size_t maxDim = 20000);

enum class CreationKind { s, t };
/// s_xi or t_xi; annihilates level K.
FockOperator creation(const TruncatedFock& fock, CreationKind kind, const Vector& xi);

/// Module-map property and the level-by-level annihilation formulas for one creation operator.
Report verify_creation(const TruncatedFock& fock, CreationKind kind, const Vector& xi, const std::string& label);

/// phi-bar_i(b).
FockOperator left_action(const TruncatedFock& fock, int i, const Vector& b);
/// Homomorphism, *-preservation and faithfulness of phi-bar_1, phi-bar_2.
Report verify_left_actions(const TruncatedFock& fock);

struct Projections {
  std::vector<FockOperator> P;  // P_n, n = 0..K
  FockOperator Ps, Pt;          // words starting with 1 resp. 2 (levels >= 2)
};
Projections projections(const TruncatedFock& fock);
Report verify_projections(const TruncatedFock& fock, const Projections& pr);

/// u_{1/4} = diag(i^n).
FockOperator gauge_unitary(const TruncatedFock& fock);

struct GradedOperator {
  std::string name;
  FockOperator op;
  int degree = 0;
};
/// u op u^* = i^degree op, u^4 = 1.
Report gauge_check(const TruncatedFock& fock, const std::vector<GradedOperator>& ops);

/// Compares the two bracketings of each three-letter word on the raw triple tensor.
Report verify_associativity(const TruncatedFock& fock);

}  // namespace quadmod
