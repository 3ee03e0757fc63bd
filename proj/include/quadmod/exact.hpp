#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadmod {

/// Raised by every module for contract violations; `kind` is a stable
/// machine-readable tag (e.g. "SingularGram", "DimensionMismatch").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), detail_(what) {}
  const std::string& kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string kind_;
  std::string detail_;
};

/// Element of Q[i]. Both parts are arbitrary-precision rationals kept in
/// canonical form, so equality is structural.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(implicit)
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {0, 1}; }
  static GaussianRational ratio(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return {q};
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, always real and nonnegative.
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  /// this += a * b without temporaries for the real parts.
  void add_product(const GaussianRational& a, const GaussianRational& b);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// "3/4", "-i", "1/2+3i", ... deterministic.
  std::string to_string() const;
  /// Parse the to_string() format back.
  static GaussianRational parse(const std::string& text);

 private:
  mpq_class re_;
  mpq_class im_;
};

using Vector = std::vector<GaussianRational>;

/// Dense row-major matrix over Q[i].
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExactMatrix(std::size_t rows, std::size_t cols, std::vector<GaussianRational> data);

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix diagonal(std::span<const GaussianRational> d);
  static ExactMatrix column(std::span<const GaussianRational> v);
  /// Build from nested integer lists, handy in tests.
  static ExactMatrix from_ints(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  GaussianRational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const GaussianRational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const GaussianRational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<GaussianRational>& data() const { return data_; }

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }
  Vector column_vector(std::size_t c) const;

  ExactMatrix conj_transpose() const;
  ExactMatrix transpose() const;
  ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ExactMatrix& b);
  ExactMatrix select_rows(std::span<const std::size_t> idx) const;
  ExactMatrix select_cols(std::span<const std::size_t> idx) const;

  ExactMatrix& operator+=(const ExactMatrix& o);
  ExactMatrix& operator-=(const ExactMatrix& o);
  ExactMatrix& operator*=(const GaussianRational& s);
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const GaussianRational& s) { return a *= s; }
  friend ExactMatrix operator*(const GaussianRational& s, ExactMatrix a) { return a *= s; }
  /// Uses the parallel kernel; see kernels.hpp for the serial reference.
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  Vector operator*(std::span<const GaussianRational> v) const;

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussianRational> data_;
};

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix conj_transpose(const ExactMatrix& m);

/// Reduced row echelon form with leftmost-pivot / smallest-row rule.
struct RowEchelon {
  ExactMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};
RowEchelon row_echelon(ExactMatrix m);
std::size_t rank(const ExactMatrix& m);

/// Exact basis of the right null space, one vector per free column of the
/// reduced echelon form (free entry set to 1).
std::vector<Vector> kernel_basis(const ExactMatrix& m);

/// Some x with m*x = b, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const ExactMatrix& m, std::span<const GaussianRational> b);

/// Throws Error("SingularMatrix") when not invertible.
ExactMatrix inverse(const ExactMatrix& m);

/// Incremental echelon basis over sparse vectors; used for span dimensions
/// of large families (operator spans, algebra closures).
class SpanTracker {
 public:
  explicit SpanTracker(std::size_t dim) : dim_(dim) {}
  /// Returns true when v was independent of everything added so far.
  bool add(std::span<const GaussianRational> v);
  /// Same for a vector given by its nonzero (index, value) entries, in any order.
  bool add_sparse(const std::vector<std::pair<std::size_t, GaussianRational>>& v);
  bool contains(std::span<const GaussianRational> v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  struct SparseRow {
    std::size_t pivot;
    std::vector<std::pair<std::size_t, GaussianRational>> entries;  // sorted, pivot entry == 1
  };
  using Entries = std::vector<std::pair<std::size_t, GaussianRational>>;
  Entries reduce(std::map<std::size_t, GaussianRational> w) const;
  bool insert(Entries r);

  std::size_t dim_;
  std::vector<SparseRow> rows_;        // in insertion order
  std::vector<long> pivot_owner_ = {};  // column -> row index, -1 if free
};

// ---------------------------------------------------------------------------
// Hermitian forms

enum class PsdClass { positive_definite, positive_semidefinite_with_kernel, indefinite };
std::string to_string(PsdClass c);

/// Hermitian form G = G^H on a finite-dimensional space.
class GramForm {
 public:
  GramForm() = default;
  /// Throws Error("NotHermitian").
  explicit GramForm(ExactMatrix g);
  const ExactMatrix& matrix() const { return g_; }
  std::size_t dim() const { return g_.rows(); }
  /// Lazily computed; throws Error("SingularGram").
  const ExactMatrix& inverse() const;

 private:
  ExactMatrix g_;
  mutable std::optional<ExactMatrix> inv_;
};

/// Exact LDL^H classification with symmetric pivoting. Throws NotHermitian.
PsdClass psd_check(const ExactMatrix& g);
inline PsdClass psd_check(const GramForm& g) { return psd_check(g.matrix()); }

/// T* with <Tx|y>_cod = <x|T* y>_dom, i.e. gDom^{-1} T^H gCod.
ExactMatrix gram_adjoint(const ExactMatrix& t, const GramForm& gDom, const GramForm& gCod);

/// Sesquilinear pairing x^H G y.
GaussianRational pairing(std::span<const GaussianRational> x, const ExactMatrix& g,
                         std::span<const GaussianRational> y);

}  // namespace quadmod
