#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace quadmod {

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix from_ints(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntegerMatrix transpose() const;
  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) = default;

  /// Aligned plain-text grid, one row per line.
  std::string to_string() const;
  std::vector<std::vector<long>> to_longs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

IntegerMatrix kron(const IntegerMatrix& a, const IntegerMatrix& b);

/// U * M * V = D with U, V unimodular, D diagonal, d_1 | d_2 | ..., zeros last.
struct SmithForm {
  IntegerMatrix U, D, V;
};
/// Pivot = smallest nonzero absolute value, ties broken by row then column.
SmithForm smith_normal_form(const IntegerMatrix& m);

/// Fraction-free (Bareiss) determinant.
mpz_class determinant(const IntegerMatrix& m);

struct FGAbelianGroup {
  std::vector<mpz_class> invariantFactors;  // each > 1, dividing the next
  std::size_t freeRank = 0;

  /// "Z^2 ⊕ Z/2 ⊕ Z/6", "Z/3", "Z", "0".
  std::string to_string() const;
  bool is_trivial() const { return invariantFactors.empty() && freeRank == 0; }
  /// Product of the factors; meaningful for finite groups.
  mpz_class order() const;
  friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;
};

FGAbelianGroup cokernel(const IntegerMatrix& m);
std::size_t integer_rank(const IntegerMatrix& m);
/// cols - rank.
std::size_t kernel_rank(const IntegerMatrix& m);
FGAbelianGroup free_group(std::size_t rank);

}  // namespace quadmod
