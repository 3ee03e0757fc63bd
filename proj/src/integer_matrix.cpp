#include "quadmod/integer_matrix.hpp"

#include "quadmod/exact.hpp"

#include <algorithm>
#include <sstream>

namespace quadmod {

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_ints(const std::vector<std::vector<long>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows[0].size();
  IntegerMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error("DimensionMismatch", "ragged integer matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw Error("DimensionMismatch", "integer matrix product");
  IntegerMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("DimensionMismatch", "integer matrix sum");
  IntegerMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("DimensionMismatch", "integer matrix difference");
  IntegerMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

std::string IntegerMatrix::to_string() const {
  std::size_t w = 1;
  for (const auto& x : data_) w = std::max(w, x.get_str().size());
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      std::string s = (*this)(i, j).get_str();
      os << (j ? " " : "") << std::string(w - s.size(), ' ') << s;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::vector<long>> IntegerMatrix::to_longs() const {
  std::vector<std::vector<long>> out(rows_, std::vector<long>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!(*this)(i, j).fits_slong_p()) throw Error("Overflow", "entry does not fit in a long");
      out[i][j] = (*this)(i, j).get_si();
    }
  return out;
}

IntegerMatrix kron(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// --- Smith normal form --------------------------------------------------------------

namespace {

void swap_rows(IntegerMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntegerMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row a += q * row b
void add_row(IntegerMatrix& m, std::size_t a, std::size_t b, const mpz_class& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += q * m(b, j);
}
void add_col(IntegerMatrix& m, std::size_t a, std::size_t b, const mpz_class& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += q * m(i, b);
}

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m) {
  SmithForm f{IntegerMatrix::identity(m.rows()), m, IntegerMatrix::identity(m.cols())};
  IntegerMatrix& D = f.D;
  const std::size_t R = m.rows(), C = m.cols();

  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    for (;;) {
      // smallest nonzero |entry| in the trailing block
      bool found = false;
      std::size_t pr = 0, pc = 0;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j) {
          if (sgn(D(i, j)) == 0) continue;
          if (!found || abs(D(i, j)) < abs(D(pr, pc))) {
            found = true;
            pr = i;
            pc = j;
          }
        }
      if (!found) return f;  // trailing block is zero
      swap_rows(D, t, pr);
      swap_rows(f.U, t, pr);
      swap_cols(D, t, pc);
      swap_cols(f.V, t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        add_row(D, i, t, -q);
        add_row(f.U, i, t, -q);
        clean = clean && sgn(D(i, t)) == 0;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        add_col(D, j, t, -q);
        add_col(f.V, j, t, -q);
        clean = clean && sgn(D(t, j)) == 0;
      }
      if (!clean) continue;

      // divisibility: pull a non-multiple into row t and start over
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            add_row(D, t, i, 1);
            add_row(f.U, t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (sgn(D(t, t)) < 0) {
      for (std::size_t j = 0; j < C; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < R; ++j) f.U(t, j) = -f.U(t, j);
    }
  }
  return f;
}

mpz_class determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw Error("DimensionMismatch", "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a = m;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      swap_rows(a, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// --- groups ---------------------------------------------------------------------------------

std::string FGAbelianGroup::to_string() const {
  std::vector<std::string> parts;
  if (freeRank == 1) parts.push_back("Z");
  if (freeRank > 1) parts.push_back("Z^" + std::to_string(freeRank));
  for (const auto& d : invariantFactors) parts.push_back("Z/" + d.get_str());
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) s += " ⊕ " + parts[k];
  return s;
}

mpz_class FGAbelianGroup::order() const {
  mpz_class o = 1;
  for (const auto& d : invariantFactors) o *= d;
  return o;
}

std::size_t integer_rank(const IntegerMatrix& m) {
  SmithForm f = smith_normal_form(m);
  std::size_t r = 0;
  for (std::size_t t = 0; t < std::min(m.rows(), m.cols()); ++t)
    if (sgn(f.D(t, t)) != 0) ++r;
  return r;
}

FGAbelianGroup cokernel(const IntegerMatrix& m) {
  SmithForm f = smith_normal_form(m);
  FGAbelianGroup g;
  std::size_t r = 0;
  for (std::size_t t = 0; t < std::min(m.rows(), m.cols()); ++t) {
    const mpz_class& d = f.D(t, t);
    if (sgn(d) == 0) continue;
    ++r;
    if (d > 1) g.invariantFactors.push_back(d);
  }
  g.freeRank = m.rows() - r;
  return g;
}

std::size_t kernel_rank(const IntegerMatrix& m) { return m.cols() - integer_rank(m); }

FGAbelianGroup free_group(std::size_t rank) {
  FGAbelianGroup g;
  g.freeRank = rank;
  return g;
}

}  // namespace quadmod
