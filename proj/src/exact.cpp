#include "quadmod/exact.hpp"
#include "quadmod/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace quadmod {

// --- GaussianRational -------------------------------------------------------

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_.swap(re);
  im_.swap(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error("DivisionByZero", "Gaussian rational division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  mpq_class n = o.norm2();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

void GaussianRational::add_product(const GaussianRational& a, const GaussianRational& b) {
  if (a.is_real() && b.is_real()) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ - a.im_ * b.im_;
  im_ += a.re_ * b.im_ + a.im_ * b.re_;
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = im_.get_str() + "i";
  if (sgn(re_) == 0) return imag;
  if (sgn(im_) > 0) return re_.get_str() + "+" + imag;
  return re_.get_str() + imag;
}

GaussianRational GaussianRational::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw Error("ParseError", "empty scalar");
  auto rational = [&](const std::string& t) {
    if (t.empty() || t == "+") return mpq_class(1);
    if (t == "-") return mpq_class(-1);
    std::string u = t[0] == '+' ? t.substr(1) : t;
    mpq_class q;
    if (q.set_str(u, 10) != 0 || u.find_first_not_of("-0123456789/") != std::string::npos)
      throw Error("ParseError", "bad rational '" + t + "'");
    q.canonicalize();
    return q;
  };
  if (s.back() != 'i') return {rational(s)};
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not leading
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') {
      cut = k;
      break;
    }
  if (cut == std::string::npos) return {0, rational(body)};
  return {rational(body.substr(0, cut)), rational(body.substr(cut))};
}

// --- ExactMatrix ------------------------------------------------------------

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, std::vector<GaussianRational> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw Error("DimensionMismatch", "entry count != rows*cols");
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
  return m;
}

ExactMatrix ExactMatrix::diagonal(std::span<const GaussianRational> d) {
  ExactMatrix m(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

ExactMatrix ExactMatrix::column(std::span<const GaussianRational> v) {
  return ExactMatrix(v.size(), 1, Vector(v.begin(), v.end()));
}

ExactMatrix ExactMatrix::from_ints(const std::vector<std::vector<long>>& rows) {
  std::size_t r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error("DimensionMismatch", "ragged integer matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const GaussianRational& z) { return z.is_zero(); });
}

Vector ExactMatrix::column_vector(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

ExactMatrix ExactMatrix::conj_transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!(*this)(r, c).is_zero()) t(c, r) = (*this)(r, c).conj();
  return t;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ExactMatrix ExactMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error("DimensionMismatch", "block out of range");
  ExactMatrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void ExactMatrix::set_block(std::size_t r0, std::size_t c0, const ExactMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error("DimensionMismatch", "block out of range");
  for (std::size_t r = 0; r < b.rows_; ++r)
    for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

ExactMatrix ExactMatrix::select_rows(std::span<const std::size_t> idx) const {
  ExactMatrix s(idx.size(), cols_);
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < cols_; ++c) s(r, c) = (*this)(idx[r], c);
  return s;
}

ExactMatrix ExactMatrix::select_cols(std::span<const std::size_t> idx) const {
  ExactMatrix s(rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) s(r, c) = (*this)(r, idx[c]);
  return s;
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("DimensionMismatch", "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!o.data_[k].is_zero()) data_[k] += o.data_[k];
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("DimensionMismatch", "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!o.data_[k].is_zero()) data_[k] -= o.data_[k];
  return *this;
}

ExactMatrix& ExactMatrix::operator*=(const GaussianRational& s) {
  if (s.is_zero()) {
    for (auto& z : data_) z = GaussianRational();
    return *this;
  }
  for (auto& z : data_)
    if (!z.is_zero()) z *= s;
  return *this;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) { return kernels::matmul_omp(a, b); }

Vector ExactMatrix::operator*(std::span<const GaussianRational> v) const {
  if (v.size() != cols_) throw Error("DimensionMismatch", "matrix-vector product");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      const auto& x = (*this)(r, c);
      if (!x.is_zero() && !v[c].is_zero()) out[r].add_product(x, v[c]);
    }
  return out;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string ExactMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c).to_string();
    os << ']';
  }
  os << ']';
  return os.str();
}

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          if (!b(p, q).is_zero()) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

ExactMatrix conj_transpose(const ExactMatrix& m) { return m.conj_transpose(); }

// --- elimination ------------------------------------------------------------

namespace {

// row[dst] -= f * row[src], touching only nonzero entries of src from col0 on.
void eliminate(ExactMatrix& m, std::size_t dst, std::size_t src, const GaussianRational& f, std::size_t col0) {
  for (std::size_t c = col0; c < m.cols(); ++c) {
    const auto& s = m(src, c);
    if (s.is_zero()) continue;
    m(dst, c) -= f * s;
  }
}

void swap_rows(ExactMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace

RowEchelon row_echelon(ExactMatrix m) {
  RowEchelon out;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < m.cols() && prow < m.rows(); ++c) {
    std::size_t r = prow;
    while (r < m.rows() && m(r, c).is_zero()) ++r;
    if (r == m.rows()) continue;
    swap_rows(m, prow, r);
    GaussianRational inv = GaussianRational(1) / m(prow, c);
    for (std::size_t k = c; k < m.cols(); ++k)
      if (!m(prow, k).is_zero()) m(prow, k) *= inv;
    for (std::size_t other = 0; other < m.rows(); ++other) {
      if (other == prow || m(other, c).is_zero()) continue;
      GaussianRational f = m(other, c);
      eliminate(m, other, prow, f, c);
    }
    out.pivot_cols.push_back(c);
    ++prow;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const ExactMatrix& m) {
  SpanTracker t(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) t.add(m.row(r));
  return t.rank();
}

std::vector<Vector> kernel_basis(const ExactMatrix& m) {
  RowEchelon e = row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
      if (!e.reduced(r, f).is_zero()) v[e.pivot_cols[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const ExactMatrix& m, std::span<const GaussianRational> b) {
  if (b.size() != m.rows()) throw Error("DimensionMismatch", "solve right-hand side");
  ExactMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  RowEchelon e = row_echelon(std::move(aug));
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
    if (e.pivot_cols[r] == m.cols()) return std::nullopt;
    x[e.pivot_cols[r]] = e.reduced(r, m.cols());
  }
  return x;
}

ExactMatrix inverse(const ExactMatrix& m) {
  if (!m.is_square()) throw Error("DimensionMismatch", "inverse of non-square matrix");
  std::size_t n = m.rows();
  ExactMatrix aug(n, 2 * n);
  aug.set_block(0, 0, m);
  for (std::size_t k = 0; k < n; ++k) aug(k, n + k) = 1;
  RowEchelon e = row_echelon(std::move(aug));
  if (e.pivot_cols.size() < n || (n > 0 && e.pivot_cols[n - 1] != n - 1))
    throw Error("SingularMatrix", "matrix of size " + std::to_string(n) + " is not invertible");
  return e.reduced.block(0, n, n, n);
}

// --- SpanTracker ------------------------------------------------------------

SpanTracker::Entries SpanTracker::reduce(std::map<std::size_t, GaussianRational> w) const {
  // row entries never sit left of their pivot, so one left-to-right sweep suffices
  for (auto it = w.begin(); it != w.end();) {
    if (it->second.is_zero()) {
      it = w.erase(it);
      continue;
    }
    const long owner = pivot_owner_.empty() ? -1 : pivot_owner_[it->first];
    if (owner < 0) {
      ++it;
      continue;
    }
    const GaussianRational f = it->second;
    for (const auto& [col, val] : rows_[owner].entries) w[col] -= f * val;
  }
  return Entries(std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
}

namespace {
std::map<std::size_t, GaussianRational> nonzeros(std::span<const GaussianRational> v) {
  std::map<std::size_t, GaussianRational> w;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (!v[c].is_zero()) w.emplace_hint(w.end(), c, v[c]);
  return w;
}
}  // namespace

bool SpanTracker::insert(Entries r) {
  if (r.empty()) return false;
  if (pivot_owner_.empty()) pivot_owner_.assign(dim_, -1);
  GaussianRational inv = GaussianRational(1) / r.front().second;
  for (auto& e : r) e.second *= inv;
  pivot_owner_[r.front().first] = static_cast<long>(rows_.size());
  rows_.push_back({r.front().first, std::move(r)});
  return true;
}

bool SpanTracker::add(std::span<const GaussianRational> v) {
  if (v.size() != dim_) throw Error("DimensionMismatch", "span tracker vector length");
  return insert(reduce(nonzeros(v)));
}

bool SpanTracker::add_sparse(const Entries& v) {
  std::map<std::size_t, GaussianRational> w;
  for (const auto& [c, x] : v) {
    if (c >= dim_) throw Error("DimensionMismatch", "span tracker index out of range");
    w[c] += x;
  }
  return insert(reduce(std::move(w)));
}

bool SpanTracker::contains(std::span<const GaussianRational> v) const {
  if (v.size() != dim_) throw Error("DimensionMismatch", "span tracker vector length");
  return reduce(nonzeros(v)).empty();
}

// --- Hermitian forms --------------------------------------------------------

std::string to_string(PsdClass c) {
  switch (c) {
    case PsdClass::positive_definite: return "positive_definite";
    case PsdClass::positive_semidefinite_with_kernel: return "positive_semidefinite_with_kernel";
    case PsdClass::indefinite: return "indefinite";
  }
  return "?";
}

namespace {
void require_hermitian(const ExactMatrix& g) {
  if (!g.is_square() || !(g == g.conj_transpose())) throw Error("NotHermitian", "G^H != G");
}
}  // namespace

GramForm::GramForm(ExactMatrix g) : g_(std::move(g)) { require_hermitian(g_); }

const ExactMatrix& GramForm::inverse() const {
  if (!inv_) {
    try {
      inv_ = quadmod::inverse(g_);
    } catch (const Error& e) {
      if (e.kind() != "SingularMatrix") throw;
      throw Error("SingularGram", "Gram form of dimension " + std::to_string(dim()) + " is not invertible");
    }
  }
  return *inv_;
}

PsdClass psd_check(const ExactMatrix& g) {
  require_hermitian(g);
  ExactMatrix a = g;
  std::vector<std::size_t> live(g.rows());
  for (std::size_t k = 0; k < live.size(); ++k) live[k] = k;
  while (!live.empty()) {
    // diagonal entries of a Hermitian matrix are real
    std::optional<std::size_t> pivot;
    for (auto k : live) {
      int s = sgn(a(k, k).re());
      if (s < 0) return PsdClass::indefinite;
      if (s > 0 && !pivot) pivot = k;
    }
    if (!pivot) {
      for (auto r : live)
        for (auto c : live)
          if (!a(r, c).is_zero()) return PsdClass::indefinite;
      return PsdClass::positive_semidefinite_with_kernel;
    }
    std::size_t p = *pivot;
    live.erase(std::find(live.begin(), live.end(), p));
    GaussianRational d = a(p, p);
    for (auto r : live) {
      if (a(r, p).is_zero()) continue;
      GaussianRational f = a(r, p) / d;
      for (auto c : live)
        if (!a(p, c).is_zero()) a(r, c) -= f * a(p, c);
    }
  }
  return PsdClass::positive_definite;
}

ExactMatrix gram_adjoint(const ExactMatrix& t, const GramForm& gDom, const GramForm& gCod) {
  if (t.cols() != gDom.dim() || t.rows() != gCod.dim())
    throw Error("DimensionMismatch", "gram_adjoint operand shapes");
  return gDom.inverse() * (t.conj_transpose() * gCod.matrix());
}

GaussianRational pairing(std::span<const GaussianRational> x, const ExactMatrix& g,
                         std::span<const GaussianRational> y) {
  Vector gy = g * y;
  GaussianRational s;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!x[k].is_zero() && !gy[k].is_zero()) s.add_product(x[k].conj(), gy[k]);
  return s;
}

}  // namespace quadmod
