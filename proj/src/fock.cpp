#include "quadmod/fock.hpp"

#include <algorithm>
#include <map>

namespace quadmod {

// --- ModuleData / relative tensor ------------------------------------------------

ModuleData ModuleData::from_spec(const QuadModuleSpec& s) {
  ModuleData d;
  d.dim = s.dimH;
  d.rightA = s.rightA;
  d.varphi1 = s.varphi1;
  d.varphi2 = s.varphi2;
  d.phi1 = s.phi1;
  d.phi2 = s.phi2;
  d.innerA = s.innerA;
  d.innerB1 = s.innerB1;
  d.innerB2 = s.innerB2;
  return d;
}

ExactMatrix RelTensorSpace::class_of_left(const ExactMatrix& L) const {
  const std::size_t n = rightDim, d = dim();
  ExactMatrix out(d, ambientDim);
  for (std::size_t a = 0; a < leftDim; ++a)
    for (std::size_t a2 = 0; a2 < leftDim; ++a2) {
      const auto& l = L(a2, a);
      if (l.is_zero()) continue;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t q = 0; q < n; ++q) {
          const auto& x = classMap(r, a2 * n + q);
          if (!x.is_zero()) out(r, a * n + q).add_product(l, x);
        }
    }
  return out;
}

ExactMatrix RelTensorSpace::class_of_right(const ExactMatrix& R) const {
  const std::size_t n = rightDim, d = dim();
  ExactMatrix out(d, ambientDim);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t q2 = 0; q2 < n; ++q2) {
      const auto& rr = R(q2, q);
      if (rr.is_zero()) continue;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t a = 0; a < leftDim; ++a) {
          const auto& x = classMap(r, a * n + q2);
          if (!x.is_zero()) out(r, a * n + q).add_product(rr, x);
        }
    }
  return out;
}

namespace {

std::string first_diff(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return "shape mismatch";
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!(a(r, c) == b(r, c)))
        return "entry (" + std::to_string(r) + "," + std::to_string(c) + "): " + a(r, c).to_string() + " vs " +
               b(r, c).to_string();
  return {};
}

// <x_a (x) y_p | x_b (x) y_q>_c = sum_beta X_i[beta](a,b) (Y_c[gamma] Yphi[beta])(p,q)
InnerTensor ambient_inner(const InnerTensor& Xi, const ActionTensor& Yphi, const InnerTensor& Yc, std::size_t m,
                          std::size_t n) {
  InnerTensor out;
  for (const auto& yg : Yc) {
    ExactMatrix G(m * n, m * n);
    for (std::size_t beta = 0; beta < Xi.size(); ++beta) {
      ExactMatrix Mb = yg * Yphi[beta];
      if (Mb.is_zero()) continue;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const auto& x = Xi[beta](a, b);
          if (x.is_zero()) continue;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
              if (!Mb(p, q).is_zero()) G(a * n + p, b * n + q).add_product(x, Mb(p, q));
        }
    }
    out.push_back(std::move(G));
  }
  return out;
}

InnerTensor combine(const ExactMatrix& lambda, const InnerTensor& slices) {
  InnerTensor out;
  for (std::size_t c = 0; c < lambda.rows(); ++c) {
    ExactMatrix g(slices[0].rows(), slices[0].cols());
    for (std::size_t b = 0; b < slices.size(); ++b)
      if (!lambda(c, b).is_zero()) g += slices[b] * lambda(c, b);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

RelTensorSpace relative_tensor(const ModuleData& X, int i, const ModuleData& Y, const LambdaMaps& lam, bool quotient) {
  if (i != 1 && i != 2) throw Error("InvalidParameter", "tensor letter must be 1 or 2");
  const InnerTensor& Xi = i == 1 ? X.innerB1 : X.innerB2;
  const ActionTensor& Yphi = i == 1 ? Y.phi1 : Y.phi2;
  if (Xi.empty() || Y.innerB1.empty() || Y.innerB2.empty())
    throw Error("DimensionMismatch", "relative tensor factors need B-valued inner products");
  RelTensorSpace t;
  t.letter = i;
  t.leftDim = X.dim;
  t.rightDim = Y.dim;
  t.ambientDim = X.dim * Y.dim;
  const std::size_t m = X.dim, n = Y.dim, amb = t.ambientDim;

  InnerTensor B1 = ambient_inner(Xi, Yphi, Y.innerB1, m, n);
  InnerTensor B2 = ambient_inner(Xi, Yphi, Y.innerB2, m, n);
  InnerTensor A = combine(lam.lambda1, B1);
  InnerTensor A2 = combine(lam.lambda2, B2);
  {
    std::string w;
    for (std::size_t c = 0; c < A.size() && w.empty(); ++c) {
      std::string d = first_diff(A[c], A2[c]);
      if (!d.empty()) w = "A-coordinate " + std::to_string(c) + ": " + d;
    }
    t.report.add("tensor.lambda_consistency", "A-valued inner product via lambda_1 equals via lambda_2", w.empty(), w);
  }
  ExactMatrix scalar = scalarize(A);

  if (quotient) {
    SpanTracker span(amb);
    for (std::size_t r = 0; r < amb; ++r)
      if (span.add(scalar.row(r))) t.pivots.push_back(r);
    ExactMatrix gpp = scalar.select_rows(t.pivots).select_cols(t.pivots);
    t.classMap = t.pivots.empty() ? ExactMatrix(0, amb) : inverse(gpp) * scalar.select_rows(t.pivots);
  } else {
    for (std::size_t r = 0; r < amb; ++r) t.pivots.push_back(r);
    t.classMap = ExactMatrix::identity(amb);
  }
  const std::size_t d = t.pivots.size();
  t.data.dim = d;
  auto sub = [&](const InnerTensor& g) {
    InnerTensor out;
    for (const auto& x : g) out.push_back(x.select_rows(t.pivots).select_cols(t.pivots));
    return out;
  };
  t.data.innerA = sub(A);
  t.data.innerB1 = sub(B1);
  t.data.innerB2 = sub(B2);
  t.gramA = GramForm(scalarize(t.data.innerA));
  if (d == 0) {
    t.report.add("tensor.nondegenerate", "relative tensor product is nonzero", false, "quotient is 0-dimensional");
    return t;
  }

  std::string wellDefined, balanced;
  auto push_left = [&](const ActionTensor& src, ActionTensor& dst, const char* tag) {
    for (std::size_t b = 0; b < src.size(); ++b) {
      ExactMatrix full = t.class_of_left(src[b]);
      ExactMatrix q = full.select_cols(t.pivots);
      if (quotient && wellDefined.empty()) {
        std::string x = first_diff(full, q * t.classMap);
        if (!x.empty()) wellDefined = std::string(tag) + "[" + std::to_string(b) + "] (x) I: " + x;
      }
      dst.push_back(std::move(q));
    }
  };
  auto push_right = [&](const ActionTensor& src, ActionTensor& dst, const char* tag) {
    for (std::size_t b = 0; b < src.size(); ++b) {
      ExactMatrix full = t.class_of_right(src[b]);
      ExactMatrix q = full.select_cols(t.pivots);
      if (quotient && wellDefined.empty()) {
        std::string x = first_diff(full, q * t.classMap);
        if (!x.empty()) wellDefined = std::string("I (x) ") + tag + "[" + std::to_string(b) + "]: " + x;
      }
      dst.push_back(std::move(q));
    }
  };
  push_left(X.phi1, t.data.phi1, "phi1");
  push_left(X.phi2, t.data.phi2, "phi2");
  push_right(Y.rightA, t.data.rightA, "rightA");
  push_right(Y.varphi1, t.data.varphi1, "varphi1");
  push_right(Y.varphi2, t.data.varphi2, "varphi2");

  const ActionTensor& Xvar = i == 1 ? X.varphi1 : X.varphi2;
  for (std::size_t b = 0; b < Xvar.size() && balanced.empty(); ++b) {
    std::string x = first_diff(t.class_of_left(Xvar[b]), t.class_of_right(Yphi[b]));
    if (!x.empty()) balanced = "b = e" + std::to_string(b) + ": " + x;
  }
  t.report.add("tensor.balanced", "relative tensor: x varphi_i(b) (x) y = x (x) phi_i(b) y", balanced.empty(), balanced);
  t.report.add("tensor.well_defined", "actions preserve the null space of the Gram", wellDefined.empty(), wellDefined);
  return t;
}

// --- FockOperator -----------------------------------------------------------

FockOperator::FockOperator(std::vector<std::size_t> levelDims)
    : dims_(std::move(levelDims)), blocks_(dims_.size() * dims_.size()) {}

ExactMatrix& FockOperator::block_mut(std::size_t r, std::size_t c) {
  auto& b = blocks_.at(r * dims_.size() + c);
  if (!b) b = ExactMatrix(dims_[r], dims_[c]);
  return *b;
}

void FockOperator::set_block(std::size_t r, std::size_t c, ExactMatrix b) {
  if (b.rows() != dims_.at(r) || b.cols() != dims_.at(c)) throw Error("DimensionMismatch", "Fock block shape");
  blocks_[r * dims_.size() + c] = std::move(b);
}

std::optional<int> FockOperator::degree() const {
  std::optional<int> deg;
  for (std::size_t r = 0; r < levels(); ++r)
    for (std::size_t c = 0; c < levels(); ++c) {
      const ExactMatrix* b = block(r, c);
      if (!b || b->is_zero()) continue;
      int d = static_cast<int>(r) - static_cast<int>(c);
      if (deg && *deg != d) return std::nullopt;
      deg = d;
    }
  return deg.value_or(0);
}

bool FockOperator::is_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return !b || b->is_zero(); });
}

ExactMatrix FockOperator::to_dense() const {
  std::vector<std::size_t> off(levels() + 1, 0);
  for (std::size_t k = 0; k < levels(); ++k) off[k + 1] = off[k] + dims_[k];
  ExactMatrix m(off.back(), off.back());
  for (std::size_t r = 0; r < levels(); ++r)
    for (std::size_t c = 0; c < levels(); ++c)
      if (const ExactMatrix* b = block(r, c)) m.set_block(off[r], off[c], *b);
  return m;
}

void FockOperator::require_same_shape(const FockOperator& o) const {
  if (dims_ != o.dims_) throw Error("DimensionMismatch", "Fock operators on different truncations");
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  require_same_shape(o);
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (o.blocks_[k]) {
      if (blocks_[k])
        *blocks_[k] += *o.blocks_[k];
      else
        blocks_[k] = o.blocks_[k];
    }
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  require_same_shape(o);
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (o.blocks_[k]) {
      if (blocks_[k])
        *blocks_[k] -= *o.blocks_[k];
      else
        blocks_[k] = *o.blocks_[k] * GaussianRational(-1);
    }
  return *this;
}

FockOperator& FockOperator::operator*=(const GaussianRational& s) {
  for (auto& b : blocks_)
    if (b) *b *= s;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  a.require_same_shape(b);
  FockOperator out(a.dims_);
  const std::size_t L = a.levels();
  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t m = 0; m < L; ++m) {
      const ExactMatrix* x = a.block(r, m);
      if (!x || x->is_zero()) continue;
      for (std::size_t c = 0; c < L; ++c) {
        const ExactMatrix* y = b.block(m, c);
        if (!y || y->is_zero()) continue;
        ExactMatrix p = *x * *y;
        auto& slot = out.blocks_[r * L + c];
        if (slot)
          *slot += p;
        else
          slot = std::move(p);
      }
    }
  return out;
}

bool operator==(const FockOperator& a, const FockOperator& b) {
  if (a.dims_ != b.dims_) return false;
  for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
    const auto& x = a.blocks_[k];
    const auto& y = b.blocks_[k];
    if (x && y) {
      if (!(*x == *y)) return false;
    } else if (x) {
      if (!x->is_zero()) return false;
    } else if (y) {
      if (!y->is_zero()) return false;
    }
  }
  return true;
}

FockOperator degree_zero_part(const FockOperator& op) {
  FockOperator out(op.dims());
  for (std::size_t n = 0; n < op.levels(); ++n)
    if (const ExactMatrix* b = op.block(n, n)) out.set_block(n, n, *b);
  return out;
}

// --- TruncatedFock ------------------------------------------------------------

std::string TruncatedFock::word_name(const std::vector<int>& letters) {
  std::string s = "(";
  for (std::size_t k = 0; k < letters.size(); ++k) s += (k ? "," : "") + std::to_string(letters[k]);
  return s + ")";
}

std::string TruncatedFock::locate(std::size_t level, std::size_t index) const {
  if (level == 0) {
    std::size_t d1 = spec_.algebraB1.dim;
    return index < d1 ? "level 0 B1 coordinate " + std::to_string(index)
                      : "level 0 B2 coordinate " + std::to_string(index - d1);
  }
  for (const auto& w : words_[level])
    if (index < w.offset + w.dim())
      return "level " + std::to_string(level) + " word " + word_name(w.letters) + " basis " +
             std::to_string(index - w.offset);
  return "level " + std::to_string(level) + " index " + std::to_string(index);
}

std::string TruncatedFock::defect_witness(const FockOperator& op, Window w) const {
  for (std::size_t c = w.lo; c <= std::min(w.hi, K_); ++c)
    for (std::size_t r = 0; r <= K_; ++r) {
      const ExactMatrix* b = op.block(r, c);
      if (!b) continue;
      for (std::size_t j = 0; j < b->cols(); ++j)
        for (std::size_t i = 0; i < b->rows(); ++i)
          if (!(*b)(i, j).is_zero())
            return locate(r, i) + " <- " + locate(c, j) + ": " + (*b)(i, j).to_string();
    }
  return {};
}

GramForm TruncatedFock::gram() const {
  ExactMatrix g(total_, total_);
  std::size_t off = 0;
  for (std::size_t n = 0; n <= K_; ++n) {
    g.set_block(off, off, levelGram_[n].matrix());
    off += levelDims_[n];
  }
  return GramForm(std::move(g));
}

FockOperator TruncatedFock::identity() const {
  FockOperator id(levelDims_);
  for (std::size_t n = 0; n <= K_; ++n) id.set_block(n, n, ExactMatrix::identity(levelDims_[n]));
  return id;
}

FockOperator TruncatedFock::adjoint(const FockOperator& op) const {
  FockOperator out(levelDims_);
  for (std::size_t r = 0; r <= K_; ++r)
    for (std::size_t c = 0; c <= K_; ++c) {
      const ExactMatrix* b = op.block(r, c);
      if (!b || b->is_zero()) continue;
      out.set_block(c, r, gram_adjoint(*b, levelGram_[c], levelGram_[r]));
    }
  return out;
}

FockOperator TruncatedFock::lift(const ExactMatrix& L) const {
  if (L.rows() != spec_.dimH || L.cols() != spec_.dimH) throw Error("DimensionMismatch", "lift of a non-H operator");
  FockOperator out(levelDims_);
  out.set_block(1, 1, L);
  for (std::size_t n = 2; n <= K_; ++n) {
    ExactMatrix& blk = out.block_mut(n, n);
    for (const auto& w : words_[n]) blk.set_block(w.offset, w.offset, w.tensor->lift_left(L));
  }
  return out;
}

FockOperator TruncatedFock::right_action_A(const Vector& a) const {
  FockOperator out(levelDims_);
  out.set_block(0, 0, act(level0_.rightA, a));
  for (std::size_t n = 1; n <= K_; ++n) {
    ExactMatrix& blk = out.block_mut(n, n);
    for (const auto& w : words_[n]) blk.set_block(w.offset, w.offset, act(w.data->rightA, a));
  }
  return out;
}

TruncatedFock build_fock(const QuadModuleSpec& spec, std::size_t K, std::size_t maxDim) {
  if (K < 2) throw Error("DepthTooSmall", "truncation depth must be at least 2, got " + std::to_string(K));
  spec.check_dimensions();
  TruncatedFock f;
  f.spec_ = spec;
  f.lambda_ = derive_lambda(spec);
  f.K_ = K;
  const std::size_t d1 = spec.algebraB1.dim, d2 = spec.algebraB2.dim, dA = spec.algebraA.dim;

  // level 0: B1 (+) B2
  {
    ModuleData& z = f.level0_;
    z.dim = d1 + d2;
    for (std::size_t a = 0; a < dA; ++a) {
      Vector ea = spec.algebraA.idempotent(a);
      Vector p1 = spec.psi1(ea), p2 = spec.psi2(ea);
      Vector diag(p1);
      diag.insert(diag.end(), p2.begin(), p2.end());
      z.rightA.push_back(ExactMatrix::diagonal(diag));
      Vector g(z.dim);
      for (std::size_t b = 0; b < d1; ++b) g[b] = f.lambda_.lambda1(a, b);
      for (std::size_t b = 0; b < d2; ++b) g[d1 + b] = f.lambda_.lambda2(a, b);
      z.innerA.push_back(ExactMatrix::diagonal(g));
    }
    for (std::size_t b = 0; b < d1; ++b) {
      ExactMatrix e(z.dim, z.dim);
      e(b, b) = 1;
      z.phi1.push_back(e);
      z.varphi1.push_back(e);
    }
    for (std::size_t b = 0; b < d2; ++b) {
      ExactMatrix e(z.dim, z.dim);
      e(d1 + b, d1 + b) = 1;
      z.phi2.push_back(e);
      z.varphi2.push_back(e);
    }
  }

  f.words_.resize(K + 1);
  f.levelDims_.assign(K + 1, 0);
  f.levelDims_[0] = d1 + d2;
  {
    WordSpace h;
    h.data = std::make_shared<const ModuleData>(ModuleData::from_spec(spec));
    f.words_[1].push_back(h);
    f.levelDims_[1] = spec.dimH;
  }
  std::size_t total = f.levelDims_[0] + f.levelDims_[1];
  const auto& H = *f.words_[1][0].data;
  for (std::size_t n = 2; n <= K; ++n) {
    const auto& prev = f.words_[n - 1];
    for (const auto& w : prev)
      if (spec.dimH * w.dim() > maxDim)
        throw Error("TooLarge", "a level-" + std::to_string(n) + " ambient tensor has dimension " +
                                    std::to_string(spec.dimH * w.dim()) + " > budget " + std::to_string(maxDim));
    std::string balanced, wellDefined, lambdaCons;
    std::size_t off = 0;
    for (int letter = 1; letter <= 2; ++letter)
      for (std::size_t c = 0; c < prev.size(); ++c) {
        auto t = std::make_shared<RelTensorSpace>(relative_tensor(H, letter, *prev[c].data, f.lambda_));
        WordSpace w;
        w.letters = {letter};
        w.letters.insert(w.letters.end(), prev[c].letters.begin(), prev[c].letters.end());
        if (t->dim() == 0)
          throw Error("DegenerateQuotient", "word " + TruncatedFock::word_name(w.letters) + " has dimension 0");
        for (const auto& chk : t->report.checks())
          if (!chk.pass) {
            std::string& slot = chk.id == "tensor.balanced"      ? balanced
                                : chk.id == "tensor.well_defined" ? wellDefined
                                                                  : lambdaCons;
            if (slot.empty()) slot = "word " + TruncatedFock::word_name(w.letters) + ": " + chk.witness;
          }
        w.child = c;
        w.offset = off;
        off += t->dim();
        w.tensor = t;
        w.data = std::shared_ptr<const ModuleData>(t, &t->data);
        f.words_[n].push_back(std::move(w));
      }
    f.levelDims_[n] = off;
    total += off;
    if (total > maxDim)
      throw Error("TooLarge", "Fock dimension through level " + std::to_string(n) + " is " + std::to_string(total) +
                                  " > budget " + std::to_string(maxDim));
    Window win{n, n};
    f.report_.add({"fock.balanced.level" + std::to_string(n), "relative tensor balancing", win, balanced.empty(),
                   balanced, false});
    f.report_.add({"fock.well_defined.level" + std::to_string(n), "actions descend to the quotient", win,
                   wellDefined.empty(), wellDefined, false});
    f.report_.add({"fock.lambda_consistency.level" + std::to_string(n),
                   "A-valued inner product through lambda_1 and lambda_2 agree", win, lambdaCons.empty(), lambdaCons,
                   false});
  }
  f.total_ = total;

  f.levelGram_.push_back(GramForm(f.level0_.scalar_gram()));
  for (std::size_t n = 1; n <= K; ++n) {
    ExactMatrix g(f.levelDims_[n], f.levelDims_[n]);
    for (const auto& w : f.words_[n]) g.set_block(w.offset, w.offset, w.data->scalar_gram());
    f.levelGram_.push_back(GramForm(std::move(g)));
  }
  {
    std::string w;
    for (std::size_t n = 0; n <= K && w.empty(); ++n)
      if (psd_check(f.levelGram_[n]) != PsdClass::positive_definite) w = "level " + std::to_string(n);
    f.report_.add({"fock.gram_positive", "Fock Gram positive definite after quotients", Window{0, K}, w.empty(), w,
                   false});
  }
  if (K >= 3) f.report_.append(verify_associativity(f));
  return f;
}

// --- creation operators -------------------------------------------------------------

FockOperator creation(const TruncatedFock& fock, CreationKind kind, const Vector& xi) {
  const auto& s = fock.spec();
  if (xi.size() != s.dimH) throw Error("DimensionMismatch", "creation vector length");
  const std::size_t K = fock.depth();
  const int letter = kind == CreationKind::s ? 1 : 2;
  FockOperator op(fock.level_dims());
  {
    ExactMatrix b(s.dimH, fock.level_dims()[0]);
    const std::size_t d1 = s.algebraB1.dim;
    const ActionTensor& V = letter == 1 ? s.varphi1 : s.varphi2;
    for (std::size_t beta = 0; beta < V.size(); ++beta) {
      Vector col = V[beta] * xi;
      std::size_t c = letter == 1 ? beta : d1 + beta;
      for (std::size_t r = 0; r < s.dimH; ++r) b(r, c) = col[r];
    }
    op.set_block(1, 0, std::move(b));
  }
  for (std::size_t n = 1; n < K; ++n) {
    ExactMatrix& blk = op.block_mut(n + 1, n);
    for (const auto& target : fock.words(n + 1)) {
      if (target.letters.front() != letter) continue;
      const auto& src = fock.words(n)[target.child];
      const RelTensorSpace& t = *target.tensor;
      const std::size_t nw = src.dim();
      // column q of the source word: class of xi (x) y_q
      for (std::size_t q = 0; q < nw; ++q)
        for (std::size_t a = 0; a < s.dimH; ++a) {
          if (xi[a].is_zero()) continue;
          for (std::size_t r = 0; r < t.dim(); ++r) {
            const auto& x = t.classMap(r, a * nw + q);
            if (!x.is_zero()) blk(target.offset + r, src.offset + q).add_product(xi[a], x);
          }
        }
    }
  }
  return op;
}

Report verify_creation(const TruncatedFock& fock, CreationKind kind, const Vector& xi, const std::string& label) {
  Report rep;
  const auto& s = fock.spec();
  const std::size_t K = fock.depth();
  const int letter = kind == CreationKind::s ? 1 : 2;
  FockOperator op = creation(fock, kind, xi);
  FockOperator adj = fock.adjoint(op);

  {
    std::string w;
    for (std::size_t a = 0; a < s.algebraA.dim && w.empty(); ++a) {
      FockOperator R = fock.right_action_A(s.algebraA.idempotent(a));
      std::string d = fock.defect_witness(op * R - R * op, Window{0, K});
      if (!d.empty()) w = "a = e" + std::to_string(a) + ": " + d;
    }
    rep.add({"creation.module_map." + label, "creation operators are right A-module maps", Window{0, K}, w.empty(), w,
             false});
  }
  // annihilation formulas, built independently from inner products and left actions
  FockOperator expect(fock.level_dims());
  {
    const std::size_t d1 = s.algebraB1.dim;
    ExactMatrix b(fock.level_dims()[0], s.dimH);
    for (std::size_t p = 0; p < s.dimH; ++p) {
      Vector ip = letter == 1 ? s.ipB1(xi, s.basis_vector(p)) : s.ipB2(xi, s.basis_vector(p));
      for (std::size_t k = 0; k < ip.size(); ++k) b(letter == 1 ? k : d1 + k, p) = ip[k];
    }
    expect.set_block(0, 1, std::move(b));
  }
  for (std::size_t n = 1; n < K; ++n) {
    ExactMatrix& blk = expect.block_mut(n, n + 1);
    for (const auto& wd : fock.words(n + 1)) {
      if (wd.letters.front() != letter) continue;  // the other branch is annihilated
      const auto& child = fock.words(n)[wd.child];
      const RelTensorSpace& t = *wd.tensor;
      for (std::size_t j = 0; j < t.pivots.size(); ++j) {
        std::size_t a = t.pivots[j] / t.rightDim, q = t.pivots[j] % t.rightDim;
        Vector ip = letter == 1 ? s.ipB1(xi, s.basis_vector(a)) : s.ipB2(xi, s.basis_vector(a));
        ExactMatrix L = act(letter == 1 ? child.data->phi1 : child.data->phi2, ip);
        for (std::size_t r = 0; r < child.dim(); ++r)
          if (!L(r, q).is_zero()) blk(child.offset + r, wd.offset + j) = L(r, q);
      }
    }
  }
  {
    std::string w = fock.defect_witness(adj - expect, Window{1, K});
    rep.add({"creation.adjoint_formula." + label, "annihilation formulas for the adjoint", Window{1, K}, w.empty(), w,
             false});
  }
  {
    auto deg = op.degree();
    bool ok = deg && *deg == 1;
    rep.add("creation.degree." + label, "creation operators raise the level by one", ok,
            ok ? "" : "degree is not +1");
  }
  return rep;
}

// --- left actions, projections, gauge -------------------------------------------------

FockOperator left_action(const TruncatedFock& fock, int i, const Vector& b) {
  if (i != 1 && i != 2) throw Error("InvalidParameter", "left action index must be 1 or 2");
  const std::size_t K = fock.depth();
  FockOperator out(fock.level_dims());
  out.set_block(0, 0, act(i == 1 ? fock.level0().phi1 : fock.level0().phi2, b));
  for (std::size_t n = 1; n <= K; ++n) {
    ExactMatrix& blk = out.block_mut(n, n);
    for (const auto& w : fock.words(n)) blk.set_block(w.offset, w.offset, act(i == 1 ? w.data->phi1 : w.data->phi2, b));
  }
  return out;
}

Report verify_left_actions(const TruncatedFock& fock) {
  Report rep;
  const auto& s = fock.spec();
  const std::size_t K = fock.depth();
  Window all{0, K};
  for (int i = 1; i <= 2; ++i) {
    const auto& B = i == 1 ? s.algebraB1 : s.algebraB2;
    std::string hom, star, faithful;
    std::vector<FockOperator> ops;
    for (std::size_t b = 0; b < B.dim; ++b) ops.push_back(left_action(fock, i, B.idempotent(b)));
    for (std::size_t b = 0; b < B.dim; ++b) {
      if (ops[b].is_zero() && faithful.empty()) faithful = "phi-bar(e" + std::to_string(b) + ") = 0";
      if (star.empty()) {
        std::string d = fock.defect_witness(fock.adjoint(ops[b]) - ops[b], all);
        if (!d.empty()) star = "e" + std::to_string(b) + ": " + d;
      }
      for (std::size_t c = 0; c < B.dim && hom.empty(); ++c) {
        FockOperator want = b == c ? ops[b] : fock.zero();
        std::string d = fock.defect_witness(ops[b] * ops[c] - want, all);
        if (!d.empty()) hom = "e" + std::to_string(b) + " e" + std::to_string(c) + ": " + d;
      }
    }
    std::string tag = "left_action" + std::to_string(i);
    rep.add({tag + ".homomorphism", "phi-bar_i is multiplicative", all, hom.empty(), hom, false});
    rep.add({tag + ".star", "phi-bar_i(b)^* = phi-bar_i(b^*)", all, star.empty(), star, false});
    rep.add({tag + ".faithful", "phi-bar_i is faithful", all, faithful.empty(), faithful, false});
  }
  {
    std::string w;
    FockOperator one = left_action(fock, 1, s.algebraB1.unit());
    for (std::size_t k = 0; k < s.basisU.size() && w.empty(); ++k) {
      FockOperator sk = creation(fock, CreationKind::s, s.basisU[k]);
      std::string d = fock.defect_witness(one * sk - sk, all);
      if (!d.empty()) w = "s_u" + std::to_string(k + 1) + ": " + d;
    }
    rep.add({"left_action1.unit_on_range", "phi-bar_1(1) s_xi = s_xi", all, w.empty(), w, false});
  }
  return rep;
}

Projections projections(const TruncatedFock& fock) {
  const std::size_t K = fock.depth();
  Projections pr;
  for (std::size_t n = 0; n <= K; ++n) {
    FockOperator p(fock.level_dims());
    p.set_block(n, n, ExactMatrix::identity(fock.level_dims()[n]));
    pr.P.push_back(std::move(p));
  }
  pr.Ps = fock.zero();
  pr.Pt = fock.zero();
  for (std::size_t n = 2; n <= K; ++n) {
    ExactMatrix& bs = pr.Ps.block_mut(n, n);
    ExactMatrix& bt = pr.Pt.block_mut(n, n);
    for (const auto& w : fock.words(n)) {
      ExactMatrix& tgt = w.letters.front() == 1 ? bs : bt;
      for (std::size_t k = 0; k < w.dim(); ++k) tgt(w.offset + k, w.offset + k) = 1;
    }
  }
  return pr;
}

Report verify_projections(const TruncatedFock& fock, const Projections& pr) {
  Report rep;
  const std::size_t K = fock.depth();
  Window all{0, K};
  std::string orth, selfadj;
  std::vector<std::pair<std::string, const FockOperator*>> named;
  for (std::size_t n = 0; n <= K; ++n) named.emplace_back("P" + std::to_string(n), &pr.P[n]);
  named.emplace_back("Ps", &pr.Ps);
  named.emplace_back("Pt", &pr.Pt);
  for (std::size_t a = 0; a <= K; ++a)
    for (std::size_t b = 0; b <= K && orth.empty(); ++b) {
      std::string d = fock.defect_witness(pr.P[a] * pr.P[b] - (a == b ? pr.P[a] : fock.zero()), all);
      if (!d.empty()) orth = "P" + std::to_string(a) + " P" + std::to_string(b) + ": " + d;
    }
  {
    std::string d = fock.defect_witness(pr.Ps * pr.Pt, all);
    if (orth.empty() && !d.empty()) orth = "Ps Pt: " + d;
    d = fock.defect_witness(pr.Ps * pr.Ps - pr.Ps, all);
    if (orth.empty() && !d.empty()) orth = "Ps^2: " + d;
    d = fock.defect_witness(pr.Pt * pr.Pt - pr.Pt, all);
    if (orth.empty() && !d.empty()) orth = "Pt^2: " + d;
  }
  for (const auto& [nm, p] : named) {
    std::string d = fock.defect_witness(fock.adjoint(*p) - *p, all);
    if (selfadj.empty() && !d.empty()) selfadj = nm + ": " + d;
  }
  rep.add({"projections.orthogonal_idempotents", "level projections are orthogonal idempotents", all, orth.empty(),
           orth, false});
  rep.add({"projections.self_adjoint", "level projections are self-adjoint", all, selfadj.empty(), selfadj, false});
  std::string w = fock.defect_witness(pr.Ps + pr.Pt + pr.P[0] + pr.P[1] - fock.identity(), all);
  rep.add({"projections.partition", "P_s + P_t + P_0 + P_1 = 1", all, w.empty(), w, false});
  return rep;
}

FockOperator gauge_unitary(const TruncatedFock& fock) {
  FockOperator u(fock.level_dims());
  GaussianRational phase(1);
  for (std::size_t n = 0; n <= fock.depth(); ++n) {
    u.set_block(n, n, ExactMatrix::identity(fock.level_dims()[n]) * phase);
    phase *= GaussianRational::i();
  }
  return u;
}

Report gauge_check(const TruncatedFock& fock, const std::vector<GradedOperator>& ops) {
  Report rep;
  const std::size_t K = fock.depth();
  Window all{0, K};
  FockOperator u = gauge_unitary(fock);
  FockOperator ustar = fock.adjoint(u);
  {
    FockOperator u4 = u * u * u * u;
    std::string w = fock.defect_witness(u4 - fock.identity(), all);
    rep.add({"gauge.order_four", "u_{1/4}^4 = 1", all, w.empty(), w, false});
    std::string w2 = fock.defect_witness(u * ustar - fock.identity(), all);
    rep.add({"gauge.unitary", "u_{1/4} is unitary", all, w2.empty(), w2, false});
  }
  for (const auto& g : ops) {
    GaussianRational phase(1);
    for (int k = 0; k < ((g.degree % 4) + 4) % 4; ++k) phase *= GaussianRational::i();
    std::string w = fock.defect_witness(u * g.op * ustar - g.op * phase, all);
    rep.add({"gauge." + g.name, "gauge action scales by e^{2 pi i r deg}", all, w.empty(), w, false});
  }
  return rep;
}

namespace {

using SparseGram = std::map<std::pair<std::size_t, std::size_t>, GaussianRational>;

// ambient_inner without the dense m*n x m*n matrices; zero entries dropped
std::vector<SparseGram> sparse_ambient_inner(const InnerTensor& Xi, const ActionTensor& Yphi, const InnerTensor& Yc,
                                             std::size_t m, std::size_t n) {
  std::vector<SparseGram> out;
  for (const auto& yg : Yc) {
    SparseGram G;
    for (std::size_t beta = 0; beta < Xi.size(); ++beta) {
      ExactMatrix Mb = yg * Yphi[beta];
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const auto& x = Xi[beta](a, b);
          if (x.is_zero()) continue;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
              if (!Mb(p, q).is_zero()) G[{a * n + p, b * n + q}].add_product(x, Mb(p, q));
        }
    }
    std::erase_if(G, [](const auto& kv) { return kv.second.is_zero(); });
    out.push_back(std::move(G));
  }
  return out;
}

std::string sparse_diff(const SparseGram& a, const SparseGram& b) {
  auto ia = a.begin(), ib = b.begin();
  auto show = [](const std::pair<std::size_t, std::size_t>& k, const GaussianRational& x, const GaussianRational& y) {
    return "entry (" + std::to_string(k.first) + "," + std::to_string(k.second) + "): " + x.to_string() + " vs " +
           y.to_string();
  };
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) return show(ia->first, ia->second, 0);
    if (ia == a.end() || ib->first < ia->first) return show(ib->first, 0, ib->second);
    if (!(ia->second == ib->second)) return show(ia->first, ia->second, ib->second);
    ++ia;
    ++ib;
  }
  return {};
}

}  // namespace

Report verify_associativity(const TruncatedFock& fock) {
  Report rep;
  ModuleData H = ModuleData::from_spec(fock.spec());
  const auto& lam = fock.lambda();
  const std::size_t n = H.dim;
  // Both bracketings index x_a (x) y_b (x) z_c as (a*n + b)*n + c, so the ambient
  // inner products can be compared entrywise; only those are needed, not the actions.
  // The A-valued product is lambda_1 of the B1-valued one, so B1 and B2 suffice.
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      const ModuleData inner = relative_tensor(H, i, H, lam, false).data;
      const ModuleData tail = relative_tensor(H, j, H, lam, false).data;
      const InnerTensor& leftX = j == 1 ? inner.innerB1 : inner.innerB2;
      const ActionTensor& leftPhi = j == 1 ? H.phi1 : H.phi2;
      const InnerTensor& rightX = i == 1 ? H.innerB1 : H.innerB2;
      const ActionTensor& rightPhi = i == 1 ? tail.phi1 : tail.phi2;
      std::string w;
      for (int c = 1; c <= 2 && w.empty(); ++c) {
        auto l = sparse_ambient_inner(leftX, leftPhi, c == 1 ? H.innerB1 : H.innerB2, n * n, n);
        auto r = sparse_ambient_inner(rightX, rightPhi, c == 1 ? tail.innerB1 : tail.innerB2, n, n * n);
        for (std::size_t k = 0; k < l.size() && w.empty(); ++k) {
          std::string d = sparse_diff(l[k], r[k]);
          if (!d.empty()) w = "B" + std::to_string(c) + " coordinate " + std::to_string(k) + ": " + d;
        }
      }
      rep.add({"fock.associativity." + std::to_string(i) + std::to_string(j),
               "associativity of relative tensor products", Window{3, 3}, w.empty(), w, false});
    }
  return rep;
}

}  // namespace quadmod
