#include "quadmod/quad_module.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace quadmod {

// --- algebra helpers --------------------------------------------------------

Vector FinDimCommAlgebra::idempotent(std::size_t k) const {
  Vector e(dim);
  e.at(k) = 1;
  return e;
}

std::vector<Vector> FinDimCommAlgebra::minimal_idempotents() const {
  std::vector<Vector> out;
  for (std::size_t k = 0; k < dim; ++k) out.push_back(idempotent(k));
  return out;
}

Vector alg_mul(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("DimensionMismatch", "algebra product");
  Vector r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] * b[k];
  return r;
}

Vector alg_conj(const Vector& a) {
  Vector r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k].conj();
  return r;
}

Vector alg_add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("DimensionMismatch", "algebra sum");
  Vector r(a);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += b[k];
  return r;
}

bool alg_is_zero(const Vector& a) {
  return std::all_of(a.begin(), a.end(), [](const GaussianRational& z) { return z.is_zero(); });
}

namespace {

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k].to_string();
  return s + ")";
}

// "" when equal, else the first differing entry.
std::string diff(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return "shape mismatch";
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!(a(r, c) == b(r, c)))
        return "entry (" + std::to_string(r) + "," + std::to_string(c) + "): " + a(r, c).to_string() + " vs " +
               b(r, c).to_string();
  return {};
}

std::string vdiff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return "length mismatch";
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] == b[k])) return "coordinate " + std::to_string(k) + ": " + a[k].to_string() + " vs " + b[k].to_string();
  return {};
}

// Runs body over an index range; the first non-empty witness wins.
struct FirstWitness {
  std::string w;
  void operator()(const std::string& context, const std::string& d) {
    if (w.empty() && !d.empty()) w = context + ": " + d;
  }
  bool ok() const { return w.empty(); }
};

}  // namespace

AlgebraHom AlgebraHom::from_matrix(ExactMatrix m) {
  AlgebraHom h;
  h.source_dim = m.cols();
  h.target_dim = m.rows();
  h.matrix = std::move(m);
  return h;
}

bool AlgebraHom::is_multiplicative(std::string* witness) const {
  for (std::size_t a = 0; a < source_dim; ++a)
    for (std::size_t b = 0; b < source_dim; ++b) {
      Vector ea(source_dim), eb(source_dim);
      ea[a] = 1;
      eb[b] = 1;
      Vector lhs = (*this)(alg_mul(ea, eb));
      Vector rhs = alg_mul((*this)(ea), (*this)(eb));
      if (!(lhs == rhs)) {
        if (witness) *witness = "idempotents " + std::to_string(a) + "," + std::to_string(b) + ": " + vdiff(lhs, rhs);
        return false;
      }
    }
  return true;
}

bool AlgebraHom::is_unital() const { return (*this)(Vector(source_dim, 1)) == Vector(target_dim, 1); }

ExactMatrix act(const ActionTensor& t, const Vector& b) {
  if (t.size() != b.size()) throw Error("DimensionMismatch", "action tensor vs algebra element");
  if (t.empty()) return {};
  ExactMatrix m(t[0].rows(), t[0].cols());
  for (std::size_t k = 0; k < b.size(); ++k)
    if (!b[k].is_zero()) m += t[k] * b[k];
  return m;
}

Vector inner(const InnerTensor& g, const Vector& x, const Vector& y) {
  Vector out(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) out[c] = pairing(x, g[c], y);
  return out;
}

ExactMatrix scalarize(const InnerTensor& g) {
  if (g.empty()) return {};
  ExactMatrix s(g[0].rows(), g[0].cols());
  for (const auto& m : g) s += m;
  return s;
}

Vector QuadModuleSpec::basis_vector(std::size_t p) const {
  Vector v(dimH);
  v.at(p) = 1;
  return v;
}

void QuadModuleSpec::check_dimensions() const {
  auto fail = [&](const std::string& what) { throw Error("DimensionMismatch", name + ": " + what); };
  if (dimH == 0) fail("dimH must be positive");
  auto hom = [&](const AlgebraHom& h, const FinDimCommAlgebra& s, const FinDimCommAlgebra& t, const char* nm) {
    if (h.source_dim != s.dim || h.target_dim != t.dim || h.matrix.rows() != t.dim || h.matrix.cols() != s.dim)
      fail(std::string(nm) + " has the wrong shape");
  };
  hom(embed1, algebraA, algebraB1, "embed1");
  hom(embed2, algebraA, algebraB2, "embed2");
  hom(psi1, algebraA, algebraB1, "psi1");
  hom(psi2, algebraA, algebraB2, "psi2");
  auto tensor = [&](const std::vector<ExactMatrix>& t, std::size_t n, const char* nm) {
    if (t.size() != n) fail(std::string(nm) + " needs " + std::to_string(n) + " slices");
    for (const auto& m : t)
      if (m.rows() != dimH || m.cols() != dimH) fail(std::string(nm) + " slice is not dimH x dimH");
  };
  tensor(rightA, algebraA.dim, "rightA");
  tensor(varphi1, algebraB1.dim, "varphi1");
  tensor(varphi2, algebraB2.dim, "varphi2");
  tensor(phi1, algebraB1.dim, "phi1");
  tensor(phi2, algebraB2.dim, "phi2");
  tensor(innerA, algebraA.dim, "innerA");
  tensor(innerB1, algebraB1.dim, "innerB1");
  tensor(innerB2, algebraB2.dim, "innerB2");
  if (basisU.empty() || basisV.empty()) fail("basisU and basisV must be nonempty");
  for (const auto& u : basisU)
    if (u.size() != dimH) fail("basisU vector length");
  for (const auto& v : basisV)
    if (v.size() != dimH) fail("basisV vector length");
}

// --- validate_axioms ----------------------------------------------------------

namespace {

struct InnerSlot {
  const char* tag;
  const InnerTensor* g;
  const ActionTensor* right;
};

// Fullness of a commutative *-algebra generated by a set of vectors: every
// coordinate is hit and any two coordinates are separated.
std::string fullness_witness(const std::vector<Vector>& values, std::size_t dim) {
  for (std::size_t c = 0; c < dim; ++c)
    if (std::all_of(values.begin(), values.end(), [&](const Vector& v) { return v[c].is_zero(); }))
      return "coordinate " + std::to_string(c) + " vanishes on every inner-product value";
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t d = c + 1; d < dim; ++d)
      if (std::all_of(values.begin(), values.end(), [&](const Vector& v) { return v[c] == v[d]; }))
        return "coordinates " + std::to_string(c) + " and " + std::to_string(d) + " are not separated";
  return {};
}

}  // namespace

Report validate_axioms(const QuadModuleSpec& s) {
  s.check_dimensions();
  Report rep;
  const std::size_t n = s.dimH;
  const ExactMatrix I = ExactMatrix::identity(n);

  // structure maps between the algebras
  {
    std::string w;
    bool ok = true;
    for (auto [h, nm] : {std::pair{&s.embed1, "embed1"}, std::pair{&s.embed2, "embed2"}}) {
      std::string x;
      if (!h->is_multiplicative(&x)) {
        ok = false;
        if (w.empty()) w = std::string(nm) + " " + x;
      } else if (!h->is_unital()) {
        ok = false;
        if (w.empty()) w = std::string(nm) + " is not unital";
      }
    }
    rep.add("embeddings.unital_hom", "embeddings of A: unital *-homomorphisms", ok, w);
    w.clear();
    ok = true;
    for (auto [h, nm] : {std::pair{&s.psi1, "psi1"}, std::pair{&s.psi2, "psi2"}}) {
      std::string x;
      if (!h->is_multiplicative(&x)) {
        ok = false;
        if (w.empty()) w = std::string(nm) + " " + x;
      }
    }
    rep.add("psi.multiplicative", "right A-actions on B_i: multiplicative", ok, w);
  }

  const InnerSlot slots[] = {{"A", &s.innerA, &s.rightA}, {"B1", &s.innerB1, &s.varphi1}, {"B2", &s.innerB2, &s.varphi2}};

  // right actions are unital homomorphisms
  {
    FirstWitness fw;
    for (const auto& slot : slots) {
      const auto& R = *slot.right;
      ExactMatrix sum(n, n);
      for (std::size_t a = 0; a < R.size(); ++a) {
        sum += R[a];
        for (std::size_t b = 0; b < R.size(); ++b)
          fw(std::string("right ") + slot.tag + " action, idempotents " + std::to_string(a) + "," + std::to_string(b),
             diff(R[b] * R[a], a == b ? R[a] : ExactMatrix(n, n)));
      }
      fw(std::string("right ") + slot.tag + " action of the unit", diff(sum, I));
    }
    rep.add("right_actions.unital_hom", "right actions: unital homomorphisms", fw.ok(), fw.w);
  }
  // left actions are homomorphisms
  {
    FirstWitness fw;
    for (auto [L, tag] : {std::pair{&s.phi1, "phi1"}, std::pair{&s.phi2, "phi2"}})
      for (std::size_t a = 0; a < L->size(); ++a)
        for (std::size_t b = 0; b < L->size(); ++b)
          fw(std::string(tag) + " idempotents " + std::to_string(a) + "," + std::to_string(b),
             diff((*L)[a] * (*L)[b], a == b ? (*L)[a] : ExactMatrix(n, n)));
    rep.add("left_actions.hom", "left actions: homomorphisms", fw.ok(), fw.w);
  }

  for (const auto& slot : slots) {
    const auto& G = *slot.g;
    const auto& R = *slot.right;
    std::string t = slot.tag;
    // (ii) <x|y b> = <x|y> b, coordinate c: G_c R_b = delta_{cb} G_c
    {
      FirstWitness fw;
      for (std::size_t c = 0; c < G.size(); ++c)
        for (std::size_t b = 0; b < R.size(); ++b)
          fw("coordinate " + std::to_string(c) + ", idempotent " + std::to_string(b),
             diff(G[c] * R[b], c == b ? G[c] : ExactMatrix(n, n)));
      rep.add("inner" + t + ".right_linearity", "inner products: right " + t + "-linearity", fw.ok(), fw.w);
    }
    // (iii) <x|y>^* = <y|x>
    {
      FirstWitness fw;
      for (std::size_t c = 0; c < G.size(); ++c) fw("coordinate " + std::to_string(c), diff(G[c].conj_transpose(), G[c]));
      rep.add("inner" + t + ".conjugate_symmetry", "inner products: conjugate symmetry", fw.ok(), fw.w);
    }
    // (iv) positivity and definiteness
    {
      std::string w;
      bool herm = true;
      for (std::size_t c = 0; c < G.size() && w.empty(); ++c) {
        if (!(G[c] == G[c].conj_transpose())) {
          herm = false;
          w = "coordinate " + std::to_string(c) + " is not Hermitian";
        } else if (psd_check(G[c]) == PsdClass::indefinite) {
          w = "coordinate " + std::to_string(c) + " Gram is indefinite";
        }
      }
      if (w.empty() && herm) {
        PsdClass cls = psd_check(scalarize(G));  // sum of Hermitian slices
        if (cls != PsdClass::positive_definite) {
          auto ker = kernel_basis(scalarize(G));
          w = "<x|x> = 0 for nonzero x = " + (ker.empty() ? std::string("?") : vec_str(ker.front()));
        }
      }
      rep.add("inner" + t + ".positivity", "inner products: positivity and definiteness", w.empty(), w);
    }
  }

  // bimodule commutation: every left action commutes with every right action
  {
    FirstWitness fw;
    const std::pair<const ActionTensor*, const char*> lefts[] = {{&s.phi1, "phi1"}, {&s.phi2, "phi2"}};
    const std::pair<const ActionTensor*, const char*> rights[] = {
        {&s.varphi1, "varphi1"}, {&s.varphi2, "varphi2"}, {&s.rightA, "rightA"}};
    for (auto [L, ln] : lefts)
      for (auto [R, rn] : rights)
        for (std::size_t a = 0; a < L->size(); ++a)
          for (std::size_t b = 0; b < R->size(); ++b)
            fw(std::string(ln) + "[" + std::to_string(a) + "] vs " + rn + "[" + std::to_string(b) + "]",
               diff((*L)[a] * (*R)[b], (*R)[b] * (*L)[a]));
    rep.add("bimodule.commutation", "left and right actions commute", fw.ok(), fw.w);
  }

  // xi varphi_i(z psi_i(a)) = (xi varphi_i(z)) a
  {
    FirstWitness fw;
    for (auto [V, psi, tag] : {std::tuple{&s.varphi1, &s.psi1, "1"}, std::tuple{&s.varphi2, &s.psi2, "2"}})
      for (std::size_t z = 0; z < V->size(); ++z)
        for (std::size_t a = 0; a < s.algebraA.dim; ++a) {
          Vector ez(V->size());
          ez[z] = 1;
          Vector prod = alg_mul(ez, (*psi)(s.algebraA.idempotent(a)));
          fw(std::string("varphi") + tag + ", z=e" + std::to_string(z) + ", a=e" + std::to_string(a),
             diff(act(*V, prod), s.rightA[a] * (*V)[z]));
        }
    rep.add("psi.compatibility", "right B_i-action versus right A-action through psi_i", fw.ok(), fw.w);
  }

  // phi_1(a) = phi_2(a) for a in A
  {
    FirstWitness fw;
    for (std::size_t a = 0; a < s.algebraA.dim; ++a) {
      Vector ea = s.algebraA.idempotent(a);
      fw("a = minimal idempotent e" + std::to_string(a), diff(act(s.phi1, s.embed1(ea)), act(s.phi2, s.embed2(ea))));
    }
    rep.add("left_actions.agree_on_A", "left actions agree on A", fw.ok(), fw.w);
  }

  // <xi|eta a>_{B_i} = <xi|eta>_{B_i} psi_i(a)
  {
    FirstWitness fw;
    for (auto [G, psi, tag] : {std::tuple{&s.innerB1, &s.psi1, "B1"}, std::tuple{&s.innerB2, &s.psi2, "B2"}})
      for (std::size_t a = 0; a < s.algebraA.dim; ++a) {
        Vector pa = (*psi)(s.algebraA.idempotent(a));
        for (std::size_t c = 0; c < G->size(); ++c)
          fw(std::string(tag) + " coordinate " + std::to_string(c) + ", a=e" + std::to_string(a),
             diff((*G)[c] * s.rightA[a], (*G)[c] * pa[c]));
      }
    rep.add("inner.psi_compatibility", "B_i-valued inner products versus psi_i", fw.ok(), fw.w);
  }

  // faithful left actions
  {
    std::string w;
    for (auto [L, tag] : {std::pair{&s.phi1, "phi1"}, std::pair{&s.phi2, "phi2"}}) {
      SpanTracker span(n * n);
      for (std::size_t b = 0; b < L->size(); ++b)
        if (!span.add((*L)[b].data()) && w.empty()) w = std::string(tag) + " kills a nonzero combination ending at e" + std::to_string(b);
    }
    rep.add("left_actions.faithful", "left actions are faithful", w.empty(), w);
  }

  // adjointability of phi_i(b) against all three inner products, adjoint = phi_i(b^*)
  {
    FirstWitness fw;
    for (auto [L, tag] : {std::pair{&s.phi1, "phi1"}, std::pair{&s.phi2, "phi2"}})
      for (std::size_t b = 0; b < L->size(); ++b) {
        Vector eb(L->size());
        eb[b] = 1;
        ExactMatrix adj = act(*L, alg_conj(eb));  // e_b is self-adjoint; kept general
        for (const auto& slot : slots) {
          const auto& G = *slot.g;
          for (std::size_t c = 0; c < G.size(); ++c)
            fw(std::string(tag) + "(e" + std::to_string(b) + ") against " + slot.tag + " coordinate " + std::to_string(c),
               diff((*L)[b].conj_transpose() * G[c], G[c] * adj));
          ExactMatrix tau = scalarize(G);
          if (tau == tau.conj_transpose() && psd_check(tau) == PsdClass::positive_definite) {
            GramForm g(tau);
            fw(std::string(tag) + "(e" + std::to_string(b) + ") Gram adjoint for " + slot.tag,
               diff(gram_adjoint((*L)[b], g, g), adj));
          }
        }
      }
    rep.add("left_actions.adjointable", "left actions adjointable with adjoint phi_i(b^*)", fw.ok(), fw.w);
  }

  // fullness
  {
    std::string w;
    for (const auto& slot : slots) {
      std::vector<Vector> values;
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) values.push_back(inner(*slot.g, s.basis_vector(p), s.basis_vector(q)));
      std::string x = fullness_witness(values, slot.g->size());
      if (w.empty() && !x.empty()) w = std::string(slot.tag) + ": " + x;
    }
    rep.add("inner.fullness", "full with respect to all three inner products", w.empty(), w);
  }
  return rep;
}

// --- finite type ----------------------------------------------------------------

namespace {

bool in_image(const AlgebraHom& embed, const Vector& b) { return solve(embed.matrix, b).has_value(); }

Vector preimage(const AlgebraHom& embed, const Vector& b) {
  auto x = solve(embed.matrix, b);
  if (!x) throw Error("NotInA", "element " + vec_str(b) + " is not in the image of A");
  return *x;
}

}  // namespace

Report verify_finite_type(const QuadModuleSpec& s) {
  s.check_dimensions();
  Report rep;
  const std::size_t n = s.dimH;
  {
    FirstWitness fw;
    for (std::size_t p = 0; p < n; ++p) {
      Vector xi = s.basis_vector(p);
      Vector sum_u(n), sum_v(n);
      for (const auto& u : s.basisU) sum_u = alg_add(sum_u, act(s.varphi1, s.ipB1(u, xi)) * u);
      for (const auto& v : s.basisV) sum_v = alg_add(sum_v, act(s.varphi2, s.ipB2(v, xi)) * v);
      fw("basis vector " + std::to_string(p) + " via u", vdiff(sum_u, xi));
      fw("basis vector " + std::to_string(p) + " via v", vdiff(sum_v, xi));
    }
    rep.add("finite_type.reconstruction", "finite bases: reconstruction", fw.ok(), fw.w);
  }
  {
    std::string w;
    for (std::size_t wi = 0; wi < s.algebraB2.dim && w.empty(); ++wi)
      for (std::size_t i = 0; i < s.basisU.size() && w.empty(); ++i)
        for (std::size_t j = 0; j < s.basisU.size() && w.empty(); ++j) {
          Vector val = s.ipB1(s.basisU[i], act(s.phi2, s.algebraB2.idempotent(wi)) * s.basisU[j]);
          if (!in_image(s.embed1, val))
            w = "<u" + std::to_string(i) + "|phi2(e" + std::to_string(wi) + ")u" + std::to_string(j) + "> = " + vec_str(val);
        }
    rep.add("finite_type.uu_in_A", "finite bases: <u_i|phi2(w)u_j> in A", w.empty(), w);
  }
  {
    std::string w;
    for (std::size_t zi = 0; zi < s.algebraB1.dim && w.empty(); ++zi)
      for (std::size_t k = 0; k < s.basisV.size() && w.empty(); ++k)
        for (std::size_t l = 0; l < s.basisV.size() && w.empty(); ++l) {
          Vector val = s.ipB2(s.basisV[k], act(s.phi1, s.algebraB1.idempotent(zi)) * s.basisV[l]);
          if (!in_image(s.embed2, val))
            w = "<v" + std::to_string(k) + "|phi1(e" + std::to_string(zi) + ")v" + std::to_string(l) + "> = " + vec_str(val);
        }
    rep.add("finite_type.vv_in_A", "finite bases: <v_k|phi1(z)v_l> in A", w.empty(), w);
  }
  {
    FirstWitness fu, fv;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        Vector x = s.basis_vector(p), y = s.basis_vector(q);
        Vector a = s.ipA(x, y);
        Vector lu(s.algebraB1.dim), lv(s.algebraB2.dim);
        ExactMatrix p2 = act(s.phi2, s.ipB2(x, y));
        ExactMatrix p1 = act(s.phi1, s.ipB1(x, y));
        for (const auto& u : s.basisU) lu = alg_add(lu, s.ipB1(u, p2 * u));
        for (const auto& v : s.basisV) lv = alg_add(lv, s.ipB2(v, p1 * v));
        std::string ctx = "xi=" + std::to_string(p) + ", eta=" + std::to_string(q);
        fu(ctx, vdiff(lu, s.embed1(a)));
        fv(ctx, vdiff(lv, s.embed2(a)));
      }
    rep.add("finite_type.trace_u", "finite bases: sum_i <u_i|phi2(<xi|eta>_B2)u_i> = <xi|eta>_A", fu.ok(), fu.w);
    rep.add("finite_type.trace_v", "finite bases: sum_k <v_k|phi1(<xi|eta>_B1)v_k> = <xi|eta>_A", fv.ok(), fv.w);
  }
  return rep;
}

LambdaMaps derive_lambda(const QuadModuleSpec& s) {
  s.check_dimensions();
  LambdaMaps out;
  const std::size_t dA = s.algebraA.dim;
  out.lambda1 = ExactMatrix(dA, s.algebraB1.dim);
  out.lambda2 = ExactMatrix(dA, s.algebraB2.dim);
  for (std::size_t z = 0; z < s.algebraB1.dim; ++z) {
    ExactMatrix pz = act(s.phi1, s.algebraB1.idempotent(z));
    Vector sum(s.algebraB2.dim);
    for (const auto& v : s.basisV) sum = alg_add(sum, s.ipB2(v, pz * v));
    Vector a = preimage(s.embed2, sum);
    for (std::size_t c = 0; c < dA; ++c) out.lambda1(c, z) = a[c];
  }
  for (std::size_t w = 0; w < s.algebraB2.dim; ++w) {
    ExactMatrix pw = act(s.phi2, s.algebraB2.idempotent(w));
    Vector sum(s.algebraB1.dim);
    for (const auto& u : s.basisU) sum = alg_add(sum, s.ipB1(u, pw * u));
    Vector a = preimage(s.embed1, sum);
    for (std::size_t c = 0; c < dA; ++c) out.lambda2(c, w) = a[c];
  }

  // faithful: each minimal idempotent goes to a nonzero positive element
  for (auto [L, tag] : {std::pair{&out.lambda1, "lambda1"}, std::pair{&out.lambda2, "lambda2"}})
    for (std::size_t b = 0; b < L->cols(); ++b) {
      Vector col = L->column_vector(b);
      bool positive = std::all_of(col.begin(), col.end(),
                                  [](const GaussianRational& x) { return x.is_real() && sgn(x.re()) >= 0; });
      if (alg_is_zero(col) || !positive)
        throw Error("LambdaNotFaithful", std::string(tag) + " sends minimal idempotent e" + std::to_string(b) +
                                             " to " + vec_str(col));
    }

  {
    FirstWitness fw;
    for (auto [L, psi, dimB, tag] : {std::tuple{&out.lambda1, &s.psi1, s.algebraB1.dim, "lambda1"},
                                     std::tuple{&out.lambda2, &s.psi2, s.algebraB2.dim, "lambda2"}})
      for (std::size_t b = 0; b < dimB; ++b)
        for (std::size_t a = 0; a < dA; ++a) {
          Vector eb(dimB);
          eb[b] = 1;
          Vector ea = s.algebraA.idempotent(a);
          fw(std::string(tag) + ", b=e" + std::to_string(b) + ", a=e" + std::to_string(a),
             vdiff(*L * alg_mul(eb, (*psi)(ea)), alg_mul(*L * eb, ea)));
        }
    out.report.add("lambda.module_map", "lambda_i(b psi_i(a)) = lambda_i(b) a", fw.ok(), fw.w);
  }
  {
    FirstWitness fw;
    for (std::size_t p = 0; p < s.dimH; ++p)
      for (std::size_t q = 0; q < s.dimH; ++q) {
        Vector x = s.basis_vector(p), y = s.basis_vector(q);
        Vector a = s.ipA(x, y);
        std::string ctx = "xi=" + std::to_string(p) + ", eta=" + std::to_string(q);
        fw("lambda1 " + ctx, vdiff(out.lambda1 * s.ipB1(x, y), a));
        fw("lambda2 " + ctx, vdiff(out.lambda2 * s.ipB2(x, y), a));
      }
    out.report.add("lambda.inner_products", "lambda_i(<xi|eta>_B_i) = <xi|eta>_A", fw.ok(), fw.w);
  }
  out.report.add("lambda.faithful", "lambda_i faithful", true);
  return out;
}

Report verify_strongly_finite_type(const QuadModuleSpec& s, const std::vector<Vector>& eBasis,
                                   const std::vector<Vector>& fBasis) {
  LambdaMaps lm = derive_lambda(s);
  Report rep;
  auto check = [&](const FinDimCommAlgebra& B, const std::vector<Vector>& basis, const ExactMatrix& lambda,
                   const AlgebraHom& psi, const char* tag) {
    FirstWitness fw;
    for (std::size_t z = 0; z < B.dim; ++z) {
      Vector ez = B.idempotent(z);
      Vector sum(B.dim);
      for (const auto& e : basis) {
        if (e.size() != B.dim) throw Error("DimensionMismatch", std::string(tag) + " basis element length");
        sum = alg_add(sum, alg_mul(e, psi(lambda * alg_mul(alg_conj(e), ez))));
      }
      fw("z = e" + std::to_string(z), vdiff(sum, ez));
    }
    rep.add(std::string("strongly_finite.") + tag, std::string("strongly finite type: basis of ") + tag + " over A",
            fw.ok(), fw.w);
  };
  check(s.algebraB1, eBasis, lm.lambda1, s.psi1, "B1");
  check(s.algebraB2, fBasis, lm.lambda2, s.psi2, "B2");
  return rep;
}

Report verify_strongly_finite_type(const QuadModuleSpec& s) {
  return verify_strongly_finite_type(s, s.algebraB1.minimal_idempotents(), s.algebraB2.minimal_idempotents());
}

RightABasis derive_right_A_basis(const QuadModuleSpec& s, const std::vector<Vector>& eBasis,
                                 const std::vector<Vector>& fBasis) {
  s.check_dimensions();
  RightABasis out;
  for (const auto& u : s.basisU)
    for (const auto& e : eBasis) out.fromU.push_back(act(s.varphi1, e) * u);
  for (const auto& v : s.basisV)
    for (const auto& f : fBasis) out.fromV.push_back(act(s.varphi2, f) * v);
  for (auto [fam, tag] : {std::pair{&out.fromU, "U"}, std::pair{&out.fromV, "V"}}) {
    FirstWitness fw;
    for (std::size_t p = 0; p < s.dimH; ++p) {
      Vector xi = s.basis_vector(p);
      Vector sum(s.dimH);
      for (const auto& w : *fam) sum = alg_add(sum, act(s.rightA, s.ipA(w, xi)) * w);
      fw("basis vector " + std::to_string(p), vdiff(sum, xi));
    }
    out.report.add(std::string("right_A_basis.") + tag, "right A-module basis: reconstruction", fw.ok(), fw.w);
  }
  return out;
}

// --- builders ---------------------------------------------------------------------

namespace {

ExactMatrix diag_indicator(std::size_t n, const std::function<bool(std::size_t)>& keep) {
  ExactMatrix m(n, n);
  for (std::size_t p = 0; p < n; ++p)
    if (keep(p)) m(p, p) = 1;
  return m;
}

AlgebraHom const_embed(std::size_t target) {
  ExactMatrix m(target, 1);
  for (std::size_t k = 0; k < target; ++k) m(k, 0) = 1;
  return AlgebraHom::from_matrix(std::move(m));
}

AlgebraHom perm_hom(const Permutation& p) {
  ExactMatrix m(p.size(), p.size());
  for (std::size_t j = 0; j < p.size(); ++j) m(p[j], j) = 1;
  return AlgebraHom::from_matrix(std::move(m));
}

Permutation inverse_perm(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) q[p[j]] = j;
  return q;
}

void require_perm(const Permutation& p, std::size_t d) {
  if (p.size() != d) throw Error("InvalidParameter", "permutation has the wrong degree");
  std::vector<bool> seen(d, false);
  for (auto x : p) {
    if (x >= d || seen[x]) throw Error("InvalidParameter", "not a permutation: " + cycles_to_string(p));
    seen[x] = true;
  }
}

}  // namespace

QuadModuleSpec build_example_MN(std::size_t M, std::size_t N) {
  if (M < 2 || N < 2) throw Error("InvalidParameter", "H_{M,N} needs M, N >= 2");
  QuadModuleSpec s;
  s.name = "H_{" + std::to_string(M) + "," + std::to_string(N) + "}";
  s.algebraA = {1, "A"};
  s.algebraB1 = {N, "B1"};
  s.algebraB2 = {M, "B2"};
  s.embed1 = const_embed(N);
  s.embed2 = const_embed(M);
  s.psi1 = const_embed(N);
  s.psi2 = const_embed(M);
  s.dimH = M * N;
  const std::size_t n = s.dimH;
  auto first = [N](std::size_t p) { return p / N; };
  auto second = [N](std::size_t p) { return p % N; };
  s.rightA = {ExactMatrix::identity(n)};
  s.innerA = {ExactMatrix::identity(n)};
  for (std::size_t k = 0; k < N; ++k) {
    ExactMatrix proj = diag_indicator(n, [&](std::size_t p) { return second(p) == k; });
    s.varphi1.push_back(proj);
    s.phi1.push_back(proj);
    s.innerB1.push_back(proj);
  }
  for (std::size_t i = 0; i < M; ++i) {
    ExactMatrix proj = diag_indicator(n, [&](std::size_t p) { return first(p) == i; });
    s.varphi2.push_back(proj);
    s.phi2.push_back(proj);
    s.innerB2.push_back(proj);
  }
  for (std::size_t i = 0; i < M; ++i) {
    Vector u(n);
    for (std::size_t k = 0; k < N; ++k) u[i * N + k] = 1;
    s.basisU.push_back(u);
  }
  for (std::size_t k = 0; k < N; ++k) {
    Vector v(n);
    for (std::size_t i = 0; i < M; ++i) v[i * N + k] = 1;
    s.basisV.push_back(v);
  }
  return s;
}

Permutation parse_cycles(const std::string& text, std::size_t d) {
  Permutation p(d);
  for (std::size_t j = 0; j < d; ++j) p[j] = j;
  std::size_t pos = 0;
  auto bad = [&](const std::string& why) { throw Error("InvalidParameter", "cycle notation '" + text + "': " + why); };
  std::set<std::size_t> used;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      ++pos;
      continue;
    }
    if (text[pos] != '(') bad("expected '('");
    std::size_t close = text.find(')', pos);
    if (close == std::string::npos) bad("unbalanced parenthesis");
    std::string body = text.substr(pos + 1, close - pos - 1);
    std::vector<std::size_t> cyc;
    // letters separated by commas/spaces, or packed single digits when d <= 9
    bool separated = body.find_first_of(", ") != std::string::npos;
    std::stringstream ss(body);
    std::string tok;
    std::vector<std::string> toks;
    if (separated) {
      for (char& c : body)
        if (c == ',') c = ' ';
      std::stringstream s2(body);
      while (s2 >> tok) toks.push_back(tok);
    } else {
      for (char c : body) toks.emplace_back(1, c);
    }
    for (const auto& t : toks) {
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) bad("bad letter '" + t + "'");
      std::size_t x = std::stoul(t);
      if (x < 1 || x > d) bad("letter out of range");
      if (!used.insert(x - 1).second) bad("letter repeated");
      cyc.push_back(x - 1);
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    pos = close + 1;
  }
  return p;
}

std::string cycles_to_string(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (seen[j] || p[j] == j) continue;
    out += "(";
    std::size_t x = j;
    bool firstLetter = true;
    while (!seen[x] && x < p.size()) {
      seen[x] = true;
      out += (firstLetter ? "" : p.size() > 9 ? "," : "") + std::to_string(x + 1);
      firstLetter = false;
      x = p[x];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

QuadModuleSpec build_example_alpha_beta(std::size_t d, const Permutation& sigma, const Permutation& tau) {
  if (d == 0) throw Error("InvalidParameter", "d must be positive");
  require_perm(sigma, d);
  require_perm(tau, d);
  QuadModuleSpec s;
  s.name = "H_{alpha,beta}(d=" + std::to_string(d) + ",sigma=" + cycles_to_string(sigma) +
           ",tau=" + cycles_to_string(tau) + ")";
  s.algebraA = {d, "A"};
  s.algebraB1 = {d, "B1"};
  s.algebraB2 = {d, "B2"};
  s.embed1 = AlgebraHom::from_matrix(ExactMatrix::identity(d));
  s.embed2 = AlgebraHom::from_matrix(ExactMatrix::identity(d));
  // psi_1 = alpha^{-1}, psi_2 = beta^{-1}: the only choice satisfying every axiom
  s.psi1 = perm_hom(inverse_perm(sigma));
  s.psi2 = perm_hom(inverse_perm(tau));
  s.dimH = d;
  auto e = [d](std::size_t j) { return diag_indicator(d, [j](std::size_t p) { return p == j; }); };
  for (std::size_t b = 0; b < d; ++b) {
    s.rightA.push_back(e(b));
    s.innerA.push_back(e(b));
    s.varphi1.push_back(e(sigma[b]));        // x alpha(z)
    s.varphi2.push_back(e(tau[b]));          // x beta(z)
    s.phi1.push_back(e(tau[sigma[b]]));      // beta(alpha(z)) x
    s.phi2.push_back(e(sigma[tau[b]]));      // alpha(beta(w)) x
    s.innerB1.push_back(e(sigma[b]));        // alpha^{-1}(x^* x')
    s.innerB2.push_back(e(tau[b]));          // beta^{-1}(x^* x')
  }
  s.basisU = {Vector(d, GaussianRational(1))};
  s.basisV = {Vector(d, GaussianRational(1))};
  return s;
}

}  // namespace quadmod
