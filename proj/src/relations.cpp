#include "quadmod/relations.hpp"

#include "identity_family.hpp"

#include <map>

namespace quadmod {

// --- B_circ model -------------------------------------------------------------------

namespace {

bool is_diagonal(const ExactMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c && !m(r, c).is_zero()) return false;
  return true;
}

std::string idx(std::size_t k) { return std::to_string(k); }

}  // namespace

BCircModel bcirc_model(const QuadModuleSpec& s) {
  std::vector<ExactMatrix> gens;
  for (std::size_t a = 0; a < s.algebraB1.dim; ++a) gens.push_back(act(s.phi1, s.algebraB1.idempotent(a)));
  for (std::size_t b = 0; b < s.algebraB2.dim; ++b) gens.push_back(act(s.phi2, s.algebraB2.idempotent(b)));
  for (std::size_t g = 0; g < gens.size(); ++g)
    if (!is_diagonal(gens[g]))
      throw Error("AssumptionsViolated", "left action generator " + idx(g) + " is not diagonal");

  // coordinates with the same diagonal signature cannot be separated
  std::map<std::vector<std::string>, std::vector<std::size_t>> classes;
  std::vector<std::vector<std::string>> order;
  for (std::size_t p = 0; p < s.dimH; ++p) {
    std::vector<std::string> sig;
    bool nonzero = false;
    for (const auto& g : gens) {
      sig.push_back(g(p, p).to_string());
      nonzero = nonzero || !g(p, p).is_zero();
    }
    if (!nonzero) continue;
    auto [it, fresh] = classes.try_emplace(sig);
    if (fresh) order.push_back(sig);
    it->second.push_back(p);
  }
  BCircModel m;
  for (const auto& sig : order) {
    ExactMatrix e(s.dimH, s.dimH);
    for (std::size_t p : classes[sig]) e(p, p) = 1;
    m.idempotents.push_back(std::move(e));
  }
  return m;
}

Vector BCircModel::coordinates(const ExactMatrix& L) const {
  if (idempotents.empty()) throw Error("NotInBCirc", "empty model");
  const std::size_t n = idempotents[0].rows();
  if (L.rows() != n || L.cols() != n) throw Error("DimensionMismatch", "operator size differs from dim H");
  if (!is_diagonal(L)) throw Error("NotInBCirc", "operator is not diagonal");
  Vector c(dim());
  std::vector<bool> covered(n, false);
  for (std::size_t q = 0; q < dim(); ++q) {
    bool first = true;
    for (std::size_t p = 0; p < n; ++p) {
      if (idempotents[q](p, p).is_zero()) continue;
      covered[p] = true;
      if (first) {
        c[q] = L(p, p);
        first = false;
      } else if (!(L(p, p) == c[q])) {
        throw Error("NotInBCirc", "diagonal entries " + idx(p) + " differ inside one minimal idempotent");
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!covered[p] && !L(p, p).is_zero()) throw Error("NotInBCirc", "coordinate " + idx(p) + " lies outside the model");
  return c;
}

bool BCircModel::contains(const ExactMatrix& L) const {
  try {
    coordinates(L);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// --- generators -----------------------------------------------------------------------

FockOperator GeneratorFamily::pi_formula(const ExactMatrix& L) const {
  const auto& s = fock->spec();
  FockOperator out = fock->zero();
  for (std::size_t j = 0; j < M(); ++j) {
    Vector Lu = L * s.basisU[j];
    FockOperator left = fock->zero();
    for (std::size_t i = 0; i < M(); ++i) {
      Vector c = s.ipB1(s.basisU[i], Lu);
      if (!alg_is_zero(c)) left += S[i] * Phi1(c);
    }
    if (!left.is_zero()) out += left * Sa[j];
  }
  for (std::size_t l = 0; l < N(); ++l) {
    Vector Lv = L * s.basisV[l];
    FockOperator left = fock->zero();
    for (std::size_t k = 0; k < N(); ++k) {
      Vector c = s.ipB2(s.basisV[k], Lv);
      if (!alg_is_zero(c)) left += T[k] * Phi2(c);
    }
    if (!left.is_zero()) out += left * Ta[l];
  }
  return out;
}

using detail::Family;
using detail::full;
using detail::exact;
using detail::positive;
using detail::modulo_compacts;

GeneratorFamily make_generators(const TruncatedFock& fock) {
  if (fock.depth() < 3) throw Error("DepthTooSmall", "generator checks need depth >= 3");
  const auto& s = fock.spec();
  GeneratorFamily g;
  g.fock = &fock;
  g.leftAction = [&fock](int i, const Vector& b) { return left_action(fock, i, b); };
  for (const auto& u : s.basisU) {
    g.S.push_back(creation(fock, CreationKind::s, u));
    g.Sa.push_back(fock.adjoint(g.S.back()));
  }
  for (const auto& v : s.basisV) {
    g.T.push_back(creation(fock, CreationKind::t, v));
    g.Ta.push_back(fock.adjoint(g.T.back()));
  }
  g.bcirc = bcirc_model(s);
  g.window = {2, fock.depth() - 1};

  Family fs{fock, exact(fock), {}}, ft{fock, exact(fock), {}};
  for (std::size_t p = 0; p < s.dimH; ++p) {
    Vector xi = s.basis_vector(p);
    FockOperator rs = fock.zero(), rt = fock.zero();
    for (std::size_t i = 0; i < g.M(); ++i) rs += g.S[i] * g.Phi1(s.ipB1(s.basisU[i], xi));
    for (std::size_t k = 0; k < g.N(); ++k) rt += g.T[k] * g.Phi2(s.ipB2(s.basisV[k], xi));
    fs.expect(creation(fock, CreationKind::s, xi), rs, "xi = e" + idx(p));
    ft.expect(creation(fock, CreationKind::t, xi), rt, "xi = e" + idx(p));
  }
  fs.emit(g.report, "generators.expansion_s", "s_xi expands over the B1-basis");
  ft.emit(g.report, "generators.expansion_t", "t_xi expands over the B2-basis");
  return g;
}

// --- shared identity families --------------------------------------------------------------

namespace {

std::vector<Vector> idempotents(const FinDimCommAlgebra& alg) { return alg.minimal_idempotents(); }

// a generic element with distinct complex coordinates
Vector generic(const FinDimCommAlgebra& alg) {
  Vector z(alg.dim);
  for (std::size_t k = 0; k < alg.dim; ++k) z[k] = GaussianRational(mpq_class(long(k) + 1, 2), mpq_class(1 - long(k)));
  return z;
}

std::string st_orthogonality(const GeneratorFamily& g) {
  Family f{*g.fock, positive(*g.fock), {}};
  for (std::size_t j = 0; j < g.M(); ++j)
    for (std::size_t l = 0; l < g.N(); ++l) {
      f.expect(g.Sa[j] * g.T[l], g.fock->zero(), "S" + idx(j) + "* T" + idx(l));
      f.expect(g.Ta[l] * g.S[j], g.fock->zero(), "T" + idx(l) + "* S" + idx(j));
    }
  return f.witness;
}

FockOperator range_sum(const std::vector<FockOperator>& X, const std::vector<FockOperator>& Xa, const TruncatedFock& f) {
  FockOperator out = f.zero();
  for (std::size_t i = 0; i < X.size(); ++i) out += X[i] * Xa[i];
  return out;
}

std::string unit_decomposition(const GeneratorFamily& g) {
  Family f{*g.fock, modulo_compacts(*g.fock), {}};
  f.expect(range_sum(g.S, g.Sa, *g.fock) + range_sum(g.T, g.Ta, *g.fock), g.fock->identity(), "sum of range projections");
  return f.witness;
}

std::string inner_S(const GeneratorFamily& g) {
  const auto& s = g.fock->spec();
  Family f{*g.fock, exact(*g.fock), {}};
  for (std::size_t i = 0; i < g.M(); ++i)
    for (std::size_t j = 0; j < g.M(); ++j)
      f.expect(g.Sa[i] * g.S[j], g.Phi1(s.ipB1(s.basisU[i], s.basisU[j])), "S" + idx(i) + "* S" + idx(j));
  return f.witness;
}

std::string inner_T(const GeneratorFamily& g) {
  const auto& s = g.fock->spec();
  Family f{*g.fock, exact(*g.fock), {}};
  for (std::size_t k = 0; k < g.N(); ++k)
    for (std::size_t l = 0; l < g.N(); ++l)
      f.expect(g.Ta[k] * g.T[l], g.Phi2(s.ipB2(s.basisV[k], s.basisV[l])), "T" + idx(k) + "* T" + idx(l));
  return f.witness;
}

// x X_j = sum_i X_i Phi(<basis_i | L basis_j>) where x acts on H by L.
// `letter` picks the generator family (1: S over basisU, 2: T over basisV); `acting` picks Phi1/Phi2 for x.
std::string intertwining(const GeneratorFamily& g, int acting, int letter) {
  const auto& s = g.fock->spec();
  Family f{*g.fock, exact(*g.fock), {}};
  const auto& alg = acting == 1 ? s.algebraB1 : s.algebraB2;
  const auto& X = letter == 1 ? g.S : g.T;
  const auto& basis = letter == 1 ? s.basisU : s.basisV;
  for (const auto& z : idempotents(alg)) {
    ExactMatrix L = act(acting == 1 ? s.phi1 : s.phi2, z);
    FockOperator x = acting == 1 ? g.Phi1(z) : g.Phi2(z);
    for (std::size_t j = 0; j < X.size(); ++j) {
      Vector Lb = L * basis[j];
      FockOperator rhs = g.fock->zero();
      for (std::size_t i = 0; i < X.size(); ++i)
        rhs += letter == 1 ? X[i] * g.Phi1(s.ipB1(basis[i], Lb)) : X[i] * g.Phi2(s.ipB2(basis[i], Lb));
      f.expect(x * X[j], rhs, "element " + alg.label + " idempotent, generator " + idx(j));
    }
  }
  return f.witness;
}

// X_i* x X_j = Phi(<basis_i | L basis_j>)
std::string compression(const GeneratorFamily& g, int acting, int letter) {
  const auto& s = g.fock->spec();
  Family f{*g.fock, exact(*g.fock), {}};
  const auto& alg = acting == 1 ? s.algebraB1 : s.algebraB2;
  const auto& X = letter == 1 ? g.S : g.T;
  const auto& Xa = letter == 1 ? g.Sa : g.Ta;
  const auto& basis = letter == 1 ? s.basisU : s.basisV;
  for (std::size_t a = 0; a < alg.dim; ++a) {
    Vector z = alg.idempotent(a);
    ExactMatrix L = act(acting == 1 ? s.phi1 : s.phi2, z);
    FockOperator x = acting == 1 ? g.Phi1(z) : g.Phi2(z);
    for (std::size_t j = 0; j < X.size(); ++j) {
      FockOperator xX = x * X[j];
      Vector Lb = L * basis[j];
      for (std::size_t i = 0; i < X.size(); ++i) {
        FockOperator rhs = letter == 1 ? g.Phi1(s.ipB1(basis[i], Lb)) : g.Phi2(s.ipB2(basis[i], Lb));
        f.expect(Xa[i] * xX, rhs, "e" + idx(a) + ", i = " + idx(i) + ", j = " + idx(j));
      }
    }
  }
  return f.witness;
}

}  // namespace

// --- reports -------------------------------------------------------------------------------------

Report verify_section3(const GeneratorFamily& g) {
  const TruncatedFock& fock = *g.fock;
  const auto& s = fock.spec();
  Report rep;

  {
    Family f{fock, full(fock), {}};
    Vector x = s.basis_vector(0), y = s.basis_vector(s.dimH - 1);
    GaussianRational c(mpq_class(1, 2), mpq_class(2)), d(-3);
    Vector z(s.dimH);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = c * x[k] + d * y[k];
    for (auto kind : {CreationKind::s, CreationKind::t})
      f.expect(creation(fock, kind, z), creation(fock, kind, x) * c + creation(fock, kind, y) * d,
               kind == CreationKind::s ? "s" : "t");
    f.emit(rep, "creation.linearity", "creation operators are linear in xi");
  }

  std::vector<ExactMatrix> Ls = {ExactMatrix::identity(s.dimH)};
  for (const auto& e : g.bcirc.idempotents) Ls.push_back(e);

  // s_{L xi varphi_1(z)} = L-bar s_xi Phi_1(z), and the t analogue
  for (int letter : {1, 2}) {
    Family f{fock, full(fock), {}};
    const auto& alg = letter == 1 ? s.algebraB1 : s.algebraB2;
    const auto& right = letter == 1 ? s.varphi1 : s.varphi2;
    auto kind = letter == 1 ? CreationKind::s : CreationKind::t;
    for (std::size_t li = 0; li < Ls.size(); ++li) {
      FockOperator Lbar = fock.lift(Ls[li]);
      for (std::size_t a = 0; a < alg.dim; ++a) {
        Vector z = alg.idempotent(a);
        FockOperator Pz = letter == 1 ? g.Phi1(z) : g.Phi2(z);
        ExactMatrix Rz = act(right, z);
        for (std::size_t p = 0; p < s.dimH; ++p) {
          Vector xi = s.basis_vector(p);
          Vector moved = Ls[li] * (Rz * xi);
          f.expect(creation(fock, kind, moved), Lbar * creation(fock, kind, xi) * Pz,
                   "L" + idx(li) + ", z = e" + idx(a) + ", xi = e" + idx(p));
        }
      }
    }
    f.emit(rep, letter == 1 ? "creation.operator_covariance_s" : "creation.operator_covariance_t",
           "s_{L xi varphi(z)} = L-bar s_xi Phi(z)");
  }

  // s_zeta* L-bar s_xi = Phi_1(<zeta | L xi>_{B1})
  for (int letter : {1, 2}) {
    Family f{fock, exact(fock), {}};
    const auto& basis = letter == 1 ? s.basisU : s.basisV;
    const auto& X = letter == 1 ? g.S : g.T;
    const auto& Xa = letter == 1 ? g.Sa : g.Ta;
    auto kind = letter == 1 ? CreationKind::s : CreationKind::t;
    for (std::size_t li = 0; li < Ls.size(); ++li) {
      FockOperator Lbar = fock.lift(Ls[li]);
      for (std::size_t p = 0; p < s.dimH; ++p) {
        Vector xi = s.basis_vector(p);
        FockOperator LX = Lbar * creation(fock, kind, xi);
        Vector Lxi = Ls[li] * xi;
        for (std::size_t i = 0; i < X.size(); ++i) {
          FockOperator rhs = letter == 1 ? g.Phi1(s.ipB1(basis[i], Lxi)) : g.Phi2(s.ipB2(basis[i], Lxi));
          f.expect(Xa[i] * LX, rhs, "L" + idx(li) + ", zeta = basis " + idx(i) + ", xi = e" + idx(p));
        }
      }
    }
    f.emit(rep, letter == 1 ? "creation.compressed_inner_s" : "creation.compressed_inner_t",
           "s_zeta* L-bar s_xi = Phi(<zeta|L xi>)");
  }
  return rep;
}

Report verify_section4(const GeneratorFamily& g) {
  const TruncatedFock& fock = *g.fock;
  Report rep;
  {
    auto w = st_orthogonality(g);
    rep.add({"section4.st_orthogonality", "s_xi* t_zeta P_n = 0 for n >= 1", positive(fock), w.empty(), w, false});
  }

  Projections pr = projections(fock);
  FockOperator SS = range_sum(g.S, g.Sa, fock), TT = range_sum(g.T, g.Ta, fock);
  {
    Family f{fock, full(fock), {}};
    f.expect(SS, pr.P[1] + pr.Ps, "sum S_i S_i*");
    f.emit(rep, "section4.range_s", "sum s_i s_i* = P_1 + P_s");
  }
  {
    Family f{fock, full(fock), {}};
    f.expect(TT, pr.P[1] + pr.Pt, "sum T_k T_k*");
    f.emit(rep, "section4.range_t", "sum t_k t_k* = P_1 + P_t");
  }
  {
    Family f{fock, full(fock), {}};
    f.expect(SS + TT + pr.P[0], fock.identity() + pr.P[1], "sum with P_0");
    f.emit(rep, "section4.unit_with_corrections", "sum s_i s_i* + sum t_k t_k* + P_0 = 1 + P_1");
  }
  auto add = [&](const std::string& id, const std::string& cite, Window w, const std::string& witness) {
    rep.add({id, cite, w, witness.empty(), witness, false});
  };
  add("section4.unit", "sum S_i S_i* + sum T_k T_k* = 1 in the quotient", modulo_compacts(fock), unit_decomposition(g));
  add("section4.inner_S", "S_i* S_j = Phi_1(<u_i|u_j>_B1)", exact(fock), inner_S(g));
  add("section4.inner_T", "T_k* T_l = Phi_2(<v_k|v_l>_B2)", exact(fock), inner_T(g));
  add("section4.intertwine_zS", "Phi_1(z) S_j = sum S_i Phi_1(<u_i|phi_1(z) u_j>)", exact(fock), intertwining(g, 1, 1));
  add("section4.intertwine_zT", "Phi_1(z) T_l = sum T_k Phi_2(<v_k|phi_1(z) v_l>)", exact(fock), intertwining(g, 1, 2));
  add("section4.intertwine_wS", "Phi_2(w) S_j = sum S_i Phi_1(<u_i|phi_2(w) u_j>)", exact(fock), intertwining(g, 2, 1));
  add("section4.intertwine_wT", "Phi_2(w) T_l = sum T_k Phi_2(<v_k|phi_2(w) v_l>)", exact(fock), intertwining(g, 2, 2));
  return rep;
}

Report verify_relations_H(const GeneratorFamily& g) {
  const TruncatedFock& fock = *g.fock;
  Report rep;
  auto add = [&](const std::string& id, const std::string& cite, Window w, const std::string& witness) {
    rep.add({id, cite, w, witness.empty(), witness, false});
  };
  add("H.unit", "relations (H): sum S S* + sum T T* = 1", modulo_compacts(fock), unit_decomposition(g));
  add("H.orthogonality", "relations (H): S_j* T_l = 0", positive(fock), st_orthogonality(g));
  add("H.inner_S", "relations (H): S_i* S_j = <u_i|u_j>_B1", exact(fock), inner_S(g));
  add("H.inner_T", "relations (H): T_k* T_l = <v_k|v_l>_B2", exact(fock), inner_T(g));
  add("H.zS", "relations (H): z S_j expansion", exact(fock), intertwining(g, 1, 1));
  add("H.zT", "relations (H): z T_l expansion", exact(fock), intertwining(g, 1, 2));
  add("H.wS", "relations (H): w S_j expansion", exact(fock), intertwining(g, 2, 1));
  add("H.wT", "relations (H): w T_l expansion", exact(fock), intertwining(g, 2, 2));
  add("H.compress_zS", "S_i* z S_j = <u_i|phi_1(z) u_j>_B1", exact(fock), compression(g, 1, 1));
  add("H.compress_wS", "S_i* w S_j = <u_i|phi_2(w) u_j>_B1", exact(fock), compression(g, 2, 1));
  add("H.compress_zT", "T_k* z T_l = <v_k|phi_1(z) v_l>_B2", exact(fock), compression(g, 1, 2));
  add("H.compress_wT", "T_k* w T_l = <v_k|phi_2(w) v_l>_B2", exact(fock), compression(g, 2, 2));
  return rep;
}

Report verify_section5_core(const GeneratorFamily& g) {
  const TruncatedFock& fock = *g.fock;
  const auto& s = fock.spec();
  Report rep;

  // S_j* w S_j lies in A, and the trace formula; then the T analogue
  for (int letter : {1, 2}) {
    const auto& X = letter == 1 ? g.S : g.T;
    const auto& Xa = letter == 1 ? g.Sa : g.Ta;
    const auto& basis = letter == 1 ? s.basisU : s.basisV;
    const auto& other = letter == 1 ? s.algebraB2 : s.algebraB1;
    const AlgebraHom& emb = letter == 1 ? s.embed1 : s.embed2;
    auto PhiHome = [&](const Vector& b) { return letter == 1 ? g.Phi1(b) : g.Phi2(b); };
    auto PhiOther = [&](const Vector& b) { return letter == 1 ? g.Phi2(b) : g.Phi1(b); };
    auto ipHome = [&](const Vector& x, const Vector& y) { return letter == 1 ? s.ipB1(x, y) : s.ipB2(x, y); };
    const ActionTensor& otherPhi = letter == 1 ? s.phi2 : s.phi1;

    Family member{fock, exact(fock), {}};
    std::vector<FockOperator> summed;  // sum_j X_j* Phi_other(e_b) X_j, per idempotent b
    for (std::size_t b = 0; b < other.dim; ++b) {
      Vector w = other.idempotent(b);
      FockOperator Pw = PhiOther(w);
      ExactMatrix L = act(otherPhi, w);
      FockOperator sum = fock.zero();
      for (std::size_t j = 0; j < X.size(); ++j) {
        FockOperator c = Xa[j] * Pw * X[j];
        sum += c;
        Vector val = ipHome(basis[j], L * basis[j]);
        auto a = solve(emb.matrix, val);
        if (!a) {
          member.fail("e" + idx(b) + ", j = " + idx(j) + ": compressed element is not in the image of A");
          continue;
        }
        member.expect(c, PhiHome(emb(*a)), "e" + idx(b) + ", j = " + idx(j));
      }
      summed.push_back(std::move(sum));
    }
    member.emit(rep, letter == 1 ? "section5.S_compression_in_A" : "section5.T_compression_in_A",
                letter == 1 ? "S_j* w S_j belongs to A" : "T_l* z T_l belongs to A");

    Family trace{fock, exact(fock), {}};
    for (std::size_t p = 0; p < s.dimH && trace.witness.empty(); ++p)
      for (std::size_t q = 0; q < s.dimH; ++q) {
        Vector xi = s.basis_vector(p), eta = s.basis_vector(q);
        Vector ip = letter == 1 ? s.ipB2(xi, eta) : s.ipB1(xi, eta);
        FockOperator lhs = fock.zero();
        for (std::size_t b = 0; b < other.dim; ++b)
          if (!ip[b].is_zero()) lhs += summed[b] * ip[b];
        trace.expect(lhs, PhiHome(emb(s.ipA(xi, eta))), "xi = e" + idx(p) + ", eta = e" + idx(q));
      }
    trace.emit(rep, letter == 1 ? "section5.trace_S" : "section5.trace_T",
               letter == 1 ? "sum_j S_j* <xi|eta>_B2 S_j = <xi|eta>_A" : "sum_l T_l* <xi|eta>_B1 T_l = <xi|eta>_A");
  }

  // z = pi(phi_1(z)) and friends, modulo compacts
  GramForm gA(s.innerA.empty() ? ExactMatrix() : scalarize(s.innerA));
  for (int acting : {1, 2}) {
    const auto& alg = acting == 1 ? s.algebraB1 : s.algebraB2;
    const auto& phi = acting == 1 ? s.phi1 : s.phi2;
    auto Phi = [&](const Vector& b) { return acting == 1 ? g.Phi1(b) : g.Phi2(b); };
    Family plain{fock, modulo_compacts(fock), {}}, star{fock, modulo_compacts(fock), {}};
    std::vector<Vector> zs = idempotents(alg);
    zs.push_back(generic(alg));
    for (std::size_t n = 0; n < zs.size(); ++n) {
      ExactMatrix L = act(phi, zs[n]);
      FockOperator x = Phi(zs[n]);
      plain.expect(x, g.pi_formula(L), "element " + idx(n));
      star.expect(fock.adjoint(x), g.pi_formula(gram_adjoint(L, gA, gA)), "element " + idx(n));
    }
    plain.emit(rep, acting == 1 ? "section5.z_expansion" : "section5.w_expansion",
               acting == 1 ? "z = sum S <u|phi_1(z) u> S* + sum T <v|phi_1(z) v> T*"
                           : "w = sum S <u|phi_2(w) u> S* + sum T <v|phi_2(w) v> T*");
    star.emit(rep, acting == 1 ? "section5.z_star_expansion" : "section5.w_star_expansion",
              acting == 1 ? "z* expands through phi_1(z)*" : "w* expands through phi_2(w)*");
  }
  {
    Family zw{fock, modulo_compacts(fock), {}}, wz{fock, modulo_compacts(fock), {}};
    for (std::size_t a = 0; a < s.algebraB1.dim; ++a)
      for (std::size_t b = 0; b < s.algebraB2.dim; ++b) {
        Vector z = s.algebraB1.idempotent(a), w = s.algebraB2.idempotent(b);
        ExactMatrix Lz = act(s.phi1, z), Lw = act(s.phi2, w);
        FockOperator Z = g.Phi1(z), W = g.Phi2(w);
        std::string ctx = "z = e" + idx(a) + ", w = f" + idx(b);
        zw.expect(Z * W, g.pi_formula(Lz * Lw), ctx);
        wz.expect(W * Z, g.pi_formula(Lw * Lz), ctx);
      }
    zw.emit(rep, "section5.zw_expansion", "zw expands through phi_1(z) phi_2(w)");
    wz.emit(rep, "section5.wz_expansion", "wz expands through phi_2(w) phi_1(z)");
  }
  {
    Family rec{fock, modulo_compacts(fock), {}};
    for (std::size_t q = 0; q < g.bcirc.dim(); ++q)
      rec.expect(fock.lift(g.bcirc.idempotents[q]), g.pi_formula(g.bcirc.idempotents[q]),
                 "minimal idempotent " + idx(q));
    rec.emit(rep, "section5.bcirc_reconstruction", "x = sum S <u|phi_o(x) u> S* + sum T <v|phi_o(x) v> T* on B_o");
  }
  return rep;
}

PiResult compute_pi(const GeneratorFamily& g, const ExactMatrix& L) {
  g.bcirc.coordinates(L);  // throws NotInBCirc
  const TruncatedFock& fock = *g.fock;
  const auto& s = fock.spec();
  PiResult out{g.pi_formula(L), {}};

  Family comp{fock, g.window, {}};
  for (std::size_t h = 0; h < g.M(); ++h)
    for (std::size_t h2 = 0; h2 < g.M(); ++h2)
      comp.expect(g.Sa[h] * out.op * g.S[h2], g.Phi1(s.ipB1(s.basisU[h], L * s.basisU[h2])),
                  "h = " + idx(h) + ", h' = " + idx(h2));
  for (std::size_t k = 0; k < g.N(); ++k)
    for (std::size_t k2 = 0; k2 < g.N(); ++k2)
      comp.expect(g.Ta[k] * out.op * g.T[k2], g.Phi2(s.ipB2(s.basisV[k], L * s.basisV[k2])),
                  "k = " + idx(k) + ", k' = " + idx(k2));
  comp.emit(out.report, "pi.compression", "S_h* pi(L) S_h' = <u_h|L u_h'>_B1");

  Family lift{fock, g.window, {}};
  lift.expect(out.op, fock.lift(L), "pi(L) vs L-bar");
  lift.emit(out.report, "pi.acts_as_L", "pi(phi_1(z)) = z");

  bool piZero = fock.defect_witness(out.op, g.window).empty();
  bool lZero = L.is_zero();
  out.report.add({"pi.injective", "pi is injective", g.window, piZero == lZero,
                  piZero == lZero ? "" : std::string("pi(L) vanishes on the window but L != 0"), false});
  return out;
}

std::vector<std::size_t> core_filtration_dims(const GeneratorFamily& g, std::size_t n) {
  const TruncatedFock& fock = *g.fock;
  const std::size_t K = fock.depth();
  if (n + 1 > K) throw Error("InvalidParameter", "filtration index must be at most K - 1");
  const std::size_t top = fock.level_dims()[K];

  std::vector<const FockOperator*> gens, adjs;
  for (std::size_t i = 0; i < g.M(); ++i) {
    gens.push_back(&g.S[i]);
    adjs.push_back(&g.Sa[i]);
  }
  for (std::size_t k = 0; k < g.N(); ++k) {
    gens.push_back(&g.T[k]);
    adjs.push_back(&g.Ta[k]);
  }

  std::vector<std::size_t> dims;
  for (std::size_t m = 0; m <= n; ++m) {
    const std::size_t low = K - m;
    // words of length m as blocks F_low -> F_K and F_K -> F_low, lexicographic over S then T
    std::vector<ExactMatrix> up = {ExactMatrix::identity(top)}, down = {ExactMatrix::identity(top)};
    for (std::size_t step = 0; step < m; ++step) {
      // the word mu = g_1 ... g_m, built right to left: level low+step -> top
      std::vector<ExactMatrix> nu, nd;
      for (std::size_t w = 0; w < up.size(); ++w)
        for (std::size_t x = 0; x < gens.size(); ++x) {
          const std::size_t from = K - step - 1;
          const ExactMatrix* sb = gens[x]->block(from + 1, from);
          const ExactMatrix* ab = adjs[x]->block(from, from + 1);
          nu.push_back(sb ? up[w] * *sb : ExactMatrix(top, fock.level_dims()[from]));
          nd.push_back(ab ? *ab * down[w] : ExactMatrix(fock.level_dims()[from], top));
        }
      up = std::move(nu);
      down = std::move(nd);
    }
    // the products are very sparse: multiply column lists of u b by row lists of d
    using Entries = std::vector<std::pair<std::size_t, GaussianRational>>;
    const std::size_t mid = fock.level_dims()[low];
    std::vector<std::vector<Entries>> downRows;
    for (const auto& d : down) {
      std::vector<Entries> rows(mid);
      for (std::size_t k = 0; k < mid; ++k)
        for (std::size_t c = 0; c < top; ++c)
          if (!d(k, c).is_zero()) rows[k].emplace_back(c, d(k, c));
      downRows.push_back(std::move(rows));
    }
    SpanTracker span(top * top);
    for (const auto& e : g.bcirc.idempotents) {
      FockOperator b = fock.lift(e);
      const ExactMatrix* bb = b.block(low, low);
      if (!bb) continue;
      for (const auto& u : up) {
        ExactMatrix ub = u * *bb;
        std::vector<Entries> cols(mid);
        bool any = false;
        for (std::size_t r = 0; r < top; ++r)
          for (std::size_t k = 0; k < mid; ++k)
            if (!ub(r, k).is_zero()) {
              cols[k].emplace_back(r, ub(r, k));
              any = true;
            }
        if (!any) continue;
        for (const auto& rows : downRows) {
          Entries op;
          for (std::size_t k = 0; k < mid; ++k)
            for (const auto& [r, x] : cols[k])
              for (const auto& [c, y] : rows[k]) op.emplace_back(r * top + c, x * y);
          if (!op.empty()) span.add_sparse(op);
        }
      }
    }
    dims.push_back(span.rank());
  }
  return dims;
}

// --- mutations -------------------------------------------------------------------------------

const std::vector<Mutation>& mutation_catalog() {
  static const std::vector<Mutation> catalog = {
      {"rightA[0] diagonal entry zeroed", [](QuadModuleSpec& s) { s.rightA[0](0, 0) = 0; }},
      {"varphi1[0] off-diagonal entry set", [](QuadModuleSpec& s) { s.varphi1[0](0, 1) = 1; }},
      {"varphi2[1] diagonal entry doubled", [](QuadModuleSpec& s) { s.varphi2[1](3, 3) *= 2; }},
      {"phi1[0] diagonal entry flipped", [](QuadModuleSpec& s) { s.phi1[0](0, 0) = s.phi1[0](0, 0).is_zero() ? 1 : 0; }},
      {"phi2[1] off-diagonal entry set", [](QuadModuleSpec& s) { s.phi2[1](2, 0) = 1; }},
      {"innerA[0] diagonal entry negated", [](QuadModuleSpec& s) { s.innerA[0](0, 0) = -s.innerA[0](0, 0); }},
      {"innerB1[0] entry made non-Hermitian", [](QuadModuleSpec& s) { s.innerB1[0](0, 2) = GaussianRational::i(); }},
      {"innerB2[1] diagonal entry scaled", [](QuadModuleSpec& s) { s.innerB2[1](3, 3) *= 3; }},
      {"basisU[0] entry perturbed", [](QuadModuleSpec& s) { s.basisU[0][1] = 0; }},
      {"psi1 matrix entry changed", [](QuadModuleSpec& s) { s.psi1.matrix(0, 0) = 2; }},
  };
  return catalog;
}

}  // namespace quadmod
