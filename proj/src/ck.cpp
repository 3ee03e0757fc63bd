#include "quadmod/ck.hpp"

#include "identity_family.hpp"

#include <map>
#include <tuple>

namespace quadmod {

using detail::Family;

namespace {

std::string idx(std::size_t k) { return std::to_string(k); }

std::string pair_name(std::size_t i, std::size_t k) { return "(" + idx(i) + "," + idx(k) + ")"; }

// generator a of the CK family: S-indices first, then T-indices
const FockOperator& X(const CKGenerators& g, std::size_t a) {
  const std::size_t n = g.M * g.N;
  return a < n ? g.sIdx[a] : g.tIdx[a - n];
}

std::string X_name(const CKGenerators& g, std::size_t a) {
  const std::size_t n = g.M * g.N;
  const std::size_t p = a % n;
  return std::string(a < n ? "S" : "T") + pair_name(p / g.N, p % g.N);
}

}  // namespace

CKGenerators build_ck_generators(std::size_t M, std::size_t N, std::size_t K) {
  if (K < 3) throw Error("DepthTooSmall", "the Cuntz-Krieger family needs depth >= 3");
  return build_ck_generators(std::make_shared<const TruncatedFock>(build_fock(build_example_MN(M, N), K)), M, N);
}

CKGenerators build_ck_generators(std::shared_ptr<const TruncatedFock> fock, std::size_t M, std::size_t N) {
  if (fock->depth() < 3) throw Error("DepthTooSmall", "the Cuntz-Krieger family needs depth >= 3");
  if (fock->spec().dimH != M * N || fock->spec().basisU.size() != M || fock->spec().basisV.size() != N)
    throw Error("InvalidParameter", "Fock space is not built over H_{M,N}");
  CKGenerators g;
  g.M = M;
  g.N = N;
  g.fock = std::move(fock);
  const TruncatedFock& f = *g.fock;
  g.gen = make_generators(f);
  g.report.append(g.gen.report);
  const auto& s = f.spec();
  if (g.gen.bcirc.dim() != M * N) throw Error("AssumptionsViolated", "B_circ model does not split into M*N idempotents");

  Family fac{f, detail::full(f), {}};
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      FockOperator e = f.lift(g.gen.bcirc.idempotents[i * N + k]);
      fac.expect(e, g.gen.Phi1(s.algebraB1.idempotent(k)) * g.gen.Phi2(s.algebraB2.idempotent(i)), "e" + pair_name(i, k));
      g.sIdx.push_back(e * g.gen.S[i]);
      g.tIdx.push_back(e * g.gen.T[k]);
      g.idem.push_back(std::move(e));
    }
  fac.emit(g.report, "ck.idempotent_factorization", "e_(i,k) = phi1(e_k) phi2(f_i)");

  Family fs{f, detail::exact(f), {}}, ft{f, detail::exact(f), {}};
  fs.window.lo = ft.window.lo = 1;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) fs.expect(g.gen.Sa[i] * g.gen.S[j], i == j ? f.identity() : f.zero(), "S" + idx(i) + "* S" + idx(j));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) ft.expect(g.gen.Ta[k] * g.gen.T[l], k == l ? f.identity() : f.zero(), "T" + idx(k) + "* T" + idx(l));
  fs.emit(g.report, "ck.isometries_S", "S_i* S_j = delta_ij");
  ft.emit(g.report, "ck.isometries_T", "T_k* T_l = delta_kl");

  Family es{f, detail::positive(f), {}}, et{f, detail::positive(f), {}};
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const FockOperator& e = g.idem[i * N + k];
      for (std::size_t j = 0; j < M; ++j) {
        FockOperator rhs = f.zero();
        if (i == j)
          for (std::size_t h = 0; h < M; ++h) rhs += g.gen.S[j] * g.idem[h * N + k];
        es.expect(e * g.gen.S[j], rhs, "e" + pair_name(i, k) + " S" + idx(j));
      }
      for (std::size_t l = 0; l < N; ++l) {
        FockOperator rhs = f.zero();
        if (k == l)
          for (std::size_t m = 0; m < N; ++m) rhs += g.gen.T[l] * g.idem[i * N + m];
        et.expect(e * g.gen.T[l], rhs, "e" + pair_name(i, k) + " T" + idx(l));
      }
    }
  es.emit(g.report, "ck.idempotent_S", "e_(i,k) S_j = delta_ij sum_h S_j e_(h,k)");
  et.emit(g.report, "ck.idempotent_T", "e_(i,k) T_l = delta_kl sum_m T_l e_(i,m)");
  return g;
}

Report verify_ck_relations(const CKGenerators& g) {
  const TruncatedFock& f = *g.fock;
  const std::size_t M = g.M, N = g.N, n = M * N;
  Report rep;
  std::vector<FockOperator> Xa(2 * n), R(2 * n);
  for (std::size_t a = 0; a < 2 * n; ++a) {
    Xa[a] = f.adjoint(X(g, a));
    R[a] = X(g, a) * Xa[a];
  }

  Family dec{f, detail::modulo_compacts(f), {}};
  for (std::size_t p = 0; p < n; ++p) dec.expect(g.idem[p], R[p] + R[n + p], "e" + pair_name(p / N, p % N));
  dec.emit(rep, "ck.range_decomposition", "e_(i,k) = S_(i,k) S_(i,k)* + T_(i,k) T_(i,k)*");

  Family ss{f, detail::full(f), {}}, ts{f, detail::full(f), {}};
  for (std::size_t i = 0; i < M; ++i) {
    FockOperator sum = f.zero();
    for (std::size_t k = 0; k < N; ++k) sum += g.sIdx[i * N + k];
    ss.expect(g.gen.S[i], sum, "S" + idx(i));
  }
  for (std::size_t k = 0; k < N; ++k) {
    FockOperator sum = f.zero();
    for (std::size_t i = 0; i < M; ++i) sum += g.tIdx[i * N + k];
    ts.expect(g.gen.T[k], sum, "T" + idx(k));
  }
  ss.emit(rep, "ck.S_sum", "S_i = sum_k S_(i,k)");
  ts.emit(rep, "ck.T_sum", "T_k = sum_i T_(i,k)");

  Family unit{f, detail::modulo_compacts(f), {}};
  FockOperator total = f.zero();
  for (const auto& r : R) total += r;
  unit.expect(total, f.identity(), "sum of all range projections");
  unit.emit(rep, "ck.unit", "sum of S_(i,k) S_(i,k)* + T_(i,k) T_(i,k)* = 1");

  // the source projection of X_a sits on level n+1 <= K, hence the top boundary
  Family src{f, g.gen.window, {}}, tsrc{f, g.gen.window, {}};
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      FockOperator rs = f.zero(), rt = f.zero();
      for (std::size_t j = 0; j < M; ++j) rs += R[j * N + k] + R[n + j * N + k];
      for (std::size_t l = 0; l < N; ++l) rt += R[i * N + l] + R[n + i * N + l];
      src.expect(Xa[i * N + k] * g.sIdx[i * N + k], rs, "S" + pair_name(i, k));
      tsrc.expect(Xa[n + i * N + k] * g.tIdx[i * N + k], rt, "T" + pair_name(i, k));
    }
  src.emit(rep, "ck.S_source", "S_(i,k)* S_(i,k) = sum_j S_(j,k) S_(j,k)* + T_(j,k) T_(j,k)*");
  tsrc.emit(rep, "ck.T_source", "T_(i,k)* T_(i,k) = sum_l S_(i,l) S_(i,l)* + T_(i,l) T_(i,l)*");

  Family pi{f, detail::modulo_compacts(f), {}};
  for (std::size_t a = 0; a < 2 * n; ++a) pi.expect(R[a] * X(g, a), X(g, a), X_name(g, a));
  pi.emit(rep, "ck.partial_isometry", "X X* X = X");

  Family orth{f, detail::modulo_compacts(f), {}};
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = 0; b < 2 * n; ++b)
      if (a != b) orth.expect(R[a] * R[b], f.zero(), X_name(g, a) + " vs " + X_name(g, b));
  orth.emit(rep, "ck.orthogonal_ranges", "range projections are mutually orthogonal");

  ck_matrix_from_relations(g, rep);
  return rep;
}

CKMatrixBundle ck_matrix(std::size_t M, std::size_t N) {
  if (M < 2 || N < 2) throw Error("InvalidParameter", "H_{M,N} needs M, N >= 2");
  auto ones = [](std::size_t k) {
    IntegerMatrix e(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) e(i, j) = 1;
    return e;
  };
  CKMatrixBundle out;
  out.A = kron(ones(M), IntegerMatrix::identity(N));
  out.B = kron(IntegerMatrix::identity(M), ones(N));
  const std::size_t n = M * N;
  out.H = IntegerMatrix(2 * n, 2 * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      out.H(r, c) = out.H(r, n + c) = out.A(r, c);
      out.H(n + r, c) = out.H(n + r, n + c) = out.B(r, c);
    }
  return out;
}

IntegerMatrix ck_matrix_from_relations(const CKGenerators& g, Report& rep) {
  const TruncatedFock& f = *g.fock;
  const std::size_t n2 = 2 * g.M * g.N;
  std::vector<FockOperator> R(n2);
  for (std::size_t a = 0; a < n2; ++a) R[a] = X(g, a) * f.adjoint(X(g, a));

  Family rows{f, g.gen.window, {}};
  IntegerMatrix H(n2, n2);
  for (std::size_t a = 0; a < n2; ++a) {
    FockOperator source = f.adjoint(X(g, a)) * X(g, a);
    FockOperator rebuilt = f.zero();
    for (std::size_t b = 0; b < n2; ++b) {
      FockOperator cut = source * R[b];
      if (f.defect_witness(cut - R[b], rows.window).empty()) {
        H(a, b) = 1;
        rebuilt += R[b];
      } else if (!f.defect_witness(cut, rows.window).empty()) {
        rows.fail(X_name(g, a) + " source meets the range of " + X_name(g, b) + " partially");
      }
    }
    rows.expect(source, rebuilt, X_name(g, a) + " source");
  }
  if (rows.witness.empty() && !(H == ck_matrix(g.M, g.N).H))
    rows.fail("row supports read from the relations differ from H:\n" + H.to_string());
  rows.emit(rep, "ck.H_rows", "X_a* X_a = sum_b H(a,b) X_b X_b*");
  return H;
}

Aperiodicity is_aperiodic(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw Error("DimensionMismatch", "aperiodicity of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  using Bits = std::vector<std::vector<char>>;
  Bits base(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(m(i, j)) < 0) throw Error("InvalidParameter", "aperiodicity needs a nonnegative matrix");
      base[i][j] = sgn(m(i, j)) > 0;
    }
  Bits power = base;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t p = 1;; ++p) {
    bool positive = true;
    for (const auto& row : power)
      for (char x : row) positive = positive && x;
    if (positive) return {true, p};
    if (p == bound) return {false, 0};
    Bits next(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (power[i][k])
          for (std::size_t j = 0; j < n; ++j) next[i][j] |= base[k][j];
    power = std::move(next);
  }
}

IntegerMatrix column_amalgamation(const IntegerMatrix& m) {
  const std::size_t n = m.cols();
  std::vector<std::size_t> rep(n);
  std::vector<std::size_t> reps;
  for (std::size_t c = 0; c < n; ++c) {
    rep[c] = c;
    for (std::size_t r : reps) {
      bool same = true;
      for (std::size_t i = 0; i < m.rows() && same; ++i) same = m(i, c) == m(i, r);
      if (same) {
        rep[c] = r;
        break;
      }
    }
    if (rep[c] == c) reps.push_back(c);
  }
  if (m.rows() != n) throw Error("DimensionMismatch", "column amalgamation needs a square matrix");
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t k = 0; k < reps.size(); ++k) slot[reps[k]] = k;
  IntegerMatrix out(reps.size(), reps.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < reps.size(); ++k) out(slot[rep[i]], k) += m(i, reps[k]);
  return out;
}

// --- Example 1 ------------------------------------------------------------------------------

Report verify_prop_7_1(std::size_t d, const Permutation& sigma, const Permutation& tau, std::size_t K) {
  const TruncatedFock f = build_fock(build_example_alpha_beta(d, sigma, tau), K);
  const GeneratorFamily g = make_generators(f);
  const auto& s = f.spec();
  Report rep;
  rep.append(g.report);
  const FockOperator& U = g.S[0];
  const FockOperator& V = g.T[0];
  const FockOperator& Ua = g.Sa[0];
  const FockOperator& Va = g.Ta[0];
  const FockOperator RU = U * Ua, RV = V * Va;

  Family unit{f, detail::modulo_compacts(f), {}};
  unit.expect(RU + RV, f.identity(), "UU* + VV*");
  unit.emit(rep, "prop71.unit", "UU* + VV* = 1");

  // level 0 is B1 (+) B2 and U, V only see one summand there
  const Window iso{1, K - 1};
  Family iu{f, iso, {}}, iv{f, iso, {}};
  iu.expect(Ua * U, f.identity(), "U*U");
  iv.expect(Va * V, f.identity(), "V*V");
  iu.emit(rep, "prop71.U_isometry", "U*U = 1");
  iv.emit(rep, "prop71.V_isometry", "V*V = 1");

  auto x_of = [&](const Vector& a) { return g.Phi1(s.embed1(a)); };
  auto permuted = [&](const Vector& a, const Permutation& p) {
    Vector out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[p[j]] = a[j];
    return out;
  };

  Family acts{f, detail::positive(f), {}}, comm{f, detail::modulo_compacts(f), {}};
  Family ua{f, iso, {}}, ub{f, iso, {}}, va{f, iso, {}}, vb{f, iso, {}};
  for (std::size_t j = 0; j < d; ++j) {
    Vector a = s.algebraA.idempotent(j);
    FockOperator x = x_of(a);
    std::string tag = "x = e" + idx(j);
    acts.expect(x, g.Phi2(s.embed2(a)), tag);
    comm.expect(RU * x, x * RU, tag + ", UU*");
    comm.expect(RV * x, x * RV, tag + ", VV*");
    FockOperator ax = x_of(permuted(a, sigma)), bx = x_of(permuted(a, tau));
    ua.expect(Ua * x * U, ax, tag);
    ub.expect(Ua * x * U, bx, tag);
    va.expect(Va * x * V, ax, tag);
    vb.expect(Va * x * V, bx, tag);
  }
  acts.emit(rep, "prop71.A_action", "A acts through phi1 and phi2 alike");
  comm.emit(rep, "prop71.range_commutes", "UU* and VV* commute with A");
  for (auto [fam, id, text] : {std::tuple{&ua, "prop71.U_alpha", "U* x U = alpha(x)"},
                               std::tuple{&ub, "prop71.U_beta", "U* x U = beta(x)"},
                               std::tuple{&va, "prop71.V_alpha", "V* x V = alpha(x)"},
                               std::tuple{&vb, "prop71.V_beta", "V* x V = beta(x)"}}) {
    rep.add({id, text, fam->window, fam->witness.empty(), fam->witness, true});
  }
  return rep;
}

}  // namespace quadmod
