// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include "quadmod/ck.hpp"
#include "quadmod/ktheory.hpp"
#include "quadmod/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace quadmod;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// every section of a pipeline run passes and the named ones are not skipped
Outcome stages_pass(const RunResult& r, const std::vector<std::string>& required) {
  std::size_t checks = 0;
  for (const auto& s : r.sections) {
    checks += s.report.checks().size();
    if (const CheckResult* f = s.report.first_failure()) return {false, s.name + ": " + f->id + ": " + f->witness};
    for (const auto& name : required)
      if (s.name == name && (s.report.checks().empty() || !s.note.empty()))
        return {false, name + " did not run: " + s.note};
  }
  return {true, std::to_string(checks) + " checks"};
}

RunResult run_builtin(Command cmd, const std::string& src, std::size_t depth) {
  RunConfig cfg;
  cfg.command = cmd;
  cfg.source = src;
  cfg.depth = depth;
  return run(cfg);
}

Outcome criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t N = 2; N <= 8; ++N) {
    std::string want = "K0 = Z/" + std::to_string(N * N - 1) + ", K1 = 0";
    std::string got = k_groups(2, N).to_string();
    if (got != want) return {false, "N = " + std::to_string(N) + ": " + got};
  }
  double t = seconds_since(t0);
  return {t < 5, "N = 2..8 in " + fmt_seconds(t)};
}

Outcome criterion2() {
  for (std::size_t M = 2; M <= 4; ++M)
    for (std::size_t N = 2; N <= 4; ++N) {
      CKMatrixBundle b = ck_matrix(M, N);
      IntegerMatrix ab = b.A + b.B;
      std::string tag = "(" + std::to_string(M) + "," + std::to_string(N) + ")";
      if (!(column_amalgamation(b.H) == ab)) return {false, tag + " amalgamation differs from A+B"};
      auto g1 = cokernel(b.H - IntegerMatrix::identity(b.H.rows())).to_string();
      auto g2 = cokernel(ab - IntegerMatrix::identity(ab.rows())).to_string();
      if (g1 != g2) return {false, tag + " coker(H-I) = " + g1 + " but coker(A+B-I) = " + g2};
    }
  return {true, "M, N in {2,3,4}"};
}

Outcome criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  Outcome a = stages_pass(run_builtin(Command::fock, "mn:2,2", 4), {"fock", "relations"});
  double t = seconds_since(t0);
  if (!a.pass) return {false, "H22 K=4: " + a.detail};
  Outcome b = stages_pass(run_builtin(Command::fock, "mn:2,3", 3), {"fock", "relations"});
  if (!b.pass) return {false, "H23 K=3: " + b.detail};
  return {t < 60, "H22 K=4 " + a.detail + " in " + fmt_seconds(t) + ", H23 K=3 " + b.detail};
}

Outcome criterion4() {
  const std::size_t d = 3;
  Permutation sigma = parse_cycles("(123)", d), tau = parse_cycles("(132)", d);
  QuadModuleSpec spec = build_example_alpha_beta(d, sigma, tau);
  Report rep;
  rep.append(validate_axioms(spec));
  rep.append(verify_finite_type(spec));
  rep.append(derive_lambda(spec).report);
  rep.append(verify_strongly_finite_type(spec));
  Report p71 = verify_prop_7_1(d, sigma, tau, 4);
  rep.append(p71);
  if (const CheckResult* f = rep.first_failure()) return {false, f->id + ": " + f->witness};
  std::string finding;
  for (const char* id : {"prop71.U_alpha", "prop71.U_beta", "prop71.V_alpha", "prop71.V_beta"}) {
    const CheckResult* c = p71.find(id);
    if (!c || !c->informational) return {false, std::string("missing finding ") + id};
    if (c->pass) finding += (finding.empty() ? "" : ", ") + std::string(id + 7);
  }
  return {true, "finding holds: " + (finding.empty() ? std::string("neither") : finding)};
}

Outcome criterion5() {
  std::size_t gauge = 0, grading = 0;
  for (const char* src : {"mn:2,2", "perm:3,(123),(132)"}) {
    RunResult r = run_builtin(Command::fock, src, 3);
    for (const auto& s : r.sections)
      for (const auto& c : s.report.checks()) {
        bool g = c.id.rfind("gauge.", 0) == 0, z = c.id.rfind("grading.", 0) == 0;
        if ((g || z) && !c.pass) return {false, std::string(src) + ": " + c.id + ": " + c.witness};
        gauge += g;
        grading += z;
      }
  }
  if (gauge == 0 || grading == 0) return {false, "gauge or grading checks missing"};
  return {true, std::to_string(gauge) + " gauge and " + std::to_string(grading) + " grading checks"};
}

Outcome criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(20240607);
  std::uniform_int_distribution<int> dim(1, 8), entry(-9, 9), sparse(0, 3);
  int nonsingular = 0;
  for (int trial = 0; trial < 500; ++trial) {
    IntegerMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = sparse(rng) == 0 ? 0 : entry(rng);
    std::string tag = "trial " + std::to_string(trial);
    SmithForm f = smith_normal_form(m);
    if (!(f.U * m * f.V == f.D)) return {false, tag + ": UMV != D"};
    if (abs(determinant(f.U)) != 1 || abs(determinant(f.V)) != 1) return {false, tag + ": U or V not unimodular"};
    const std::size_t r = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (i != j && sgn(f.D(i, j)) != 0) return {false, tag + ": D not diagonal"};
    for (std::size_t t = 0; t + 1 < r; ++t) {
      const mpz_class &a = f.D(t, t), &b = f.D(t + 1, t + 1);
      if (sgn(a) < 0 || (sgn(a) == 0 && sgn(b) != 0) || !mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()))
        return {false, tag + ": divisibility chain broken at " + std::to_string(t)};
    }
    if (m.rows() == m.cols()) {
      mpz_class det = determinant(m);
      if (det != 0) {
        ++nonsingular;
        FGAbelianGroup g = cokernel(m);
        if (g.freeRank != 0 || g.order() != abs(det)) return {false, tag + ": |coker| != |det|"};
      }
    }
  }
  double t = seconds_since(t0);
  return {t < 10, "500 matrices, " + std::to_string(nonsingular) + " nonsingular square, " + fmt_seconds(t)};
}

Outcome criterion7() {
  std::size_t worst = 0;
  for (std::size_t M = 2; M <= 4; ++M)
    for (std::size_t N = 2; N <= 4; ++N) {
      IntegerMatrix H = ck_matrix(M, N).H;
      Aperiodicity a = is_aperiodic(H);
      std::size_t n = H.rows(), bound = (n - 1) * (n - 1) + 1;
      if (!a.aperiodic || a.exponent > bound)
        return {false, "H_{" + std::to_string(M) + "," + std::to_string(N) + "} exponent " +
                           std::to_string(a.exponent)};
      worst = std::max(worst, a.exponent);
    }
  return {true, "largest primitivity exponent " + std::to_string(worst)};
}

Outcome criterion8() {
  QuadModuleSpec spec = build_example_MN(2, 2);
  // [[3/5, 4i/5], [4i/5, 3/5]]
  const GaussianRational a(mpq_class(3, 5)), b(0, mpq_class(4, 5));
  const GaussianRational W[2][2] = {{a, b}, {b, a}};
  std::vector<Vector> mixed(2, Vector(spec.dimH));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t x = 0; x < spec.dimH; ++x) mixed[j][x] += W[i][j] * spec.basisU[i][x];
  spec.basisU = mixed;

  Report rep;
  rep.append(verify_finite_type(spec));
  TruncatedFock fock = build_fock(spec, 3);
  GeneratorFamily gen = make_generators(fock);
  rep.append(gen.report);
  rep.append(verify_relations_H(gen));
  if (const CheckResult* f = rep.first_failure()) return {false, f->id + ": " + f->witness};
  std::string got = k_groups_from_matrix(lambda_circ_summed(gen)).to_string();
  std::string want = k_groups(2, 2).to_string();
  if (got != want) return {false, "remixed " + got + " vs " + want};
  return {true, std::to_string(rep.checks().size()) + " relation checks, " + got};
}

Outcome criterion9() {
  std::ostringstream os;
  for (const auto& m : mutation_catalog()) {
    QuadModuleSpec spec = build_example_MN(2, 2);
    m.apply(spec);
    Report rep;
    auto guard = [&](const char* id, const std::function<void()>& fn) {
      try {
        fn();
      } catch (const Error& e) {
        rep.add(id, "completed without error", false, e.what());
      }
    };
    guard("validate.axioms", [&] { rep.append(validate_axioms(spec)); });
    guard("validate.finite_type", [&] { rep.append(verify_finite_type(spec)); });
    guard("validate.lambda", [&] { rep.append(derive_lambda(spec).report); });
    guard("validate.strongly_finite", [&] { rep.append(verify_strongly_finite_type(spec)); });
    const CheckResult* f = rep.first_failure();
    if (!f) return {false, m.name + " goes undetected"};
    if (f->witness.empty()) return {false, m.name + " fails " + f->id + " without a witness"};
    os << "\n    " << m.name << " -> " << f->id << ": " << f->witness.substr(0, 100);
  }
  return {true, std::to_string(mutation_catalog().size()) + " mutations caught" + os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"K-groups of H_{2,N}", criterion1},     {"amalgamation", criterion2},
      {"Fock identity suite", criterion3},     {"Example 1", criterion4},
      {"gauge and grading", criterion5},       {"Smith normal form suite", criterion6},
      {"aperiodicity", criterion7},            {"basis robustness", criterion8},
      {"mutation sensitivity", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s  (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
