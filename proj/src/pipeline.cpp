#include "quadmod/pipeline.hpp"

#include "quadmod/io.hpp"

#include <cstdlib>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace quadmod {

using nlohmann::json;

Command parse_command(const std::string& name) {
  if (name == "validate") return Command::validate;
  if (name == "fock") return Command::fock;
  if (name == "ck") return Command::ck;
  if (name == "ktheory") return Command::ktheory;
  if (name == "full") return Command::full;
  throw Error("InvalidParameter", "unknown command '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::fock: return "fock";
    case Command::ck: return "ck";
    case Command::ktheory: return "ktheory";
    case Command::full: return "full";
  }
  return "?";
}

bool is_input_error(const Error& e) {
  static const std::set<std::string> kinds{"ParseError",        "SchemaVersionMismatch", "InvalidParameter",
                                           "DimensionMismatch", "DepthTooSmall",         "TooLarge"};
  return kinds.count(e.kind()) > 0;
}

// --- input -----------------------------------------------------------------------------------

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-')
    throw Error("InvalidParameter", what + ": expected a count, found '" + text + "'");
  return v;
}

// commas outside parentheses
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out(1);
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back();
      continue;
    }
    out.back() += c;
  }
  return out;
}

}  // namespace

SpecSource parse_spec_source(const std::string& source, bool builtin) {
  SpecSource out;
  out.descriptor = source;
  if (!builtin) {
    out.spec = load_spec_file(source);
    return out;
  }
  const auto colon = source.find(':');
  if (colon == std::string::npos) throw Error("InvalidParameter", "builtin '" + source + "': expected mn:M,N or perm:d,sigma,tau");
  const std::string kind = source.substr(0, colon);
  const auto args = split_top(source.substr(colon + 1));
  if (kind == "mn") {
    if (args.size() != 2) throw Error("InvalidParameter", "builtin '" + source + "': expected mn:M,N");
    out.kind = SpecSource::Kind::mn;
    out.M = parse_count(args[0], "M");
    out.N = parse_count(args[1], "N");
    out.spec = build_example_MN(out.M, out.N);
    return out;
  }
  if (kind == "perm") {
    if (args.size() != 3) throw Error("InvalidParameter", "builtin '" + source + "': expected perm:d,sigma,tau");
    out.kind = SpecSource::Kind::perm;
    out.d = parse_count(args[0], "d");
    if (out.d == 0) throw Error("InvalidParameter", "d must be positive");
    out.sigma = parse_cycles(args[1], out.d);
    out.tau = parse_cycles(args[2], out.d);
    out.spec = build_example_alpha_beta(out.d, out.sigma, out.tau);
    return out;
  }
  throw Error("InvalidParameter", "unknown builtin '" + kind + "'");
}

std::size_t max_dim_from_env() {
  const char* v = std::getenv("QUADMOD_MAX_DIM");
  if (!v || !*v) return 20000;
  return parse_count(v, "QUADMOD_MAX_DIM");
}

bool RunResult::passed() const {
  for (const auto& s : sections)
    if (!s.report.passed()) return false;
  return true;
}

// --- stages ----------------------------------------------------------------------------------

namespace {

struct Context {
  const RunConfig& config;
  SpecSource src;
  std::size_t K = 0;
  std::shared_ptr<const TruncatedFock> fock;
  std::unique_ptr<GeneratorFamily> gen;
  bool valid = true;
  std::string genProblem;  // why generators are unavailable
};

// Verification-time errors become a failed check; input errors propagate.
template <class F>
void guarded(Section& s, const std::string& id, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (is_input_error(e)) throw;
    s.report.add(id, "stage completed without error", false, e.what());
  }
}

Section stage_validate(Context& c) {
  Section s{"validate", {}, {}, {}};
  const auto& spec = c.src.spec;
  s.facts.push_back({"spec", spec.name.empty() ? c.src.descriptor : spec.name});
  s.facts.push_back({"dims", "A = C^" + std::to_string(spec.algebraA.dim) + ", B1 = C^" +
                                 std::to_string(spec.algebraB1.dim) + ", B2 = C^" + std::to_string(spec.algebraB2.dim) +
                                 ", H = C^" + std::to_string(spec.dimH)});
  guarded(s, "validate.axioms", [&] { s.report.append(validate_axioms(spec)); });
  guarded(s, "validate.finite_type", [&] { s.report.append(verify_finite_type(spec)); });
  guarded(s, "validate.lambda", [&] {
    LambdaMaps l = derive_lambda(spec);
    s.report.append(l.report);
    s.facts.push_back({"lambda1", l.lambda1.to_string()});
    s.facts.push_back({"lambda2", l.lambda2.to_string()});
  });
  guarded(s, "validate.strongly_finite", [&] { s.report.append(verify_strongly_finite_type(spec)); });
  c.valid = s.report.passed();
  return s;
}

void ensure_fock(Context& c) {
  if (c.fock) return;
  if (c.config.depth) {
    c.K = *c.config.depth;
    c.fock = std::make_shared<const TruncatedFock>(build_fock(c.src.spec, c.K, c.config.maxDim));
    return;
  }
  // default depth 3, falling back to 2 when depth 3 exceeds the budget
  try {
    c.K = 3;
    c.fock = std::make_shared<const TruncatedFock>(build_fock(c.src.spec, 3, c.config.maxDim));
  } catch (const Error& e) {
    if (e.kind() != "TooLarge") throw;
    c.K = 2;
    c.fock = std::make_shared<const TruncatedFock>(build_fock(c.src.spec, 2, c.config.maxDim));
  }
}

void ensure_generators(Context& c) {
  if (c.gen || !c.genProblem.empty()) return;
  ensure_fock(c);
  if (c.K < 3) {
    c.genProblem = "depth " + std::to_string(c.K) + " < 3";
    return;
  }
  try {
    c.gen = std::make_unique<GeneratorFamily>(make_generators(*c.fock));
  } catch (const Error& e) {
    if (e.kind() != "AssumptionsViolated") throw;
    c.genProblem = e.what();
  }
}

std::string dims_text(const std::vector<std::size_t>& d) {
  std::string out;
  for (std::size_t k = 0; k < d.size(); ++k) out += (k ? ", " : "") + std::to_string(d[k]);
  return "[" + out + "]";
}

Section stage_fock(Context& c) {
  Section s{"fock", {}, {}, {}};
  ensure_fock(c);
  const TruncatedFock& f = *c.fock;
  const auto& spec = f.spec();
  s.facts.push_back({"depth", std::to_string(c.K)});
  s.facts.push_back({"level dims", dims_text(f.level_dims())});
  s.facts.push_back({"total dim", std::to_string(f.total_dim())});
  s.report.append(f.build_report());
  guarded(s, "fock.creation", [&] {
    for (std::size_t k = 0; k < spec.basisU.size(); ++k)
      s.report.append(verify_creation(f, CreationKind::s, spec.basisU[k], "s" + std::to_string(k)));
    for (std::size_t k = 0; k < spec.basisV.size(); ++k)
      s.report.append(verify_creation(f, CreationKind::t, spec.basisV[k], "t" + std::to_string(k)));
  });
  guarded(s, "fock.left_actions", [&] { s.report.append(verify_left_actions(f)); });
  guarded(s, "fock.projections", [&] { s.report.append(verify_projections(f, projections(f))); });
  guarded(s, "fock.gauge", [&] {
    std::vector<GradedOperator> ops;
    std::vector<FockOperator> creations;
    for (std::size_t k = 0; k < spec.basisU.size(); ++k) {
      creations.push_back(creation(f, CreationKind::s, spec.basisU[k]));
      ops.push_back({"s" + std::to_string(k), creations.back(), 1});
      ops.push_back({"s" + std::to_string(k) + "*", f.adjoint(creations.back()), -1});
    }
    for (std::size_t k = 0; k < spec.basisV.size(); ++k) {
      creations.push_back(creation(f, CreationKind::t, spec.basisV[k]));
      ops.push_back({"t" + std::to_string(k), creations.back(), 1});
      ops.push_back({"t" + std::to_string(k) + "*", f.adjoint(creations.back()), -1});
    }
    ops.push_back({"phi1(1)", left_action(f, 1, spec.algebraB1.unit()), 0});
    ops.push_back({"phi2(1)", left_action(f, 2, spec.algebraB2.unit()), 0});
    s.report.append(gauge_check(f, ops));

    std::string w;
    for (std::size_t k = 0; k < creations.size() && w.empty(); ++k)
      if (!degree_zero_part(creations[k]).is_zero()) w = "creation operator " + std::to_string(k) + " keeps a diagonal block";
    s.report.add("grading.degree_zero_kills_creation", "the degree-0 part of a creation operator is zero", w.empty(), w);
    FockOperator mixed = ops.back().op;
    for (const auto& x : creations) mixed += x;
    FockOperator once = degree_zero_part(mixed);
    s.report.add("grading.degree_zero_idempotent", "taking the degree-0 part twice changes nothing",
                 degree_zero_part(once) == once, "second application differs");
  });
  return s;
}

Section stage_relations(Context& c) {
  Section s{"relations", {}, {}, {}};
  ensure_generators(c);
  if (!c.gen) {
    s.note = "skipped: " + c.genProblem;
    return s;
  }
  const GeneratorFamily& g = *c.gen;
  s.facts.push_back({"B_circ dim", std::to_string(g.bcirc.dim())});
  s.report.append(g.report);
  guarded(s, "relations.creation", [&] { s.report.append(verify_section3(g)); });
  guarded(s, "relations.orthogonality", [&] { s.report.append(verify_section4(g)); });
  guarded(s, "relations.H", [&] { s.report.append(verify_relations_H(g)); });
  guarded(s, "relations.core", [&] { s.report.append(verify_section5_core(g)); });
  guarded(s, "relations.pi", [&] {
    for (std::size_t p = 0; p < g.bcirc.dim(); ++p) {
      PiResult r = compute_pi(g, g.bcirc.idempotents[p]);
      for (auto check : r.report.checks()) {
        check.id += "[P" + std::to_string(p) + "]";
        s.report.add(std::move(check));
      }
    }
  });
  guarded(s, "relations.filtration", [&] {
    s.facts.push_back({"core filtration dims (top level)", dims_text(core_filtration_dims(g, c.K - 1))});
  });
  return s;
}

Section stage_ck(Context& c) {
  Section s{"ck", {}, {}, {}};
  if (c.src.kind == SpecSource::Kind::file) {
    s.note = "skipped: only the builtin families carry a Cuntz-Krieger presentation";
    return s;
  }
  if (c.src.kind == SpecSource::Kind::perm) {
    ensure_fock(c);
    if (c.K < 3) {
      s.note = "skipped: depth " + std::to_string(c.K) + " < 3";
      return s;
    }
    guarded(s, "ck.prop71", [&] { s.report.append(verify_prop_7_1(c.src.d, c.src.sigma, c.src.tau, c.K)); });
    return s;
  }

  const std::size_t M = c.src.M, N = c.src.N;
  CKMatrixBundle b = ck_matrix(M, N);
  s.facts.push_back({"H", "\n" + b.H.to_string()});
  Aperiodicity ap = is_aperiodic(b.H);
  const std::size_t n = b.H.rows();
  s.report.add({"ck.aperiodic", "H is aperiodic within the Wielandt bound", std::nullopt,
                ap.aperiodic && ap.exponent <= (n - 1) * (n - 1) + 1, ap.aperiodic ? "" : "no positive power", false});
  s.facts.push_back({"primitivity exponent", std::to_string(ap.exponent)});
  IntegerMatrix amalg = column_amalgamation(b.H);
  const IntegerMatrix I1 = IntegerMatrix::identity(M * N), I2 = IntegerMatrix::identity(2 * M * N);
  s.report.add("ck.amalgamation", "amalgamating identical columns of H gives A + B", amalg == b.A + b.B,
               "amalgamated matrix:\n" + amalg.to_string());
  FGAbelianGroup gh = cokernel(b.H - I2), gab = cokernel(b.A + b.B - I1);
  s.report.add("ck.amalgamation_cokernel", "coker(H - I) and coker(A + B - I) agree", gh == gab,
               gh.to_string() + " vs " + gab.to_string());

  ensure_fock(c);
  if (c.K < 3) {
    s.note = "Fock relations skipped: depth " + std::to_string(c.K) + " < 3";
    return s;
  }
  guarded(s, "ck.relations", [&] {
    CKGenerators g = build_ck_generators(c.fock, M, N);
    s.report.append(g.report);
    s.report.append(verify_ck_relations(g));
  });
  return s;
}

// a quick seeded SNF self-check; the full property suite lives in the tests
void snf_selfcheck(Section& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(1, 8), entry(-9, 9);
  std::string w;
  for (int trial = 0; trial < 100 && w.empty(); ++trial) {
    IntegerMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    SmithForm f = smith_normal_form(m);
    if (!(f.U * m * f.V == f.D) || abs(determinant(f.U)) != 1 || abs(determinant(f.V)) != 1)
      w = "trial " + std::to_string(trial) + ":\n" + m.to_string();
  }
  s.report.add("ktheory.snf_selfcheck", "U M V = D with unimodular U, V on 100 seeded matrices", w.empty(), w);
}

Section stage_ktheory(Context& c) {
  Section s{"ktheory", {}, {}, {}};
  snf_selfcheck(s, c.config.seed);
  std::optional<KGroups> closed;
  if (c.src.kind == SpecSource::Kind::mn) {
    closed = k_groups(c.src.M, c.src.N);
    s.facts.push_back({"", closed->to_string()});
  }
  // the lambda_circ route needs the generator family
  bool lambdaFits = true;
  try {
    ensure_generators(c);
  } catch (const Error& e) {
    if (e.kind() != "TooLarge" || !closed) throw;
    lambdaFits = false;
  }
  if (!lambdaFits || !c.gen) {
    s.note = "lambda_circ route skipped: " + (lambdaFits ? c.genProblem : std::string("Fock space exceeds the budget"));
    return s;
  }
  guarded(s, "ktheory.lambda_circ", [&] {
    IntegerMatrix lam = lambda_circ_matrix(*c.gen);
    KGroups k = k_groups_from_matrix(lam);
    s.facts.push_back({"lambda_circ", "\n" + lam.to_string()});
    if (closed) {
      s.report.add("ktheory.lambda_circ_agrees", "coker(I - lambda_circ) matches coker(A + B - I)",
                   k.K0 == closed->K0 && k.K1 == closed->K1, k.to_string() + " vs " + closed->to_string());
    } else {
      s.facts.push_back({"", k.to_string()});
    }
  });
  return s;
}

}  // namespace

RunResult run(const RunConfig& config) {
  Context c{config, parse_spec_source(config.source, config.builtin), 0, nullptr, nullptr, true, {}};
  if (config.depth && *config.depth < 2) throw Error("DepthTooSmall", "depth must be at least 2");
  RunResult r;
  r.command = config.command;
  r.source = config.source;

  const Command cmd = config.command;
  const bool all = cmd == Command::full;
  auto stage = [&](const std::string& name, Section (*body)(Context&)) {
    if (name != "validate" && !c.valid) {
      r.sections.push_back({name, {}, {}, "skipped: validation failed"});
      return;
    }
    try {
      r.sections.push_back(body(c));
    } catch (const Error& e) {
      if (is_input_error(e)) throw;
      Section s{name, {}, {}, {}};
      s.report.add(name + ".error", "stage completed without error", false, e.what());
      r.sections.push_back(std::move(s));
    }
  };
  stage("validate", stage_validate);
  if (all || cmd == Command::fock) {
    stage("fock", stage_fock);
    stage("relations", stage_relations);
  }
  if (all || cmd == Command::ck) stage("ck", stage_ck);
  if (all || cmd == Command::ktheory) stage("ktheory", stage_ktheory);
  if (c.fock) r.depth = c.K;
  return r;
}

// --- rendering -------------------------------------------------------------------------------

std::string render_text(const RunResult& r) {
  std::ostringstream os;
  os << "quadmod " << to_string(r.command) << "  source " << r.source;
  if (r.depth) os << "  depth " << *r.depth;
  os << '\n';
  for (const auto& s : r.sections) {
    os << "\n== " << s.name << " ==\n";
    for (const auto& [k, v] : s.facts) {
      if (k.empty()) os << v << '\n';
      else if (v.find('\n') == std::string::npos) os << "  " << k << ": " << v << '\n';
      else {
        // matrices: one indented row per line
        os << "  " << k << ":\n";
        std::istringstream rows(v);
        for (std::string line; std::getline(rows, line);)
          if (!line.empty()) os << "    " << line << '\n';
      }
    }
    if (!s.note.empty()) os << "  " << s.note << '\n';
    for (const auto& c : s.report.checks()) {
      os << "  " << (c.pass ? "PASS" : (c.informational ? "INFO" : "FAIL")) << "  " << c.id;
      if (c.window) os << "  " << c.window->to_string();
      os << "  " << c.citation << '\n';
      if (!c.pass) os << "        witness: " << c.witness << '\n';
    }
  }
  os << "\nsummary\n";
  std::size_t total = 0, failed = 0;
  for (const auto& s : r.sections) {
    os << "  " << s.name << std::string(12 - std::min<std::size_t>(11, s.name.size()), ' ') << s.report.checks().size()
       << " checks, " << s.report.failures() << " failed" << (s.note.empty() ? "" : "  (" + s.note + ")") << '\n';
    total += s.report.checks().size();
    failed += s.report.failures();
  }
  os << "result: " << (r.passed() ? "PASS" : "FAIL") << " (" << total << " checks, " << failed << " failed)\n";
  return os.str();
}

json render_json(const RunResult& r) {
  json out;
  out["schema_version"] = "quadmod-report-v1";
  out["command"] = to_string(r.command);
  out["source"] = r.source;
  out["depth"] = r.depth ? json(*r.depth) : json(nullptr);
  out["sections"] = json::array();
  std::size_t total = 0, failed = 0, info = 0;
  for (const auto& s : r.sections) {
    json facts = json::object();
    for (const auto& [k, v] : s.facts) facts[k.empty() ? "result" : k] = v;
    out["sections"].push_back({{"name", s.name}, {"note", s.note}, {"facts", facts}, {"checks", to_json(s.report)}});
    total += s.report.checks().size();
    failed += s.report.failures();
    for (const auto& c : s.report.checks()) info += c.informational;
  }
  out["summary"] = {{"checks", total}, {"failures", failed}, {"informational", info}, {"pass", r.passed()}};
  out["exit_code"] = r.exit_code();
  return out;
}

}  // namespace quadmod
