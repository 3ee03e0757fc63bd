#include "quadmod/ktheory.hpp"

namespace quadmod {

KGroups k_groups_from_matrix(const IntegerMatrix& lambda) {
  if (lambda.rows() != lambda.cols()) throw Error("DimensionMismatch", "lambda must be square");
  IntegerMatrix d = IntegerMatrix::identity(lambda.rows()) - lambda;
  return {cokernel(d), free_group(kernel_rank(d))};
}

KGroups k_groups(std::size_t M, std::size_t N) {
  if (M < 2 || N < 2) throw Error("InvalidParameter", "H_{M,N} needs M, N >= 2");
  auto ones = [](std::size_t k) {
    IntegerMatrix e(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) e(i, j) = 1;
    return e;
  };
  return k_groups_from_matrix(kron(ones(M), IntegerMatrix::identity(N)) + kron(IntegerMatrix::identity(M), ones(N)));
}

namespace {

ExactMatrix level_one(const FockOperator& op, std::size_t dimH) {
  const ExactMatrix* b = op.block(1, 1);
  return b ? *b : ExactMatrix(dimH, dimH);
}

// coordinates of a level-1 block in the B_circ model, as integers
std::vector<mpz_class> integer_coordinates(const BCircModel& m, const ExactMatrix& L, const std::string& what) {
  Vector c;
  try {
    c = m.coordinates(L);
  } catch (const Error& e) {
    throw Error("AssumptionsViolated", what + " leaves B_circ: " + e.what());
  }
  std::vector<mpz_class> out;
  for (std::size_t q = 0; q < c.size(); ++q) {
    const GaussianRational& x = c[q];
    if (sgn(x.im()) != 0 || x.re().get_den() != 1 || sgn(x.re()) < 0)
      throw Error("AssumptionsViolated",
                  what + " coordinate " + std::to_string(q) + " = " + x.to_string() + " is not a nonnegative integer");
    out.push_back(x.re().get_num());
  }
  return out;
}

struct Term {
  const FockOperator* X;
  const FockOperator* Xa;
  std::string name;
};

std::vector<Term> terms(const GeneratorFamily& g) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < g.M(); ++i) out.push_back({&g.S[i], &g.Sa[i], "S" + std::to_string(i)});
  for (std::size_t k = 0; k < g.N(); ++k) out.push_back({&g.T[k], &g.Ta[k], "T" + std::to_string(k)});
  return out;
}

}  // namespace

IntegerMatrix lambda_circ_matrix(const GeneratorFamily& g) {
  const TruncatedFock& f = *g.fock;
  const std::size_t n = g.bcirc.dim(), dimH = f.spec().dimH;
  std::vector<FockOperator> lifted;
  for (const auto& P : g.bcirc.idempotents) lifted.push_back(f.lift(P));

  for (const auto& t : terms(g)) {
    FockOperator R = *t.X * *t.Xa;
    std::string w = f.defect_witness(R * *t.X - *t.X, g.window);
    if (!w.empty()) throw Error("AssumptionsViolated", t.name + " is not a partial isometry: " + w);
    for (std::size_t q = 0; q < n; ++q) {
      w = f.defect_witness(R * lifted[q] - lifted[q] * R, g.window);
      if (!w.empty())
        throw Error("AssumptionsViolated",
                    t.name + " range does not commute with idempotent " + std::to_string(q) + ": " + w);
    }
  }

  IntegerMatrix lam(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (const auto& t : terms(g)) {
      ExactMatrix block = level_one(*t.Xa * lifted[p] * *t.X, dimH);
      auto c = integer_coordinates(g.bcirc, block, t.name + "* P" + std::to_string(p) + " " + t.name);
      for (std::size_t q = 0; q < n; ++q) {
        if (c[q] > 1)
          throw Error("AssumptionsViolated",
                      t.name + "* P" + std::to_string(p) + " " + t.name + " is not a projection sum");
        lam(q, p) += c[q];
      }
    }
  return lam;
}

IntegerMatrix lambda_circ_summed(const GeneratorFamily& g) {
  const TruncatedFock& f = *g.fock;
  const std::size_t n = g.bcirc.dim(), dimH = f.spec().dimH;
  IntegerMatrix lam(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    FockOperator P = f.lift(g.bcirc.idempotents[p]);
    FockOperator sum = f.zero();
    for (const auto& t : terms(g)) sum += *t.Xa * P * *t.X;
    auto c = integer_coordinates(g.bcirc, level_one(sum, dimH), "lambda_circ(P" + std::to_string(p) + ")");
    for (std::size_t q = 0; q < n; ++q) lam(q, p) = c[q];
  }
  return lam;
}

IntegerMatrix lambda_circ_matrix(const QuadModuleSpec& spec, std::size_t K) {
  const TruncatedFock f = build_fock(spec, K);
  return lambda_circ_matrix(make_generators(f));
}

}  // namespace quadmod
