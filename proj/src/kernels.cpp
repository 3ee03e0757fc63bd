#include "quadmod/kernels.hpp"


namespace quadmod::kernels {

namespace {

void check(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows())
    throw Error("DimensionMismatch", "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                         " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

// out row r = sum_k a(r,k) * b row k
inline void row_product(const ExactMatrix& a, const ExactMatrix& b, ExactMatrix& out, std::size_t r) {
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const auto& x = a(r, k);
    if (x.is_zero()) continue;
    for (std::size_t c = 0; c < b.cols(); ++c) {
      const auto& y = b(k, c);
      if (!y.is_zero()) out(r, c).add_product(x, y);
    }
  }
}

}  // namespace

ExactMatrix matmul_serial(const ExactMatrix& a, const ExactMatrix& b) {
  check(a, b);
  ExactMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) row_product(a, b, out, r);
  return out;
}

ExactMatrix matmul_omp(const ExactMatrix& a, const ExactMatrix& b) {
  check(a, b);
  ExactMatrix out(a.rows(), b.cols());
  // small products are not worth a thread team
  if (a.rows() * a.cols() * b.cols() < 4096) {
    for (std::size_t r = 0; r < a.rows(); ++r) row_product(a, b, out, r);
    return out;
  }
  const long rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(dynamic, 4)
  for (long r = 0; r < rows; ++r) row_product(a, b, out, static_cast<std::size_t>(r));
  return out;
}

}  // namespace quadmod::kernels
