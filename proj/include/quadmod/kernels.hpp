#pragma once

#include "quadmod/exact.hpp"

namespace quadmod::kernels {

// Zero-skipping dense product. The serial version is the reference; the
// OpenMP version splits output rows across threads and must agree exactly.
ExactMatrix matmul_serial(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix matmul_omp(const ExactMatrix& a, const ExactMatrix& b);

}  // namespace quadmod::kernels
