// Serial versus OpenMP exact matmul on random sparse Gaussian-rational matrices.
// usage: bench_matmul [n ...]   (default sizes 32 64 128)
#include "quadmod/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace quadmod;

namespace {

ExactMatrix random_matrix(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6), fill(0, 2);
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (fill(rng) == 0) m(i, j) = GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
  return m;
}

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes;
  for (int k = 1; k < argc; ++k) sizes.push_back(std::stoul(argv[k]));
  if (sizes.empty()) sizes = {32, 64, 128};

  std::mt19937 rng(7);
  std::printf("threads %d\n%6s %12s %12s %8s\n", omp_get_max_threads(), "n", "serial s", "omp s", "speedup");
  for (std::size_t n : sizes) {
    ExactMatrix a = random_matrix(n, rng), b = random_matrix(n, rng);
    ExactMatrix ref, par;
    double ts = best_of(3, [&] { ref = kernels::matmul_serial(a, b); });
    double tp = best_of(3, [&] { par = kernels::matmul_omp(a, b); });
    if (!(ref == par)) {
      std::printf("n = %zu: OpenMP result differs from the serial reference\n", n);
      return 1;
    }
    std::printf("%6zu %12.4f %12.4f %8.2f\n", n, ts, tp, ts / tp);
  }
  return 0;
}
