// Timing harness for the row kernels: serial reference vs OpenMP-parallel,
// with a bitwise equality check between the two.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "loglap/assembly.hpp"
#include "loglap/kernels.hpp"
#include "loglap/rng.hpp"

namespace {

double wtime() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
#endif
}

using Kernel = void (*)(const loglap::AssembledForm&, const double*, double*);

double best_of(Kernel k, const loglap::AssembledForm& form, const std::vector<double>& u,
               std::vector<double>& out, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = wtime();
    k(form, u.data(), out.data());
    best = std::min(best, wtime() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 20000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const double p = argc > 3 ? std::atof(argv[3]) : 2.0;
  if (n < 1 || repeats < 1 || !(p > 1.0)) {
    std::fprintf(stderr, "usage: bench_kernels [n] [repeats] [p]\n");
    return 1;
  }

  // domain wider than the kernel cutoff so both near and far bands are hit
  const loglap::Grid grid = loglap::build_grid(0.0, 50.0, n);
  loglap::Constants constants;
  constants.p = p;
  const loglap::AssembledForm form(grid, constants);

  loglap::Rng rng(42);
  std::vector<double> u = loglap::smoothed_gaussian(grid, rng, 2);
  std::vector<double> out_serial(n), out_parallel(n);

  std::printf("n = %d, band = %d, p = %g, repeats = %d\n", n, form.band(), p, repeats);
#ifdef _OPENMP
  std::printf("omp threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel variants fall back to serial\n");
#endif

  struct Row {
    const char* name;
    Kernel serial;
    Kernel parallel;
    std::vector<double>* a;
    std::vector<double>* b;
  };
  const Row rows[] = {
      {"near_rows", loglap::kernels::near_rows_serial, loglap::kernels::near_rows_parallel, &out_serial, &out_parallel},
      {"far_rows", loglap::kernels::far_rows_serial, loglap::kernels::far_rows_parallel, &out_serial, &out_parallel},
  };

  bool bitwise_ok = true;
  for (const Row& row : rows) {
    const double ts = best_of(row.serial, form, u, *row.a, repeats);
    const double tp = best_of(row.parallel, form, u, *row.b, repeats);
    const bool same = std::memcmp(row.a->data(), row.b->data(), n * sizeof(double)) == 0;
    bitwise_ok = bitwise_ok && same;
    std::printf("%-10s serial %.4fs  parallel %.4fs  speedup %.2fx  bitwise %s\n", row.name, ts, tp,
                ts / tp, same ? "equal" : "DIFFERENT");
  }
  return bitwise_ok ? 0 : 1;
}
