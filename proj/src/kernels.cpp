#include "loglap/kernels.hpp"

#include <algorithm>

#include "loglap/functionals.hpp"

namespace loglap::kernels {

namespace {

double near_row(const AssembledForm& form, const double* u, int i) {
  const int n = form.grid().n;
  const int band = form.band();
  const double p = form.constants().p;
  const std::vector<double>& near = form.near_base();
  const int jlo = std::max(0, i - band + 1);
  const int jhi = std::min(n - 1, i + band - 1);
  double acc = 0.0;
  for (int j = jlo; j <= jhi; ++j) {
    if (j == i) continue;
    const int k = j > i ? j - i : i - j;
    acc += near[k - 1] * psi_p(u[i] - u[j], p);
  }
  acc += form.kappa_base()[i] * form.grid().h * psi_p(u[i], p);
  return acc;
}

double far_row(const AssembledForm& form, const double* u, int i) {
  const int n = form.grid().n;
  const int band = form.band();
  const double p = form.constants().p;
  const std::vector<double>& far = form.far_base();
  const double psi_i = psi_p(u[i], p);
  double acc = 0.0;
  for (int j = 0; j <= i - band; ++j) acc += far[i - j - band] * (psi_p(u[i] - u[j], p) - psi_i);
  for (int j = i + band; j < n; ++j) acc += far[j - i - band] * (psi_p(u[i] - u[j], p) - psi_i);
  return acc;
}

}  // namespace

void near_rows_serial(const AssembledForm& form, const double* u, double* out) {
  const int n = form.grid().n;
  for (int i = 0; i < n; ++i) out[i] = near_row(form, u, i);
}

void near_rows_parallel(const AssembledForm& form, const double* u, double* out) {
  const int n = form.grid().n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = near_row(form, u, i);
}

void far_rows_serial(const AssembledForm& form, const double* u, double* out) {
  const int n = form.grid().n;
  for (int i = 0; i < n; ++i) out[i] = far_row(form, u, i);
}

void far_rows_parallel(const AssembledForm& form, const double* u, double* out) {
  const int n = form.grid().n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = far_row(form, u, i);
}

void near_rows(const AssembledForm& form, const double* u, double* out) {
#ifdef _OPENMP
  near_rows_parallel(form, u, out);
#else
  near_rows_serial(form, u, out);
#endif
}

void far_rows(const AssembledForm& form, const double* u, double* out) {
#ifdef _OPENMP
  far_rows_parallel(form, u, out);
#else
  far_rows_serial(form, u, out);
#endif
}

}  // namespace loglap::kernels
