#pragma once

#include "loglap/assembly.hpp"

namespace loglap::kernels {

// Row contractions of the C-free weight tables. Each output row i is a fixed
// ascending-j sequential reduction, so the parallel variants produce bitwise
// the same values as the serial references for any thread count; only the
// outer row loop is distributed.

// out[i] = sum_{0 < |i-j| < band} near_base[|i-j|-1] * psi_p(u_i - u_j)
//        + kappa_base[i] * h * psi_p(u_i)
void near_rows_serial(const AssembledForm& form, const double* u, double* out);
void near_rows_parallel(const AssembledForm& form, const double* u, double* out);

// out[i] = sum_{|i-j| >= band} far_base[|i-j|-band] * (psi_p(u_i - u_j) - psi_p(u_i))
void far_rows_serial(const AssembledForm& form, const double* u, double* out);
void far_rows_parallel(const AssembledForm& form, const double* u, double* out);

// Default entry points used by the assembly module: parallel when OpenMP is
// compiled in, serial otherwise.
void near_rows(const AssembledForm& form, const double* u, double* out);
void far_rows(const AssembledForm& form, const double* u, double* out);

}  // namespace loglap::kernels
