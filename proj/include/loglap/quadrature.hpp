#pragma once

#include <functional>

namespace loglap {

// Adaptive Simpson quadrature with absolute tolerance and recursion cap.
// Used for the nonlinearity primitive G; the test suite carries its own
// independent integrators (tanh-sinh) for oracle comparisons.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

}  // namespace loglap
