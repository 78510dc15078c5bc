#pragma once

#include <functional>

namespace refsde {

/// Adaptive Gauss-Kronrod integration of f over the bounded interval [a, b].
/// Throws NumericalError if the integrand produces non-finite values or the
/// requested relative tolerance cannot be reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

}  // namespace refsde
