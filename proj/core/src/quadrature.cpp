#include "refsde/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "refsde/errors.hpp"

namespace refsde {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw NumericalError("integrate: endpoints must be finite");
  }
  if (a == b) return 0.0;

  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, /*max_depth=*/18, rel_tol, &error);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "integrate: non-finite result on [" << a << ", " << b << "]";
    throw NumericalError(msg.str());
  }
  return value;
}

}  // namespace refsde
