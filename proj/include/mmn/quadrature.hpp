#pragma once

#include <functional>
#include <vector>

#include "mmn/numeric.hpp"

namespace mmn::numeric {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int subdivisions = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
/// Splits the interval with the largest error estimate until the total error
/// is below max(abs_tol, rel_tol * |value|). Throws IntegrationError (with the
/// achieved error) once max_subdivisions bisections have not sufficed.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSettings& settings);

/// As above, but starts from the partition of [a, b] at the given interior
/// breakpoints (points outside (a, b) are ignored). Useful when the integrand
/// has a sharp peak whose location is known.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, const QuadratureSettings& settings);

}  // namespace mmn::numeric
