#pragma once

#include <functional>

namespace subdiff {

/// Integrand for tanh_sinh: receives the abscissa s together with the exact
/// distances s-a and b-s. Endpoint-singular integrands must build their
/// singular factors from the distances; the abscissa alone loses precision
/// near the endpoints and puts a noise floor under the quadrature.
using EndpointIntegrand = std::function<double(double s, double from_left,
                                               double from_right)>;

/// Tanh-sinh (double exponential) quadrature of f on the finite interval
/// (a, b). Converges exponentially for smooth integrands and tolerates
/// integrable endpoint singularities. Throws std::runtime_error if the level
/// budget is exhausted before the requested relative tolerance is met.
double tanh_sinh(const EndpointIntegrand& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 14);

/// Convenience overload for integrands without endpoint singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 14);

}  // namespace subdiff
