#pragma once

#include <functional>

// Test-side oracles, kept independent of the library code paths they check:
// adaptive Simpson quadrature (plus power substitutions for endpoint
// singularities) instead of the library's tanh-sinh rule, and hand-derived
// closed forms for the power-family interpolation integrals.
namespace oracles {

/// Adaptive Simpson on [a, b]; integrand must be finite on the closed
/// interval.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 40);

/// int_0^t omega_{1-alpha}(t-s) * sigma s^{sigma-1} ds by substitution +
/// Simpson; the independent route to the Caputo derivative of t^sigma.
double caputo_quadrature(double alpha, double sigma, double t);

/// Closed form of int_a^b (s-a) |u''(s)| ds for u = 1 + t^sigma.
double l1_g_closed_form(double sigma, double a, double b);

/// E_{1/2}(z) = exp(z^2) erfc(-z), using the C library's erfc.
double ml_half_identity(double z);

}  // namespace oracles
