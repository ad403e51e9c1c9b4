#pragma once

namespace subdiff {

/// Gamma function for positive real arguments (Lanczos approximation).
/// Relative accuracy better than 1e-13 on [0.1, 50]. Throws std::domain_error
/// for x <= 0.
double gamma_fn(double x);

/// log(Gamma(x)) for x > 0. Used internally to keep Mittag-Leffler terms
/// representable when j*alpha + 1 exceeds the Gamma overflow threshold.
double log_gamma(double x);

/// Kernel omega_beta(t) = t^{beta-1} / Gamma(beta), t > 0, beta > 0.
double omega(double beta, double t);

/// One-parameter Mittag-Leffler function E_alpha(z) by direct series
/// summation. alpha in (0,1], moderate |z|. Terms are evaluated in log space;
/// summation stops once |term| < 1e-16 * |partial sum|, with a budget of 500
/// terms. Throws std::runtime_error if the budget is exhausted.
double mittag_leffler(double alpha, double z);

/// Exact Caputo derivative of t^sigma:
///   D^alpha t^sigma = Gamma(sigma+1)/Gamma(sigma+1-alpha) * t^{sigma-alpha},
/// for alpha in (0,1), sigma > 0, t > 0. This is the oracle every
/// consistency-error measurement is based on.
double caputo_power(double alpha, double sigma, double t);

}  // namespace subdiff
