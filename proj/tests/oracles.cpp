#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole,
                  tol * std::max(1.0, std::abs(whole)), max_depth);
}

double caputo_quadrature(double alpha, double sigma, double t) {
  // int_0^t (t-s)^{-alpha}/Gamma(1-alpha) * sigma s^{sigma-1} ds
  //   = sigma t^{sigma-alpha}/Gamma(1-alpha) * int_0^1 (1-u)^{-alpha} u^{sigma-1} du.
  // Split at 1/2 and remove each endpoint singularity by a power substitution,
  // so plain Simpson sees a smooth integrand.
  // left piece: u = w^{1/sigma} gives (1/sigma) int_0^{(1/2)^sigma} (1-w^{1/sigma})^{-alpha} dw
  const double wl = std::pow(0.5, sigma);
  const double left = adaptive_simpson(
      [&](double w) { return std::pow(1.0 - std::pow(w, 1.0 / sigma), -alpha); },
      0.0, wl, 1e-11, 56) / sigma;
  // right piece: 1-u = z^{1/(1-alpha)} gives
  //   (1/(1-alpha)) int_0^{(1/2)^{1-alpha}} (1 - z^{1/(1-alpha)})^{sigma-1} dz
  const double zr = std::pow(0.5, 1.0 - alpha);
  const double right = adaptive_simpson(
      [&](double z) {
        return std::pow(1.0 - std::pow(z, 1.0 / (1.0 - alpha)), sigma - 1.0);
      },
      0.0, zr, 1e-11, 56) / (1.0 - alpha);
  return sigma * std::pow(t, sigma - alpha) / std::tgamma(1.0 - alpha) *
         (left + right);
}

double l1_g_closed_form(double sigma, double a, double b) {
  if (sigma == 1.0) return 0.0;
  const double c2 = std::abs(sigma * (sigma - 1.0));
  double integral = (std::pow(b, sigma) - std::pow(a, sigma)) / sigma;
  if (a > 0.0)
    integral -= a * (std::pow(b, sigma - 1.0) - std::pow(a, sigma - 1.0)) /
                (sigma - 1.0);
  return c2 * integral;
}

double ml_half_identity(double z) { return std::exp(z * z) * std::erfc(-z); }

}  // namespace oracles
