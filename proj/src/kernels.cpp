#include "subdiff/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "subdiff/special_functions.hpp"

namespace subdiff {

std::string to_string(SchemeKind k) {
  return k == SchemeKind::L1 ? "l1" : "alikhanov";
}

SchemeDescriptor SchemeDescriptor::l1(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("SchemeDescriptor: alpha must lie in (0,1)");
  return {SchemeKind::L1, alpha, 0.0, 1.0,
          std::numeric_limits<double>::infinity()};
}

SchemeDescriptor SchemeDescriptor::alikhanov(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("SchemeDescriptor: alpha must lie in (0,1)");
  return {SchemeKind::Alikhanov, alpha, 0.5 * alpha, 11.0 / 4.0, 7.0 / 4.0};
}

namespace {

// x^beta - y^beta for x > y >= 0 without cancellation:
// x^beta * (1 - (y/x)^beta) = -x^beta * expm1(beta * log1p((y-x)/x)).
inline double pow_diff(double beta, double x, double y) {
  if (y <= 0.0) return std::pow(x, beta);
  return -std::pow(x, beta) * std::expm1(beta * std::log1p((y - x) / x));
}

// int_{t_{k-1}}^{t_k} (s - t_{k-1/2}) omega_{1-a}(t_ref - s) ds, written with
// x = t_ref - t_{k-1}, y = t_ref - t_k. Reduced to the odd power series
//   2 m^{2-a}/Gamma(1-a) * sum_{j odd} c_j v^{j+2}/(j+2),
// m = (x+y)/2, v = (x-y)/(x+y), c_j = Gamma(a+j)/(Gamma(a) j!). The naive
// antiderivative form cancels catastrophically when tau_k << t_ref - t_k,
// which strongly graded meshes produce already at moderate N.
double b_moment_integral(double alpha, double x, double y, double gamma_1ma) {
  const double m = 0.5 * (x + y);
  const double v = (x - y) / (x + y);
  const double v2 = v * v;
  double c = alpha;       // c_1
  double vp = v * v2;     // v^{j+2} at j = 1
  double sum = 0.0;
  for (int j = 1; j < 400; j += 2) {
    const double term = c * vp / (j + 2);
    sum += term;
    if (term < 1e-17 * sum) break;
    c *= (alpha + j) * (alpha + j + 1) / (static_cast<double>(j + 1) * (j + 2));
    vp *= v2;
  }
  return 2.0 * std::pow(m, 2.0 - alpha) * sum / gamma_1ma;
}

}  // namespace

double omega_step_average(double alpha, double t_ref, double t_left,
                          double t_right) {
  const double x = t_ref - t_left;
  const double y = t_ref - t_right;
  return pow_diff(1.0 - alpha, x, y) /
         ((t_right - t_left) * gamma_fn(2.0 - alpha));
}

KernelTable l1_kernels(const TimeMesh& mesh, double alpha) {
  const auto scheme = SchemeDescriptor::l1(alpha);
  const int N = mesh.N();
  std::vector<Eigen::VectorXd> rows(N);
  for (int n = 1; n <= N; ++n) {
    Eigen::VectorXd& row = rows[n - 1];
    row.resize(n);
    for (int k = 1; k <= n; ++k)
      row(n - k) = omega_step_average(alpha, mesh.t(n), mesh.t(k - 1), mesh.t(k));
  }
  return KernelTable(scheme, mesh, std::move(rows));
}

KernelTable alikhanov_kernels(const TimeMesh& mesh, double alpha,
                              bool enforce_ratio_cap) {
  const auto scheme = SchemeDescriptor::alikhanov(alpha);
  if (enforce_ratio_cap) {
    const auto a3 = check_A3(mesh, scheme.rho_cap);
    if (!a3.ok)
      throw std::domain_error(
          "alikhanov_kernels: step ratio rho_" + std::to_string(a3.first_bad_index) +
          " exceeds 7/4 (max ratio " + std::to_string(a3.max_ratio) + ")");
  }

  const double theta = scheme.theta;
  const double g1ma = gamma_fn(1.0 - alpha);
  const int N = mesh.N();
  std::vector<Eigen::VectorXd> rows(N);

  for (int n = 1; n <= N; ++n) {
    const double t_ref = mesh.t_offset(n, theta);
    Eigen::VectorXd a(n), b(n);
    // local coefficient integrates only up to t_{n-theta} but carries 1/tau_n
    a(0) = omega(2.0 - alpha, t_ref - mesh.t(n - 1)) / mesh.tau(n);
    for (int k = 1; k < n; ++k) {
      const double x = t_ref - mesh.t(k - 1);
      const double y = t_ref - mesh.t(k);
      a(n - k) = omega_step_average(alpha, t_ref, mesh.t(k - 1), mesh.t(k));
      b(n - k) = 2.0 * b_moment_integral(alpha, x, y, g1ma) /
                 (mesh.tau(k) * (mesh.tau(k) + mesh.tau(k + 1)));
    }

    Eigen::VectorXd& A = rows[n - 1];
    A.resize(n);
    if (n == 1) {
      A(0) = a(0);
    } else {
      A(0) = a(0) + (mesh.tau(n - 1) / mesh.tau(n)) * b(1);
      for (int k = 2; k <= n - 1; ++k) {
        const int j = n - k;
        A(j) = a(j) + (mesh.tau(k - 1) / mesh.tau(k)) * b(j + 1) - b(j);
      }
      A(n - 1) = a(n - 1) - b(n - 1);
    }
  }
  return KernelTable(scheme, mesh, std::move(rows));
}

double apply_discrete_caputo(const KernelTable& table,
                             const Eigen::VectorXd& values, int n) {
  if (n < 1 || n > table.N())
    throw std::out_of_range("apply_discrete_caputo: level out of range");
  if (values.size() < n + 1)
    throw std::invalid_argument("apply_discrete_caputo: need v^0..v^n");
  const Eigen::VectorXd& A = table.row(n);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += A(n - k) * (values(k) - values(k - 1));
  return sum;
}

A1Result check_A1(const KernelTable& table) {
  for (int n = 1; n <= table.N(); ++n) {
    const auto& row = table.row(n);
    for (int j = 0; j < n; ++j) {
      if (!(row(j) > 0.0)) return {false, n, j};
      if (j > 0 && row(j) > row(j - 1)) return {false, n, j};
    }
  }
  return {};
}

double check_A2(const KernelTable& table) {
  const double alpha = table.scheme().alpha;
  const double pi_A = table.scheme().pi_A;
  const auto& mesh = table.mesh();
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= table.N(); ++n) {
    for (int k = 1; k <= n; ++k) {
      const double lower =
          omega_step_average(alpha, mesh.t(n), mesh.t(k - 1), mesh.t(k)) / pi_A;
      const double margin = (table.entry(n, n - k) - lower) / lower;
      worst = std::min(worst, margin);
    }
  }
  return worst;
}

EnergyOffsetQuantities energy_offset_quantities(const KernelTable& table, int n) {
  if (n < 2 || n > table.N())
    throw std::out_of_range("energy_offset_quantities: need 2 <= n <= N");
  const double a0 = table.entry(n, 0);
  const double a1 = table.entry(n, 1);
  if (!(a0 > a1))
    throw std::domain_error("energy_offset_quantities: degenerate row (A_0 <= A_1)");
  return {(2.0 * a0 - a1) / (a0 * (a0 - a1)), (a0 - a1) / (2.0 * a0 - a1)};
}

}  // namespace subdiff
