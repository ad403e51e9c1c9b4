#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"

namespace subdiff {

/// Uniform spatial grid on (x_l, x_r) with M subintervals; unknowns live at
/// the interior nodes i = 1..M-1, the boundary rows are pinned to zero.
struct SpatialGrid {
  double x_l;
  double x_r;
  int M;

  SpatialGrid(double xl, double xr, int m);

  double h() const { return (x_r - x_l) / M; }
  double x(int i) const { return x_l + i * h(); }
};

/// Reaction-subdiffusion problem data. The exact solution is optional and
/// only consulted by error measurements.
struct Problem {
  double kappa = 0.0;
  std::function<double(double, double)> f;   // f(x, t)
  std::function<double(double)> u0;          // initial data
  std::function<double(double, double)> exact;  // may be empty
};

struct Solution {
  SpatialGrid grid;
  TimeMesh mesh;
  SchemeDescriptor scheme;
  /// values(n, i) = U^n_i for 0 <= n <= N, 0 <= i <= M.
  Eigen::MatrixXd values;

  /// Discrete L2 error against `exact` at time level n (0 if absent).
  double error_at(const Problem& problem, int n) const;

  /// CSV dump: one metadata header line, then rows t_n, U^n_1, ..., U^n_{M-1}.
  std::string to_csv() const;

  /// Rebuild a Solution from its CSV form; the mesh comes back from the time
  /// column and the grid/scheme from the header metadata.
  static Solution from_csv(const std::string& text);
};

/// sqrt(h * sum over interior nodes of v_i^2); values has length M+1.
double discrete_l2_norm(const SpatialGrid& grid, const Eigen::VectorXd& values);

/// Thomas elimination for a constant-coefficient-free tridiagonal system.
/// lower/upper have length n-1, diag and rhs length n. Throws on zero pivot.
Eigen::VectorXd thomas_solve(const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& diag,
                             const Eigen::VectorXd& upper,
                             const Eigen::VectorXd& rhs);

/// March the fully discrete scheme across the whole mesh: at each level n the
/// interior system
///   [A^(n)_0 - (1-theta)(Lap_h + kappa)] U^n
///     = A^(n)_0 U^{n-1} - sum_{k<n} A^(n)_{n-k} (U^k - U^{k-1})
///       + theta (Lap_h + kappa) U^{n-1} + f(., t_{n-theta})
/// is solved by Thomas elimination; the history term is a dense
/// matrix-vector product over stored level differences.
Solution solve(const Problem& problem, const SpatialGrid& grid,
               const KernelTable& kernels);

/// Max step size allowed by the stability theory for reaction strength
/// kappa_+ (infinite when kappa <= 0). The solver warns, not aborts, when the
/// mesh violates it.
double max_step_restriction(const SchemeDescriptor& scheme, double rho,
                            double kappa);

}  // namespace subdiff
