#include "subdiff/solver.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "subdiff/special_functions.hpp"

namespace subdiff {

SpatialGrid::SpatialGrid(double xl, double xr, int m) : x_l(xl), x_r(xr), M(m) {
  if (!(xr > xl)) throw std::domain_error("SpatialGrid: x_r must exceed x_l");
  if (m < 2) throw std::domain_error("SpatialGrid: M must be >= 2");
}

double discrete_l2_norm(const SpatialGrid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.M + 1)
    throw std::invalid_argument("discrete_l2_norm: values must have length M+1");
  const double sq = values.segment(1, grid.M - 1).squaredNorm();
  return std::sqrt(grid.h() * sq);
}

Eigen::VectorXd thomas_solve(const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& diag,
                             const Eigen::VectorXd& upper,
                             const Eigen::VectorXd& rhs) {
  const auto n = diag.size();
  if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
    throw std::invalid_argument("thomas_solve: inconsistent band lengths");

  Eigen::VectorXd c(n), d(n);
  if (diag(0) == 0.0) throw std::runtime_error("thomas_solve: zero pivot at row 0");
  c(0) = (n > 1) ? upper(0) / diag(0) : 0.0;
  d(0) = rhs(0) / diag(0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double piv = diag(i) - lower(i - 1) * c(i - 1);
    if (piv == 0.0)
      throw std::runtime_error("thomas_solve: zero pivot at row " + std::to_string(i));
    if (i < n - 1) c(i) = upper(i) / piv;
    d(i) = (rhs(i) - lower(i - 1) * d(i - 1)) / piv;
  }
  Eigen::VectorXd x(n);
  x(n - 1) = d(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

double max_step_restriction(const SchemeDescriptor& scheme, double rho,
                            double kappa) {
  const double kappa_plus = std::max(kappa, 0.0);
  if (kappa_plus == 0.0) return std::numeric_limits<double>::infinity();
  const double base = 2.0 * std::max(1.0, rho) * scheme.pi_A *
                      gamma_fn(2.0 - scheme.alpha) * 2.0 * kappa_plus;
  return std::pow(base, -1.0 / scheme.alpha);
}

Solution solve(const Problem& problem, const SpatialGrid& grid,
               const KernelTable& kernels) {
  const TimeMesh& mesh = kernels.mesh();
  const SchemeDescriptor& scheme = kernels.scheme();
  const double theta = scheme.theta;
  const int N = mesh.N();
  const int M = grid.M;
  const int mi = M - 1;  // interior unknowns
  const double h = grid.h();
  const double kappa = problem.kappa;

  const double tau_cap = max_step_restriction(scheme, mesh.max_ratio(), kappa);
  if (mesh.max_step() > tau_cap) {
    std::cerr << "[solve] warning: max step " << mesh.max_step()
              << " exceeds the stability restriction " << tau_cap << "\n";
  }

  Solution sol{grid, mesh, scheme, Eigen::MatrixXd::Zero(N + 1, M + 1)};
  Eigen::VectorXd u_prev(mi);
  for (int i = 1; i < M; ++i) u_prev(i - 1) = problem.u0(grid.x(i));
  sol.values.row(0).segment(1, mi) = u_prev.transpose();

  Eigen::MatrixXd diffs(mi, N);  // column k-1 holds U^k - U^{k-1}
  const double inv_h2 = 1.0 / (h * h);

  Eigen::VectorXd lower = Eigen::VectorXd::Constant(mi - 1, -(1.0 - theta) * inv_h2);
  Eigen::VectorXd upper = lower;
  Eigen::VectorXd rhs(mi), lap_prev(mi);

  for (int n = 1; n <= N; ++n) {
    const Eigen::VectorXd& A = kernels.row(n);
    const double a0 = A(0);
    const double t_eval = mesh.t_offset(n, theta);

    // history: sum_{k=1}^{n-1} A^(n)_{n-k} (U^k - U^{k-1})
    rhs = a0 * u_prev;
    if (n > 1)
      rhs.noalias() -= diffs.leftCols(n - 1) * A.segment(1, n - 1).reverse();

    if (theta != 0.0) {
      lap_prev.setZero();
      for (int i = 0; i < mi; ++i) {
        double acc = -2.0 * u_prev(i);
        if (i > 0) acc += u_prev(i - 1);
        if (i + 1 < mi) acc += u_prev(i + 1);
        lap_prev(i) = acc * inv_h2;
      }
      rhs += theta * (lap_prev + kappa * u_prev);
    }
    for (int i = 1; i < M; ++i) rhs(i - 1) += problem.f(grid.x(i), t_eval);

    Eigen::VectorXd diag = Eigen::VectorXd::Constant(
        mi, a0 + (1.0 - theta) * (2.0 * inv_h2 - kappa));
    Eigen::VectorXd u_new = thomas_solve(lower, diag, upper, rhs);

    diffs.col(n - 1) = u_new - u_prev;
    sol.values.row(n).segment(1, mi) = u_new.transpose();
    u_prev.swap(u_new);
  }
  return sol;
}

double Solution::error_at(const Problem& problem, int n) const {
  if (!problem.exact) return 0.0;
  Eigen::VectorXd e(grid.M + 1);
  e(0) = e(grid.M) = 0.0;
  for (int i = 1; i < grid.M; ++i)
    e(i) = values(n, i) - problem.exact(grid.x(i), mesh.t(n));
  return discrete_l2_norm(grid, e);
}

std::string Solution::to_csv() const {
  std::ostringstream out;
  char buf[32];
  char meta[64];
  std::snprintf(meta, sizeof meta, "%.17g", scheme.alpha);
  out << "# scheme=" << to_string(scheme.kind) << " alpha=" << meta
      << " family=" << to_string(mesh.family()) << " gamma=" << mesh.grading()
      << " N=" << mesh.N() << " M=" << grid.M << " x_l=" << grid.x_l
      << " x_r=" << grid.x_r << " T=" << mesh.T() << "\n";
  for (int n = 0; n <= mesh.N(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", mesh.t(n));
    out << buf;
    for (int i = 1; i < grid.M; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values(n, i));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

Solution Solution::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
    throw std::invalid_argument("Solution::from_csv: missing metadata header");

  std::map<std::string, std::string> meta;
  std::istringstream hs(header.substr(2));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) meta[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  const auto need = [&](const char* key) {
    const auto it = meta.find(key);
    if (it == meta.end())
      throw std::invalid_argument(std::string("Solution::from_csv: header lacks ") + key);
    return it->second;
  };
  const int N = std::stoi(need("N"));
  const int M = std::stoi(need("M"));
  const double alpha = std::stod(need("alpha"));
  const SchemeDescriptor scheme = need("scheme") == "l1"
                                      ? SchemeDescriptor::l1(alpha)
                                      : SchemeDescriptor::alikhanov(alpha);
  const std::string family = need("family");
  const double gamma = std::stod(need("gamma"));

  Eigen::VectorXd points(N + 1);
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(N + 1, M + 1);
  std::string line;
  for (int n = 0; n <= N; ++n) {
    if (!std::getline(in, line))
      throw std::invalid_argument("Solution::from_csv: truncated at level " +
                                  std::to_string(n));
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    points(n) = std::stod(cell);
    for (int i = 1; i < M; ++i) {
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument("Solution::from_csv: short row at level " +
                                    std::to_string(n));
      values(n, i) = std::stod(cell);
    }
  }

  MeshFamily fam = MeshFamily::General;
  if (family == "uniform") fam = MeshFamily::Uniform;
  else if (family == "graded") fam = MeshFamily::Graded;
  else if (family == "jittered") fam = MeshFamily::Jittered;
  return Solution{SpatialGrid(std::stod(need("x_l")), std::stod(need("x_r")), M),
                  TimeMesh(std::move(points), fam, gamma), scheme,
                  std::move(values)};
}

}  // namespace subdiff
