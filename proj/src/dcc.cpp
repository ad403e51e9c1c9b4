#include "subdiff/dcc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "subdiff/special_functions.hpp"

namespace subdiff {

DccTable build_dcc(const KernelTable& table) {
  const int N = table.N();
  std::vector<Eigen::VectorXd> rows(N);
  for (int n = 1; n <= N; ++n) {
    Eigen::VectorXd& p = rows[n - 1];
    p.resize(n);
    p(0) = 1.0 / table.entry(n, 0);
    for (int k = n - 1; k >= 1; --k) {
      double sum = 0.0;
      for (int j = k + 1; j <= n; ++j) {
        const double w = table.entry(j, j - k - 1) - table.entry(j, j - k);
        if (w < 0.0)
          throw std::domain_error(
              "build_dcc: kernel monotonicity violated at row " + std::to_string(j) +
              ", offset " + std::to_string(j - k));
        sum += w * p(n - j);
      }
      p(n - k) = sum / table.entry(k, 0);
    }
  }
  return DccTable(table, std::move(rows));
}

double check_identity(const DccTable& dcc) {
  const auto& A = dcc.kernels();
  double worst = 0.0;
  for (int n = 1; n <= dcc.N(); ++n) {
    const auto& p = dcc.row(n);
    for (int m = 1; m <= n; ++m) {
      double sum = 0.0;
      for (int j = m; j <= n; ++j) sum += p(n - j) * A.entry(j, j - m);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

double check_p_bound(const DccTable& dcc) {
  const double alpha = dcc.kernels().scheme().alpha;
  const double pi_A = dcc.kernels().scheme().pi_A;
  const auto& mesh = dcc.kernels().mesh();
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= dcc.N(); ++n) {
    const double slack = dcc.row(n).sum() - pi_A * omega(1.0 + alpha, mesh.t(n));
    worst = std::max(worst, slack);
  }
  return worst;
}

double weighted_sum(const DccTable& dcc, int n, const Eigen::VectorXd& nu) {
  if (n < 1 || n > dcc.N()) throw std::out_of_range("weighted_sum: level out of range");
  if (nu.size() != n) throw std::invalid_argument("weighted_sum: nu must have length n");
  const auto& p = dcc.row(n);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += p(n - k) * nu(k - 1);
  return sum;
}

double summation_estimate_rhs(const DccTable& dcc, int n, const Eigen::VectorXd& nu) {
  if (n < 1 || n > dcc.N()) throw std::out_of_range("summation_estimate_rhs: level out of range");
  if (nu.size() != n) throw std::invalid_argument("summation_estimate_rhs: nu must have length n");
  const auto& mesh = dcc.kernels().mesh();
  const double alpha = dcc.kernels().scheme().alpha;
  const double pi_A = dcc.kernels().scheme().pi_A;

  // suffix maxima of t_k^{alpha-1} nu_k, scanned right to left
  Eigen::VectorXd suffix(n);
  double run = -std::numeric_limits<double>::infinity();
  for (int k = n; k >= 1; --k) {
    run = std::max(run, std::pow(mesh.t(k), alpha - 1.0) * nu(k - 1));
    suffix(k - 1) = run;
  }
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += mesh.tau(j) * suffix(j - 1);
  return gamma_fn(2.0 - alpha) * pi_A * sum;
}

}  // namespace subdiff
