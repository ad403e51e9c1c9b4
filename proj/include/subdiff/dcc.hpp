#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subdiff/kernels.hpp"

namespace subdiff {

/// Discrete complementary convolution kernels P^(n)_{n-j}, the triangular
/// "inverse" of a KernelTable: sum_{j=m}^n P^(n)_{n-j} A^(j)_{j-m} = 1 for
/// every 1 <= m <= n <= N.
class DccTable {
 public:
  DccTable(KernelTable kernels, std::vector<Eigen::VectorXd> rows)
      : kernels_(std::move(kernels)), rows_(std::move(rows)) {}

  const KernelTable& kernels() const { return kernels_; }
  int N() const { return static_cast<int>(rows_.size()); }

  /// Row n (1-based): entries P^(n)_j for j = 0..n-1.
  const Eigen::VectorXd& row(int n) const { return rows_[n - 1]; }
  double entry(int n, int j) const { return rows_[n - 1](j); }

 private:
  KernelTable kernels_;  // owned copy, so the table outlives its source
  std::vector<Eigen::VectorXd> rows_;
};

/// Build the DCC table by the backward recursion
///   P^(n)_0 = 1/A^(n)_0,
///   P^(n)_{n-k} = (1/A^(k)_0) sum_{j=k+1}^n (A^(j)_{j-k-1} - A^(j)_{j-k}) P^(n)_{n-j}.
/// Requires monotone kernels; a negative recursion weight is reported with
/// its indices.
DccTable build_dcc(const KernelTable& table);

/// max over all 1 <= m <= n <= N of |sum_j P^(n)_{n-j} A^(j)_{j-m} - 1|.
double check_identity(const DccTable& dcc);

/// max over n of sum_j P^(n)_{n-j} - pi_A omega_{1+alpha}(t_n); the theory
/// predicts this is never positive.
double check_p_bound(const DccTable& dcc);

/// sum_{k=1}^n P^(n)_{n-k} nu_k for a positive sequence nu (length n).
double weighted_sum(const DccTable& dcc, int n, const Eigen::VectorXd& nu);

/// Right-hand side of the complementary-kernel summation estimate:
///   Gamma(2-alpha) pi_A sum_{j=1}^n tau_j max_{j<=k<=n} t_k^{alpha-1} nu_k,
/// with the suffix maxima computed exactly in one right-to-left scan.
double summation_estimate_rhs(const DccTable& dcc, int n, const Eigen::VectorXd& nu);

}  // namespace subdiff
