#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "subdiff/mesh.hpp"

namespace subdiff {

enum class SchemeKind { L1, Alikhanov };

std::string to_string(SchemeKind k);

/// Scheme metadata consumed by the stability/consistency machinery:
/// offset theta, the kernel lower-bound constant pi_A and the admissible
/// step-ratio cap.
struct SchemeDescriptor {
  SchemeKind kind;
  double alpha;
  double theta;    // 0 for L1, alpha/2 for Alikhanov
  double pi_A;     // 1 for L1, 11/4 for Alikhanov
  double rho_cap;  // +inf for L1, 7/4 for Alikhanov

  static SchemeDescriptor l1(double alpha);
  static SchemeDescriptor alikhanov(double alpha);
};

/// Triangular array of discrete convolution kernels: row n holds
/// [A^(n)_0, ..., A^(n)_{n-1}] so that the discrete Caputo derivative at
/// level n is sum_{k=1}^n A^(n)_{n-k} (v^k - v^{k-1}).
class KernelTable {
 public:
  KernelTable(SchemeDescriptor scheme, TimeMesh mesh,
              std::vector<Eigen::VectorXd> rows)
      : scheme_(scheme), mesh_(std::move(mesh)), rows_(std::move(rows)) {}

  const SchemeDescriptor& scheme() const { return scheme_; }
  const TimeMesh& mesh() const { return mesh_; }
  int N() const { return static_cast<int>(rows_.size()); }

  /// Row n (1-based): entries A^(n)_j for j = 0..n-1.
  const Eigen::VectorXd& row(int n) const { return rows_[n - 1]; }
  double entry(int n, int j) const { return rows_[n - 1](j); }

 private:
  SchemeDescriptor scheme_;
  TimeMesh mesh_;
  std::vector<Eigen::VectorXd> rows_;
};

/// L1 kernels A^(n)_{n-k} = [omega_{2-a}(t_n-t_{k-1}) - omega_{2-a}(t_n-t_k)] / tau_k,
/// evaluated through the exact antiderivative of omega_{1-a}. The power-law
/// difference is computed in expm1/log1p form so that entries stay accurate
/// for alpha close to 1 and k far from n.
KernelTable l1_kernels(const TimeMesh& mesh, double alpha);

/// Alikhanov kernels assembled from the a- and b-coefficients at the offset
/// point t_{n-theta}, theta = alpha/2. Requires the step-ratio cap
/// rho_k <= 7/4 unless enforce_ratio_cap is false (tests use the escape hatch
/// to observe how the kernel assumptions degrade on inadmissible meshes).
KernelTable alikhanov_kernels(const TimeMesh& mesh, double alpha,
                              bool enforce_ratio_cap = true);

/// sum_{k=1}^n A^(n)_{n-k} (v^k - v^{k-1}); values = [v^0, ..., v^n].
double apply_discrete_caputo(const KernelTable& table,
                             const Eigen::VectorXd& values, int n);

struct A1Result {
  bool ok = true;
  int n = -1;  // first violating row, 1-based
  int j = -1;  // first violating entry within the row
};

/// Kernel monotonicity: every row strictly positive and nonincreasing.
A1Result check_A1(const KernelTable& table);

/// Kernel lower bound: A^(n)_{n-k} >= (1/(pi_A tau_k)) int omega_{1-a}(t_n - s)
/// over step k, for all 1 <= k <= n <= N. Returns the worst relative margin
/// (negative means a violation).
double check_A2(const KernelTable& table);

struct EnergyOffsetQuantities {
  double damping;           // d_n = (2A_0 - A_1)/(A_0(A_0 - A_1))
  double offset_threshold;  // theta^(n) = (A_0 - A_1)/(2A_0 - A_1)
};

/// Per-row quantities of the kernel energy inequality: the scheme offset
/// theta must stay below offset_threshold, and damping * offset_threshold
/// equals 1/A^(n)_0 identically. Defined for rows n >= 2; throws
/// std::domain_error when the row is degenerate (A_0 == A_1).
EnergyOffsetQuantities energy_offset_quantities(const KernelTable& table, int n);

/// Exact step average of omega_{1-a}(t_ref - s) over [t_{k-1}, t_k]:
/// the building block shared by both kernel families and by check_A2.
double omega_step_average(double alpha, double t_ref, double t_left,
                          double t_right);

}  // namespace subdiff
