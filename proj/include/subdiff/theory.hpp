#pragma once

#include <Eigen/Dense>
#include <string>

#include "subdiff/dcc.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/solver.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Error-bound factors
// ---------------------------------------------------------------------------

/// Parameters the factor formulas depend on. `n` may be a real effective
/// index (n* on general meshes).
struct FactorParams {
  double alpha;  // (0,1)
  double sigma;  // (0,1) u (1,2)
  double gamma;  // >= 1
  double n;      // > 1
};

enum class FactorCase { Below, Equal, Above };  // sigma*gamma vs threshold

struct Factors {
  double varsigma;
  double zeta;
  double chi;            // varsigma for sigma in (0,1), zeta for sigma in (1,2)
  FactorCase branch;     // branch of the varsigma formula
};

/// min{sigma*gamma, 2-alpha}.
double beta_gamma(double alpha, double sigma, double gamma);

/// min{sigma*gamma, 3-alpha}. The printed definition in the source analysis
/// uses max, but every use of the quantity (orders tau^{theta_gamma},
/// N^{-min{sigma gamma, 2}}) requires the min, so min is what we evaluate.
double vartheta_gamma(double alpha, double sigma, double gamma);

/// Factors for the first-order-kernel scheme, branch threshold 2 - alpha:
///   varsigma = (1 - n^{-|d|}) / |d| with d = (2-alpha) - sigma*gamma,
///   ln n at d = 0; zeta switches to ln n for the whole d <= 0 range.
/// Both are continuous across the threshold and never exceed ln n.
Factors factor_l1(const FactorParams& p);

/// Same with threshold 3 - alpha.
Factors factor_alikhanov(const FactorParams& p);

// ---------------------------------------------------------------------------
// Interpolation-error envelopes and measured truncation errors, for the
// space-free manufactured family u(t) = 1 + t^sigma.
// ---------------------------------------------------------------------------

struct ConsistencyData {
  /// Exact local/history interpolation-error envelopes per level k = 1..N
  /// (stored at index k-1).
  Eigen::VectorXd g_loc;
  Eigen::VectorXd g_his;
  /// Closed-form bound sequences scaled by the family constant C_u.
  Eigen::VectorXd g_loc_bound;
  Eigen::VectorXd g_his_bound;
};

/// Family constant: max over l of |sigma (sigma-1) ... (sigma-l+1)|, l up to
/// 2 for the L1 scheme and 3 for Alikhanov's scheme.
double family_cu(SchemeKind kind, double sigma);

/// L1 envelopes: G^k = int_{t_{k-1}}^{t_k} (s - t_{k-1}) |u''(s)| ds evaluated
/// by tanh-sinh quadrature (the first interval carries an integrable
/// singularity); G_loc = G_his. Bounds: C_u tau_1^sigma / sigma at k = 1,
/// C_u t_{k-1}^{sigma-2} tau_k^2 for k >= 2.
ConsistencyData interpolation_errors_l1(const TimeMesh& mesh, double alpha,
                                        double sigma, double cu);

/// Alikhanov envelopes. The history envelope is the max norm of the
/// quadratic-interpolant error on each step (nodes t_{k-1}, t_k, t_{k+1},
/// with a virtual node t_{N+1} = t_N + tau_N at the last level); the local
/// envelope for k >= 2 is 2 tau_k times the max of the second-order Taylor
/// remainder of u' about the step midpoint, and at k = 1 the omega-weighted
/// deviation of u' from the first-step slope, normalized by the local kernel
/// coefficient. Bounds follow the cubic shapes with the same C_u.
ConsistencyData interpolation_errors_alikhanov(const TimeMesh& mesh,
                                               double alpha, double sigma,
                                               double cu);

/// Measured truncation errors R_t^j = (exact Caputo of u at t_{j-theta})
/// - (discrete Caputo at level j), j = 1..N, for u(t) = 1 + t^sigma.
Eigen::VectorXd measure_rt(const KernelTable& kernels, double sigma);

/// Error-convolution-structure margin: the minimum over k of
///   A^(k)_0 G_loc^k + sum_{j<k} (A^(k)_{k-j-1} - A^(k)_{k-j}) G_his^j - |R_t^k|.
/// Nonnegative means the ECS hypothesis holds at every level.
double check_ecs(const KernelTable& kernels, const ConsistencyData& data,
                 const Eigen::VectorXd& r_t);

/// Weighted per-level consistency data  G^k = A^(k)_0 (G_loc^k + G_his^k).
Eigen::VectorXd g_weighted(const KernelTable& kernels,
                           const ConsistencyData& data);

/// Global consistency functional
///   Xi^n = Gamma(2-alpha) pi_A ( sum_{j=2}^n tau_j max_{j<=k<=n} t_k^{alpha-1} G^k
///                                + tau_1^alpha G^1 ),
/// evaluated for every n with exact right-to-left suffix maxima.
Eigen::VectorXd xi_values(const KernelTable& kernels,
                          const Eigen::VectorXd& g_weighted);

/// Chain margin: min over n of (1+rho) Xi^n - sum_j P^(n)_{n-j} |R_t^j|,
/// rho the mesh max step ratio. Nonnegative means the summation estimate
/// dominates the measured global consistency error at every level.
double check_global_consistency(const DccTable& dcc, const Eigen::VectorXd& r_t,
                                const Eigen::VectorXd& xi);

/// Mesh-specialized closed-form Xi bounds (unit leading constant): the
/// uniform, graded and general-mesh shapes for either scheme. `n` is the time
/// level; general meshes substitute n* = (t_n/tau_1)^{1/gamma}.
double xi_bound_specialized(const SchemeDescriptor& scheme, const TimeMesh& mesh,
                            double sigma, double cu, int n);

// ---------------------------------------------------------------------------
// Discrete fractional Gronwall checker
// ---------------------------------------------------------------------------

struct GronwallInput {
  Eigen::VectorXd v;        // v^0..v^N, nonnegative
  Eigen::VectorXd g;        // g^1..g^N, nonnegative
  Eigen::VectorXd lambdas;  // lambda_0..lambda_{N-1}, nonnegative
  double Lambda;            // >= sum of lambdas
};

/// Validates the Gronwall hypothesis
///   sum_{k=1}^n A^(n)_{n-k} D((v^k)^2) <= sum_k lambda_{n-k} (v^{k-theta})^2
///                                          + v^{n-theta} g^n
/// at every level (throws std::invalid_argument at the first violation, and
/// for a step size breaking the stability restriction), then returns whether
/// the conclusion
///   v^n <= E_alpha(2 max{1,rho} pi_A Lambda t_n^alpha)
///          (v^0 + max_{k<=n} sum_j P^(k)_{k-j} g^j)
/// holds at every level.
bool check_dfgi(const KernelTable& kernels, const DccTable& dcc,
                const GronwallInput& in);

// ---------------------------------------------------------------------------
// Theorem error-bound evaluator
// ---------------------------------------------------------------------------

/// Full right-hand side of the convergence theorems at level n for the
/// manufactured problem (zero initial error):
///   C_u (rho+1) E_alpha(4 max{1,rho} pi_A kappa_+ t_n^alpha) *
///   ( tau_1^sigma/sigma + [scheme-offset term] + t_n^alpha h^2 + S_n ),
/// where S_n is the scheme's kernel-consistency sum and the offset term
/// t_n^alpha max_{2<=k<=n} t_{k-1}^{sigma-2} tau_k^2 appears only for the
/// offset (Alikhanov) scheme.
double theorem_bound(const SchemeDescriptor& scheme, const TimeMesh& mesh,
                     const SpatialGrid& grid, double sigma, double kappa,
                     double cu, int n);

// ---------------------------------------------------------------------------
// Factor-table reproduction
// ---------------------------------------------------------------------------

struct FactorCell {
  std::string scheme;       // "l1" | "alikhanov"
  std::string mesh_family;  // "uniform" | "graded" | "m1"
  std::string case_label;   // "lt" | "eq" | "gt" relative to the threshold
  std::string formula;      // "power_sum" | "ln_n"
  double exponent;          // representative sigma*gamma realizing the case
  double n;                 // level index (n* for the m1 row)
  double value;
  double ln_n;
  double ratio;  // value / ln_n, never above 1
};

/// The nine (mesh family x case) cells of one factor table for one scheme.
/// `table` selects the sigma range: 1 for sigma in (0,1), 2 for (1,2).
/// Uniform rows always select the varsigma branches; graded and general rows
/// select chi (varsigma for table 1, zeta for table 2).
std::vector<FactorCell> factor_table_cells(int table, SchemeKind scheme,
                                           double alpha, double n,
                                           double n_star_value);

}  // namespace subdiff
