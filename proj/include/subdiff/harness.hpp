#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subdiff/dcc.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/theory.hpp"

namespace subdiff {

/// One experiment description; mirrors the CLI flags and the JSON config
/// format field for field.
struct ExperimentConfig {
  SchemeKind scheme = SchemeKind::L1;
  MeshFamily mesh_family = MeshFamily::Uniform;
  double gamma = 1.0;
  bool gamma_opt = false;  // per-alpha gamma = max{1, (2-alpha)/sigma}
  double jitter = 0.0;
  std::uint32_t seed = 1;
  std::vector<double> alphas = {0.5};
  double sigma = 0.5;
  bool sigma_follows_alpha = false;
  double kappa = 0.0;
  double T = 1.0;
  std::vector<int> Ns = {32, 64, 128, 256, 512};
  int M = 2048;
  double x_l = 0.0;
  double x_r = 1.0;
  std::string out_dir = ".";

  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

/// Mesh construction from config pieces.
TimeMesh build_mesh(MeshFamily family, double T, int N, double gamma,
                    double jitter, std::uint32_t seed);

/// Manufactured problem u(x,t) = (1 + t^sigma) sin(pi (x-x_l)/(x_r-x_l)),
/// with f assembled from the exact Caputo derivative of the time factor and
/// the analytic spatial derivatives.
Problem manufactured_problem(double sigma, double alpha, double kappa,
                             double x_l, double x_r);

struct OrderFit {
  double order = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  bool reliable = false;  // >= 4 points and residual < 0.05
};

OrderFit fit_order(const std::vector<int>& Ns, const std::vector<double>& errs);

struct ConvergenceCell {
  double alpha;
  double gamma;  // effective grading
  int N;
  double err_final;
  double err_max;
  double chi;      // factor at the final level
  double ln_n;
  double bound;    // theorem bound at the final level
  double bound_over_err;  // bound / err_final
  double cu;       // calibrated family constant behind the bound
  double ml_prefactor;
};

struct AlphaFit {
  double alpha;
  OrderFit fit_final;
  OrderFit fit_max;
};

struct ErrorReport {
  ExperimentConfig config;
  double cu = 0.0;
  std::vector<ConvergenceCell> cells;  // sorted by (alpha, N)
  std::vector<AlphaFit> fits;
  bool spatial_probe_ok = true;
  double spatial_probe_rel = 0.0;  // |err_M - err_2M| / err_2M at largest N

  std::string to_csv() const;
  std::string to_json() const;
};

/// Solve across the (alpha, N) grid, fit temporal orders on the max-over-n
/// L2 errors (final-time fit reported as well), and run the one-shot spatial
/// contamination probe at the largest N.
ErrorReport run_convergence(const ExperimentConfig& config);

struct AlphaSweepRow {
  double alpha;
  double gamma;
  double err_final;
  double err_max;
  double chi;
  double ln_n;
  double bound;
};

struct AlphaSweepReport {
  ExperimentConfig config;
  std::vector<AlphaSweepRow> rows;
  double ratio_final = 0.0;  // max/min of final-time errors
  double ratio_max = 0.0;    // max/min of max-over-n errors
  double bound_ratio_last_pair = 0.0;  // bound(alpha_last) / bound(alpha_prev)
  bool chi_within_log = true;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Fixed-N robustness sweep across the config's alpha list.
AlphaSweepReport alpha_sweep(const ExperimentConfig& config);

/// Fitted spatial order from M-doubling at fixed N, using the linear-in-time
/// solution u = (1+t) sin(pi x_hat) for which the time discretization is
/// exact, so the measured error is purely spatial.
OrderFit spatial_order_probe(double alpha, double kappa, int N,
                             const std::vector<int>& Ms, double x_l, double x_r);

/// Admissible input set for the Gronwall checker: random nonnegative v and
/// lambdas, with g sized so the hypothesis holds with slack at every level.
GronwallInput make_gronwall_set(const KernelTable& kernels, std::uint32_t seed);

/// Breaks an admissible set by inflating one interior v entry, which the
/// hypothesis validation must reject.
GronwallInput corrupt_gronwall_set(const KernelTable& kernels, GronwallInput in,
                                   std::uint32_t seed);

struct CheckResult {
  std::string name;
  bool pass;
  double metric;
  std::string detail;
};

bool all_pass(const std::vector<CheckResult>& results);

/// Assumption suite over the verification mesh matrix: A1 for both schemes,
/// A2 relative margins, the mean-value sandwich for L1 kernels, and the
/// per-row energy-offset quantities.
std::vector<CheckResult> run_kernel_checks(int N = 256);

/// DCC suite over the same matrix: identity residual, the omega upper bound
/// on row sums, and the weighted-sum estimate on random positive sequences.
std::vector<CheckResult> run_dcc_checks(int N = 256, int random_sequences = 200);

/// Consistency suite: ECS margins and the global chain
/// sum P |R_t| <= (1+rho) Xi with exact-integral envelopes.
std::vector<CheckResult> run_ecs_checks(int N = 128);

/// Gronwall suite: `sets` admissible sets per scheme must satisfy the
/// conclusion, and as many corrupted sets must be rejected.
std::vector<CheckResult> run_gronwall_checks(int N = 48, int sets = 100);

/// Factor-table CSVs (one per sigma range, both schemes enumerated).
std::string factor_table_csv(int table);
void emit_factor_tables(const std::string& dir);

/// Write a kernel or DCC table as CSV rows (row per level) for debugging.
std::string kernel_table_csv(const KernelTable& table);
std::string dcc_table_csv(const DccTable& table);

void write_file(const std::string& path, const std::string& content);

}  // namespace subdiff
