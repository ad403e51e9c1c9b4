#include "subdiff/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subdiff/quadrature.hpp"
#include "subdiff/special_functions.hpp"

namespace subdiff {

namespace {

void validate_factor_params(const FactorParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw std::domain_error("factor: alpha must lie in (0,1)");
  if (!(p.sigma > 0.0 && p.sigma < 2.0) || p.sigma == 1.0)
    throw std::domain_error("factor: sigma must lie in (0,1) u (1,2)");
  if (!(p.gamma >= 1.0)) throw std::domain_error("factor: gamma must be >= 1");
  if (!(p.n > 1.0)) throw std::domain_error("factor: n must exceed 1");
}

// (1 - n^{-|d|}) / |d|, the value both varsigma branches share; equals ln n
// in the limit d -> 0 and never exceeds ln n.
double varsigma_value(double d, double log_n) {
  const double ad = std::abs(d);
  if (ad == 0.0) return log_n;
  return -std::expm1(-ad * log_n) / ad;
}

Factors factors_with_threshold(const FactorParams& p, double threshold) {
  validate_factor_params(p);
  const double log_n = std::log(p.n);
  const double d = threshold - p.sigma * p.gamma;
  Factors f;
  f.branch = d > 0.0 ? FactorCase::Below
                     : (d < 0.0 ? FactorCase::Above : FactorCase::Equal);
  f.varsigma = varsigma_value(d, log_n);
  f.zeta = d > 0.0 ? f.varsigma : log_n;
  f.chi = (p.sigma < 1.0) ? f.varsigma : f.zeta;
  return f;
}

// Manufactured family u(t) = 1 + t^sigma and its time derivatives.
struct PowerFamily {
  double sigma;
  double u(double t) const { return 1.0 + std::pow(t, sigma); }
  double du(double t) const { return sigma * std::pow(t, sigma - 1.0); }
  double d2u(double t) const {
    return sigma * (sigma - 1.0) * std::pow(t, sigma - 2.0);
  }
};

// Max of |f| over [a, b] from a uniform sample with one parabolic refinement
// around the discrete argmax; the envelope integrands are smooth per step.
double sampled_max(const std::function<double(double)>& f, double a, double b) {
  constexpr int kSamples = 65;
  double best = 0.0;
  int best_i = 0;
  const double h = (b - a) / (kSamples - 1);
  double vals[kSamples];
  for (int i = 0; i < kSamples; ++i) {
    vals[i] = std::abs(f(a + i * h));
    if (vals[i] > best) {
      best = vals[i];
      best_i = i;
    }
  }
  if (best_i > 0 && best_i + 1 < kSamples) {
    const double y0 = vals[best_i - 1], y1 = vals[best_i], y2 = vals[best_i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < 0.0) {
      const double dx = 0.5 * (y0 - y2) / denom;
      if (std::abs(dx) <= 1.0)
        best = std::max(best, std::abs(f(a + (best_i + dx) * h)));
    }
  }
  return best;
}

}  // namespace

double beta_gamma(double alpha, double sigma, double gamma) {
  return std::min(sigma * gamma, 2.0 - alpha);
}

double vartheta_gamma(double alpha, double sigma, double gamma) {
  return std::min(sigma * gamma, 3.0 - alpha);
}

Factors factor_l1(const FactorParams& p) {
  return factors_with_threshold(p, 2.0 - p.alpha);
}

Factors factor_alikhanov(const FactorParams& p) {
  return factors_with_threshold(p, 3.0 - p.alpha);
}

double family_cu(SchemeKind kind, double sigma) {
  double cu = std::abs(sigma);
  cu = std::max(cu, std::abs(sigma * (sigma - 1.0)));
  if (kind == SchemeKind::Alikhanov)
    cu = std::max(cu, std::abs(sigma * (sigma - 1.0) * (sigma - 2.0)));
  return cu;
}

ConsistencyData interpolation_errors_l1(const TimeMesh& mesh, double alpha,
                                        double sigma, double cu) {
  (void)alpha;  // the L1 envelopes are kernel-free
  const int N = mesh.N();
  const PowerFamily fam{sigma};
  ConsistencyData d;
  d.g_loc.setZero(N);
  d.g_his.setZero(N);
  d.g_loc_bound.setZero(N);
  d.g_his_bound.setZero(N);

  for (int k = 1; k <= N; ++k) {
    const double a = mesh.t(k - 1), b = mesh.t(k);
    double g = 0.0;
    if (sigma != 1.0) {
      // the k = 1 integrand is singular at s = 0; dl carries the exact offset
      g = tanh_sinh(
          [&](double s, double dl, double) {
            return dl * std::abs(fam.d2u(k == 1 ? dl : s));
          },
          a, b, 1e-11);
    }
    d.g_loc(k - 1) = d.g_his(k - 1) = g;
    const double bound = (k == 1)
                             ? cu * std::pow(mesh.tau(1), sigma) / sigma
                             : cu * std::pow(a, sigma - 2.0) * mesh.tau(k) * mesh.tau(k);
    d.g_loc_bound(k - 1) = d.g_his_bound(k - 1) = bound;
  }
  return d;
}

ConsistencyData interpolation_errors_alikhanov(const TimeMesh& mesh,
                                               double alpha, double sigma,
                                               double cu) {
  const int N = mesh.N();
  const double theta = 0.5 * alpha;
  const PowerFamily fam{sigma};
  ConsistencyData d;
  d.g_loc.setZero(N);
  d.g_his.setZero(N);
  d.g_loc_bound.setZero(N);
  d.g_his_bound.setZero(N);

  // local envelope, first step: omega-weighted deviation of u' from the
  // first-step slope, normalized by the local kernel coefficient
  if (sigma != 1.0) {
    const double t1 = mesh.t(1);
    const double t_ref = (1.0 - theta) * t1;
    const double slope = (fam.u(t1) - fam.u(0.0)) / t1;
    // Substituting y = (t_ref - s)^{1-alpha} absorbs the kernel weight, so
    //   int_0^{t_ref} omega_{1-a}(t_ref - s) |u'(s) - slope| ds
    //     = (1/Gamma(2-a)) int_0^Y |u'(s(y)) - slope| dy,  Y = t_ref^{1-a},
    // and dividing by the local coefficient a_0^(1) leaves tau_1/Y times the
    // mean of the integrand in y. The remaining singularity (u' at s = 0,
    // i.e. y = Y) is a fixed power independent of alpha.
    const double beta = 1.0 - alpha;
    const double Y = std::pow(t_ref, beta);
    auto s_of = [&](double dr) {
      // s = t_ref - y^{1/beta} written through the gap dr = Y - y, which
      // stays exact near y = Y where s -> 0
      return -t_ref * std::expm1(std::log1p(-dr / Y) / beta);
    };
    auto phi = [&](double dr) { return std::abs(fam.du(s_of(dr)) - slope); };
    // u' crosses the slope once inside the step; split the y-range there so
    // each piece is smooth up to its endpoints
    const double split = std::pow(slope / sigma, 1.0 / (sigma - 1.0));
    double integral = 0.0;
    if (split > 0.0 && split < t_ref) {
      const double y_kink = std::pow(t_ref - split, beta);
      integral = tanh_sinh([&](double y, double, double) { return phi(Y - y); },
                           0.0, y_kink, 1e-11) +
                 tanh_sinh([&](double, double, double dr) { return phi(dr); },
                           y_kink, Y, 1e-11);
    } else {
      integral = tanh_sinh([&](double, double, double dr) { return phi(dr); },
                           0.0, Y, 1e-11);
    }
    d.g_loc(0) = t1 * integral / Y;
  }

  // local envelope, later steps: 2 tau_k max |u'(s) - u'(m) - u''(m)(s - m)|,
  // the second-order Taylor remainder of u' about the step midpoint (the
  // offset point's moment cancellation removes the u''(m)(s - m) term from
  // the local consistency error, leaving this remainder)
  for (int k = 2; k <= N; ++k) {
    const double a = mesh.t(k - 1), b = mesh.t(k);
    const double m = 0.5 * (a + b);
    const double dum = fam.du(m), d2um = fam.d2u(m);
    const double r_max = sampled_max(
        [&](double s) { return fam.du(s) - dum - d2um * (s - m); }, a, b);
    d.g_loc(k - 1) = 2.0 * mesh.tau(k) * r_max;
  }

  // history envelope: max norm of the quadratic interpolation error on the
  // step, nodes t_{k-1}, t_k, t_{k+1}; virtual node at the last level
  for (int k = 1; k <= N; ++k) {
    const double x0 = mesh.t(k - 1), x1 = mesh.t(k);
    const double x2 = (k < N) ? mesh.t(k + 1) : mesh.t(N) + mesh.tau(N);
    const double u0 = fam.u(x0), u1 = fam.u(x1), u2 = fam.u(x2);
    auto p2_err = [&](double s) {
      const double l0 = (s - x1) * (s - x2) / ((x0 - x1) * (x0 - x2));
      const double l1 = (s - x0) * (s - x2) / ((x1 - x0) * (x1 - x2));
      const double l2 = (s - x0) * (s - x1) / ((x2 - x0) * (x2 - x1));
      return fam.u(s) - (u0 * l0 + u1 * l1 + u2 * l2);
    };
    d.g_his(k - 1) = sampled_max(p2_err, x0, x1);
  }

  // bound shapes (tau_{N+1} := tau_N at the last level)
  const double tau1 = mesh.tau(1);
  d.g_loc_bound(0) = cu * std::pow(tau1, sigma) / sigma;
  d.g_his_bound(0) =
      cu * (std::pow(tau1, sigma) / sigma +
            std::pow(mesh.t(1), sigma - 3.0) * std::pow(mesh.tau(2 <= N ? 2 : 1), 3.0));
  for (int k = 2; k <= N; ++k) {
    const double tk1 = mesh.t(k - 1);
    const double tau_k = mesh.tau(k);
    const double tau_next = (k < N) ? mesh.tau(k + 1) : mesh.tau(N);
    d.g_loc_bound(k - 1) = cu * std::pow(tk1, sigma - 3.0) * std::pow(tau_k, 3.0);
    d.g_his_bound(k - 1) =
        cu * (std::pow(tk1, sigma - 3.0) * std::pow(tau_k, 3.0) +
              std::pow(mesh.t(k), sigma - 3.0) * std::pow(tau_next, 3.0));
  }
  return d;
}

Eigen::VectorXd measure_rt(const KernelTable& kernels, double sigma) {
  const auto& mesh = kernels.mesh();
  const double alpha = kernels.scheme().alpha;
  const double theta = kernels.scheme().theta;
  const int N = mesh.N();

  Eigen::VectorXd values(N + 1);
  for (int k = 0; k <= N; ++k) values(k) = 1.0 + std::pow(mesh.t(k), sigma);

  Eigen::VectorXd rt(N);
  for (int n = 1; n <= N; ++n) {
    const double exact = caputo_power(alpha, sigma, mesh.t_offset(n, theta));
    rt(n - 1) = exact - apply_discrete_caputo(kernels, values, n);
  }
  return rt;
}

double check_ecs(const KernelTable& kernels, const ConsistencyData& data,
                 const Eigen::VectorXd& r_t) {
  const int N = kernels.N();
  if (r_t.size() != N || data.g_loc.size() != N || data.g_his.size() != N)
    throw std::invalid_argument("check_ecs: inconsistent sequence lengths");
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= N; ++k) {
    const auto& A = kernels.row(k);
    double rhs = A(0) * data.g_loc(k - 1);
    for (int j = 1; j < k; ++j)
      rhs += (A(k - j - 1) - A(k - j)) * data.g_his(j - 1);
    worst = std::min(worst, rhs - std::abs(r_t(k - 1)));
  }
  return worst;
}

Eigen::VectorXd g_weighted(const KernelTable& kernels,
                           const ConsistencyData& data) {
  const int N = kernels.N();
  Eigen::VectorXd g(N);
  for (int k = 1; k <= N; ++k)
    g(k - 1) = kernels.entry(k, 0) * (data.g_loc(k - 1) + data.g_his(k - 1));
  return g;
}

Eigen::VectorXd xi_values(const KernelTable& kernels,
                          const Eigen::VectorXd& gw) {
  const auto& mesh = kernels.mesh();
  const double alpha = kernels.scheme().alpha;
  const double pi_A = kernels.scheme().pi_A;
  const int N = kernels.N();
  if (gw.size() != N) throw std::invalid_argument("xi_values: need N entries");

  const double front = gamma_fn(2.0 - alpha) * pi_A;
  const double first = std::pow(mesh.tau(1), alpha) * gw(0);
  Eigen::VectorXd xi(N);
  for (int n = 1; n <= N; ++n) {
    // suffix maxima of t_k^{alpha-1} G^k over k = j..n
    double run = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    Eigen::VectorXd suffix(n + 1);
    for (int k = n; k >= 2; --k) {
      run = std::max(run, std::pow(mesh.t(k), alpha - 1.0) * gw(k - 1));
      suffix(k) = run;
    }
    for (int j = 2; j <= n; ++j) sum += mesh.tau(j) * suffix(j);
    xi(n - 1) = front * (sum + first);
  }
  return xi;
}

double check_global_consistency(const DccTable& dcc, const Eigen::VectorXd& r_t,
                                const Eigen::VectorXd& xi) {
  const int N = dcc.N();
  if (r_t.size() != N || xi.size() != N)
    throw std::invalid_argument("check_global_consistency: inconsistent lengths");
  const double rho = dcc.kernels().mesh().max_ratio();
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= N; ++n) {
    double lhs = 0.0;
    const auto& p = dcc.row(n);
    for (int j = 1; j <= n; ++j) lhs += p(n - j) * std::abs(r_t(j - 1));
    worst = std::min(worst, (1.0 + rho) * xi(n - 1) - lhs);
  }
  return worst;
}

double xi_bound_specialized(const SchemeDescriptor& scheme, const TimeMesh& mesh,
                            double sigma, double cu, int n) {
  const double alpha = scheme.alpha;
  const double gamma = mesh.grading();
  const double T = mesh.T();
  const double tau = mesh.max_step();
  const bool l1 = scheme.kind == SchemeKind::L1;

  auto factors_at = [&](double level) {
    const FactorParams p{alpha, sigma, gamma, level};
    return l1 ? factor_l1(p) : factor_alikhanov(p);
  };

  switch (mesh.family()) {
    case MeshFamily::Uniform: {
      const Factors f = factors_at(static_cast<double>(n));
      if (l1) {
        const double b1 = beta_gamma(alpha, sigma, 1.0);
        return cu * ((1.0 / sigma + 1.0) * std::pow(tau, sigma) +
                     f.varsigma * std::pow(mesh.t(n), sigma - b1) * std::pow(tau, b1));
      }
      const double v1 = vartheta_gamma(alpha, sigma, 1.0);
      return cu * (1.0 / sigma + f.varsigma) * std::pow(tau, v1) *
             std::max(1.0, std::pow(T, sigma - v1));
    }
    case MeshFamily::Graded: {
      const Factors f = factors_at(static_cast<double>(n));
      const double rate = l1 ? beta_gamma(alpha, sigma, gamma)
                             : vartheta_gamma(alpha, sigma, gamma);
      return cu * std::pow(T, sigma) * (1.0 / sigma + f.chi) *
             std::pow(static_cast<double>(mesh.N()), -rate);
    }
    default: {  // jittered / general: the grading-class shape with n*
      const Factors f = factors_at(n_star(mesh, n, gamma));
      const double rate = l1 ? beta_gamma(alpha, sigma, gamma)
                             : vartheta_gamma(alpha, sigma, gamma);
      return cu * (1.0 / sigma + f.chi) * std::pow(tau, rate);
    }
  }
}

bool check_dfgi(const KernelTable& kernels, const DccTable& dcc,
                const GronwallInput& in) {
  const auto& mesh = kernels.mesh();
  const auto& scheme = kernels.scheme();
  const double theta = scheme.theta;
  const double alpha = scheme.alpha;
  const int N = kernels.N();

  if (in.v.size() != N + 1 || in.g.size() != N || in.lambdas.size() != N)
    throw std::invalid_argument("check_dfgi: sequence lengths must be N+1, N, N");
  if (in.v.minCoeff() < 0.0 || in.g.minCoeff() < 0.0 || in.lambdas.minCoeff() < 0.0)
    throw std::invalid_argument("check_dfgi: sequences must be nonnegative");
  if (in.Lambda + 1e-12 < in.lambdas.sum())
    throw std::invalid_argument("check_dfgi: Lambda must dominate sum of lambdas");

  const double rho = std::max(1.0, mesh.max_ratio());
  if (in.Lambda > 0.0) {
    const double cap = std::pow(
        2.0 * rho * scheme.pi_A * gamma_fn(2.0 - alpha) * in.Lambda, -1.0 / alpha);
    if (mesh.max_step() > cap * (1.0 + 1e-12))
      throw std::invalid_argument("check_dfgi: maximum step violates the stability restriction");
  }

  auto v_theta = [&](int k) { return theta * in.v(k - 1) + (1.0 - theta) * in.v(k); };

  for (int n = 1; n <= N; ++n) {
    const auto& A = kernels.row(n);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 1; k <= n; ++k) {
      lhs += A(n - k) * (in.v(k) * in.v(k) - in.v(k - 1) * in.v(k - 1));
      rhs += in.lambdas(n - k) * v_theta(k) * v_theta(k);
    }
    rhs += v_theta(n) * in.g(n - 1);
    const double tol = 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
    if (lhs > rhs + tol)
      throw std::invalid_argument("check_dfgi: hypothesis fails at level " +
                                  std::to_string(n));
  }

  double run_max = 0.0;
  for (int n = 1; n <= N; ++n) {
    double psum = 0.0;
    const auto& p = dcc.row(n);
    for (int j = 1; j <= n; ++j) psum += p(n - j) * in.g(j - 1);
    run_max = std::max(run_max, psum);
    const double ml = mittag_leffler(
        alpha, 2.0 * rho * scheme.pi_A * in.Lambda * std::pow(mesh.t(n), alpha));
    const double bound = ml * (in.v(0) + run_max);
    if (in.v(n) > bound * (1.0 + 1e-10) + 1e-14) return false;
  }
  return true;
}

double theorem_bound(const SchemeDescriptor& scheme, const TimeMesh& mesh,
                     const SpatialGrid& grid, double sigma, double kappa,
                     double cu, int n) {
  if (n == 0) return 0.0;
  if (n < 0 || n > mesh.N()) throw std::out_of_range("theorem_bound: level out of range");
  const double alpha = scheme.alpha;
  const double rho = mesh.max_ratio();
  const double kappa_plus = std::max(kappa, 0.0);
  const double tn = mesh.t(n);
  const double prefactor =
      cu * (rho + 1.0) *
      mittag_leffler(alpha, 4.0 * std::max(1.0, rho) * scheme.pi_A * kappa_plus *
                                std::pow(tn, alpha));

  double core = std::pow(mesh.tau(1), sigma) / sigma +
                std::pow(tn, alpha) * grid.h() * grid.h();

  if (scheme.theta != 0.0) {
    double m = 0.0;
    for (int k = 2; k <= n; ++k)
      m = std::max(m, std::pow(mesh.t(k - 1), sigma - 2.0) * mesh.tau(k) * mesh.tau(k));
    core += std::pow(tn, alpha) * m;
  }

  // kernel-consistency sum with exact suffix maxima
  auto level_term = [&](int k) {
    if (scheme.kind == SchemeKind::L1) {
      return std::pow(mesh.t(k - 1), sigma - 2.0) * std::pow(mesh.t(k), alpha - 1.0) *
             std::pow(mesh.tau(k), 2.0 - alpha);
    }
    const double tau_next = (k < mesh.N()) ? mesh.tau(k + 1) : mesh.tau(mesh.N());
    return std::pow(mesh.t(k - 1), sigma - 3.0) * std::pow(mesh.t(k), alpha - 1.0) *
               std::pow(mesh.tau(k), 3.0 - alpha) +
           std::pow(mesh.t(k), sigma + alpha - 4.0) * std::pow(tau_next, 3.0) /
               std::pow(mesh.tau(k), alpha);
  };
  if (n >= 2) {
    Eigen::VectorXd suffix(n + 1);
    double run = -std::numeric_limits<double>::infinity();
    for (int k = n; k >= 2; --k) {
      run = std::max(run, level_term(k));
      suffix(k) = run;
    }
    double sum = 0.0;
    for (int j = 2; j <= n; ++j) sum += mesh.tau(j) * suffix(j);
    core += sum;
  }
  return prefactor * core;
}

std::vector<FactorCell> factor_table_cells(int table, SchemeKind scheme,
                                           double alpha, double n,
                                           double n_star_value) {
  if (table != 1 && table != 2)
    throw std::invalid_argument("factor_table_cells: table must be 1 or 2");
  const bool l1 = scheme == SchemeKind::L1;
  const double threshold = l1 ? 2.0 - alpha : 3.0 - alpha;
  const double log_n = std::log(n);
  const double log_ns = std::log(n_star_value);

  struct Row {
    const char* family;
    bool use_chi;  // chi selection; uniform rows always print varsigma
    double level;
  };
  const Row rows[3] = {{"uniform", false, n},
                       {"graded", true, n},
                       {"m1", true, n_star_value}};
  const struct {
    const char* label;
    double offset;
  } cases[3] = {{"lt", -0.4}, {"eq", 0.0}, {"gt", 0.4}};

  std::vector<FactorCell> cells;
  cells.reserve(9);
  for (const auto& row : rows) {
    for (const auto& c : cases) {
      const double p = threshold + c.offset;
      const double d = threshold - p;
      const double L = (row.level == n) ? log_n : log_ns;
      double value;
      std::string formula;
      if (!row.use_chi || table == 1) {
        // varsigma branches
        value = varsigma_value(d, L);
        formula = (d > 0.0) ? "power_sum" : (d < 0.0 ? "power_sum_reflected" : "ln_n");
      } else {
        // zeta branches (sigma in (1,2) on graded/general rows)
        value = (d > 0.0) ? varsigma_value(d, L) : L;
        formula = (d > 0.0) ? "power_sum" : "ln_n";
      }
      cells.push_back({to_string(scheme), row.family, c.label, formula, p,
                       row.level, value, L, value / L});
    }
  }
  return cells;
}

}  // namespace subdiff
