#include "subdiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "subdiff/special_functions.hpp"

namespace subdiff {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* scheme_name(SchemeKind k) { return k == SchemeKind::L1 ? "l1" : "alikhanov"; }

KernelTable build_kernels(SchemeKind kind, const TimeMesh& mesh, double alpha) {
  return kind == SchemeKind::L1 ? l1_kernels(mesh, alpha)
                                : alikhanov_kernels(mesh, alpha);
}

SchemeDescriptor make_descriptor(SchemeKind kind, double alpha) {
  return kind == SchemeKind::L1 ? SchemeDescriptor::l1(alpha)
                                : SchemeDescriptor::alikhanov(alpha);
}

Factors scheme_factors(SchemeKind kind, const FactorParams& p) {
  return kind == SchemeKind::L1 ? factor_l1(p) : factor_alikhanov(p);
}

ConsistencyData interpolation_errors(SchemeKind kind, const TimeMesh& mesh,
                                     double alpha, double sigma, double cu) {
  return kind == SchemeKind::L1
             ? interpolation_errors_l1(mesh, alpha, sigma, cu)
             : interpolation_errors_alikhanov(mesh, alpha, sigma, cu);
}

Eigen::VectorXd error_series(const Solution& sol, const Problem& problem) {
  Eigen::VectorXd errs(sol.mesh.N() + 1);
  for (int n = 0; n <= sol.mesh.N(); ++n) errs(n) = sol.error_at(problem, n);
  return errs;
}

// verification mesh matrix shared by the kernel/dcc suites
struct MeshSpec {
  std::string name;
  MeshFamily family;
  double gamma;
};

const std::vector<MeshSpec>& kernel_mesh_matrix() {
  static const std::vector<MeshSpec> m = {
      {"uniform", MeshFamily::Uniform, 1.0},
      {"graded1", MeshFamily::Graded, 1.0},
      {"graded2", MeshFamily::Graded, 2.0},
      {"graded3", MeshFamily::Graded, 3.0},
      {"jittered2", MeshFamily::Jittered, 2.0},
  };
  return m;
}

const std::vector<double>& alpha_matrix() {
  static const std::vector<double> a = {0.3, 0.6, 0.9, 0.99};
  return a;
}

}  // namespace

void ExperimentConfig::validate() const {
  for (int n : Ns)
    if (n < 4) throw std::invalid_argument("config: every N must be >= 4");
  if (Ns.empty()) throw std::invalid_argument("config: N list is empty");
  if (alphas.empty()) throw std::invalid_argument("config: alpha list is empty");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("config: alpha entries must lie in (0,1)");
  if (!sigma_follows_alpha) {
    if (!(sigma > 0.0 && sigma < 2.0) || sigma == 1.0)
      throw std::invalid_argument("config: sigma must lie in (0,1) u (1,2)");
  }
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be positive");
  if (M < 2) throw std::invalid_argument("config: M must be >= 2");
  if (!(x_r > x_l)) throw std::invalid_argument("config: x_r must exceed x_l");
  if (!(jitter >= 0.0 && jitter < 0.3))
    throw std::invalid_argument("config: jitter must lie in [0, 0.3)");
  if (!(gamma >= 1.0)) throw std::invalid_argument("config: gamma must be >= 1");
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["scheme"] = scheme_name(scheme);
  j["mesh_family"] = to_string(mesh_family);
  j["gamma"] = gamma;
  j["gamma_opt"] = gamma_opt;
  j["jitter"] = jitter;
  j["seed"] = seed;
  j["alphas"] = alphas;
  j["sigma"] = sigma;
  j["sigma_follows_alpha"] = sigma_follows_alpha;
  j["kappa"] = kappa;
  j["T"] = T;
  j["Ns"] = Ns;
  j["M"] = M;
  j["x_l"] = x_l;
  j["x_r"] = x_r;
  j["out_dir"] = out_dir;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  if (j.contains("scheme")) {
    const auto s = j["scheme"].get<std::string>();
    if (s == "l1") c.scheme = SchemeKind::L1;
    else if (s == "alikhanov") c.scheme = SchemeKind::Alikhanov;
    else throw std::invalid_argument("config: unknown scheme " + s);
  }
  if (j.contains("mesh_family")) {
    const auto s = j["mesh_family"].get<std::string>();
    if (s == "uniform") c.mesh_family = MeshFamily::Uniform;
    else if (s == "graded") c.mesh_family = MeshFamily::Graded;
    else if (s == "jittered") c.mesh_family = MeshFamily::Jittered;
    else throw std::invalid_argument("config: unknown mesh family " + s);
  }
  c.gamma = j.value("gamma", c.gamma);
  c.gamma_opt = j.value("gamma_opt", c.gamma_opt);
  c.jitter = j.value("jitter", c.jitter);
  c.seed = j.value("seed", c.seed);
  if (j.contains("alphas")) c.alphas = j["alphas"].get<std::vector<double>>();
  c.sigma = j.value("sigma", c.sigma);
  c.sigma_follows_alpha = j.value("sigma_follows_alpha", c.sigma_follows_alpha);
  c.kappa = j.value("kappa", c.kappa);
  c.T = j.value("T", c.T);
  if (j.contains("Ns")) c.Ns = j["Ns"].get<std::vector<int>>();
  c.M = j.value("M", c.M);
  c.x_l = j.value("x_l", c.x_l);
  c.x_r = j.value("x_r", c.x_r);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

TimeMesh build_mesh(MeshFamily family, double T, int N, double gamma,
                    double jitter, std::uint32_t seed) {
  switch (family) {
    case MeshFamily::Uniform: return uniform_mesh(T, N);
    case MeshFamily::Graded: return graded_mesh(T, N, gamma);
    case MeshFamily::Jittered: return jittered_graded_mesh(T, N, gamma, jitter, seed);
    default:
      throw std::invalid_argument("build_mesh: general meshes come from points, not a family tag");
  }
}

Problem manufactured_problem(double sigma, double alpha, double kappa,
                             double x_l, double x_r) {
  const double wave = M_PI / (x_r - x_l);
  Problem p;
  p.kappa = kappa;
  p.f = [=](double x, double t) {
    const double s = std::sin(wave * (x - x_l));
    return (caputo_power(alpha, sigma, t) +
            (wave * wave - kappa) * (1.0 + std::pow(t, sigma))) * s;
  };
  p.u0 = [=](double x) { return std::sin(wave * (x - x_l)); };
  p.exact = [=](double x, double t) {
    return (1.0 + std::pow(t, sigma)) * std::sin(wave * (x - x_l));
  };
  return p;
}

OrderFit fit_order(const std::vector<int>& Ns, const std::vector<double>& errs) {
  if (Ns.size() != errs.size() || Ns.size() < 2)
    throw std::invalid_argument("fit_order: need matching lists of >= 2 runs");
  const auto m = static_cast<Eigen::Index>(Ns.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = std::log(static_cast<double>(Ns[i]));
    A(i, 1) = 1.0;
    y(i) = std::log(errs[i]);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  OrderFit fit;
  fit.order = -coef(0);
  fit.residual = std::sqrt((A * coef - y).squaredNorm() / m);
  fit.reliable = Ns.size() >= 4 && fit.residual < 0.05;
  return fit;
}

ErrorReport run_convergence(const ExperimentConfig& config) {
  config.validate();
  ErrorReport report;
  report.config = config;

  for (double alpha : config.alphas) {
    const double sigma = config.sigma_follows_alpha ? alpha : config.sigma;
    const double gamma_eff =
        config.gamma_opt ? std::max(1.0, (2.0 - alpha) / sigma) : config.gamma;
    const double cu = family_cu(config.scheme, sigma);
    report.cu = cu;
    const Problem problem =
        manufactured_problem(sigma, alpha, config.kappa, config.x_l, config.x_r);
    const SpatialGrid grid(config.x_l, config.x_r, config.M);

    std::vector<double> errs_final, errs_max;
    for (int N : config.Ns) {
      const TimeMesh mesh = build_mesh(config.mesh_family, config.T, N, gamma_eff,
                                       config.jitter, config.seed);
      const KernelTable kernels = build_kernels(config.scheme, mesh, alpha);
      const Solution sol = solve(problem, grid, kernels);
      const Eigen::VectorXd errs = error_series(sol, problem);

      ConvergenceCell cell;
      cell.alpha = alpha;
      cell.gamma = gamma_eff;
      cell.N = N;
      cell.err_final = errs(N);
      cell.err_max = errs.maxCoeff();
      const double level = (config.mesh_family == MeshFamily::Jittered)
                               ? n_star(mesh, N, gamma_eff)
                               : static_cast<double>(N);
      const Factors f =
          scheme_factors(config.scheme, {alpha, sigma, gamma_eff, level});
      cell.chi = f.chi;
      cell.ln_n = std::log(level);
      cell.cu = cu;
      const auto desc = make_descriptor(config.scheme, alpha);
      cell.bound = theorem_bound(desc, mesh, grid, sigma, config.kappa, cu, N);
      cell.bound_over_err = cell.bound / cell.err_final;
      cell.ml_prefactor = mittag_leffler(
          alpha, 4.0 * std::max(1.0, mesh.max_ratio()) * desc.pi_A *
                     std::max(config.kappa, 0.0) * std::pow(mesh.T(), alpha));
      report.cells.push_back(cell);
      errs_final.push_back(cell.err_final);
      errs_max.push_back(cell.err_max);
    }
    AlphaFit fit;
    fit.alpha = alpha;
    fit.fit_final = fit_order(config.Ns, errs_final);
    fit.fit_max = fit_order(config.Ns, errs_max);
    report.fits.push_back(fit);
  }

  // one-shot spatial contamination probe at the largest N of the first alpha
  {
    const double alpha = config.alphas.front();
    const double sigma = config.sigma_follows_alpha ? alpha : config.sigma;
    const double gamma_eff =
        config.gamma_opt ? std::max(1.0, (2.0 - alpha) / sigma) : config.gamma;
    const int N = config.Ns.back();
    const TimeMesh mesh = build_mesh(config.mesh_family, config.T, N, gamma_eff,
                                     config.jitter, config.seed);
    const KernelTable kernels = build_kernels(config.scheme, mesh, alpha);
    const Problem problem =
        manufactured_problem(sigma, alpha, config.kappa, config.x_l, config.x_r);
    const SpatialGrid fine(config.x_l, config.x_r, 2 * config.M);
    const Solution sol2 = solve(problem, fine, kernels);
    const double err2 = error_series(sol2, problem).maxCoeff();
    double err1 = 0.0;
    for (const auto& cell : report.cells)
      if (cell.alpha == alpha && cell.N == N) err1 = cell.err_max;
    report.spatial_probe_rel = std::abs(err1 - err2) / err2;
    report.spatial_probe_ok = report.spatial_probe_rel <= 0.05;
  }
  return report;
}

std::string ErrorReport::to_csv() const {
  std::ostringstream out;
  out << "alpha,gamma,N,err_final,err_max,chi,ln_n,bound,bound_over_err,cu,ml_prefactor\n";
  for (const auto& c : cells) {
    out << fmt(c.alpha) << ',' << fmt(c.gamma) << ',' << c.N << ','
        << fmt(c.err_final) << ',' << fmt(c.err_max) << ',' << fmt(c.chi) << ','
        << fmt(c.ln_n) << ',' << fmt(c.bound) << ',' << fmt(c.bound_over_err)
        << ',' << fmt(c.cu) << ',' << fmt(c.ml_prefactor) << '\n';
  }
  for (const auto& f : fits) {
    out << "# fit alpha=" << fmt(f.alpha) << " order_max=" << fmt(f.fit_max.order)
        << " residual_max=" << fmt(f.fit_max.residual)
        << " reliable=" << (f.fit_max.reliable ? 1 : 0)
        << " order_final=" << fmt(f.fit_final.order) << '\n';
  }
  out << "# spatial_probe rel=" << fmt(spatial_probe_rel)
      << " ok=" << (spatial_probe_ok ? 1 : 0) << '\n';
  return out.str();
}

std::string ErrorReport::to_json() const {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config.to_json());
  j["cu"] = cu;
  for (const auto& c : cells) {
    j["cells"].push_back({{"alpha", c.alpha},
                          {"gamma", c.gamma},
                          {"N", c.N},
                          {"err_final", c.err_final},
                          {"err_max", c.err_max},
                          {"chi", c.chi},
                          {"ln_n", c.ln_n},
                          {"bound", c.bound},
                          {"bound_over_err", c.bound_over_err},
                          {"cu", c.cu},
                          {"ml_prefactor", c.ml_prefactor}});
  }
  for (const auto& f : fits) {
    j["fits"].push_back({{"alpha", f.alpha},
                         {"order_max", f.fit_max.order},
                         {"residual_max", f.fit_max.residual},
                         {"reliable_max", f.fit_max.reliable},
                         {"order_final", f.fit_final.order},
                         {"residual_final", f.fit_final.residual}});
  }
  j["spatial_probe_ok"] = spatial_probe_ok;
  j["spatial_probe_rel"] = spatial_probe_rel;
  return j.dump(2);
}

AlphaSweepReport alpha_sweep(const ExperimentConfig& config) {
  config.validate();
  AlphaSweepReport report;
  report.config = config;
  const int N = config.Ns.back();
  const SpatialGrid grid(config.x_l, config.x_r, config.M);

  std::vector<double> bounds;
  for (double alpha : config.alphas) {
    const double sigma = config.sigma_follows_alpha ? alpha : config.sigma;
    const double gamma_eff =
        config.gamma_opt ? std::max(1.0, (2.0 - alpha) / sigma) : config.gamma;
    const double cu = family_cu(config.scheme, sigma);
    const TimeMesh mesh = build_mesh(config.mesh_family, config.T, N, gamma_eff,
                                     config.jitter, config.seed);
    const KernelTable kernels = build_kernels(config.scheme, mesh, alpha);
    const Problem problem =
        manufactured_problem(sigma, alpha, config.kappa, config.x_l, config.x_r);
    const Solution sol = solve(problem, grid, kernels);
    const Eigen::VectorXd errs = error_series(sol, problem);

    AlphaSweepRow row;
    row.alpha = alpha;
    row.gamma = gamma_eff;
    row.err_final = errs(N);
    row.err_max = errs.maxCoeff();
    const double level = (config.mesh_family == MeshFamily::Jittered)
                             ? n_star(mesh, N, gamma_eff)
                             : static_cast<double>(N);
    row.chi = scheme_factors(config.scheme, {alpha, sigma, gamma_eff, level}).chi;
    row.ln_n = std::log(level);
    row.bound = theorem_bound(make_descriptor(config.scheme, alpha), mesh, grid,
                              sigma, config.kappa, cu, N);
    report.rows.push_back(row);
    bounds.push_back(row.bound);
    if (row.chi > row.ln_n) report.chi_within_log = false;
  }

  auto ratio = [](auto get, const std::vector<AlphaSweepRow>& rows) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : rows) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    return hi / lo;
  };
  report.ratio_final =
      ratio([](const AlphaSweepRow& r) { return r.err_final; }, report.rows);
  report.ratio_max =
      ratio([](const AlphaSweepRow& r) { return r.err_max; }, report.rows);
  if (bounds.size() >= 2)
    report.bound_ratio_last_pair = bounds.back() / bounds[bounds.size() - 2];
  return report;
}

std::string AlphaSweepReport::to_csv() const {
  std::ostringstream out;
  out << "alpha,gamma,err_final,err_max,chi,ln_n,bound\n";
  for (const auto& r : rows) {
    out << fmt(r.alpha) << ',' << fmt(r.gamma) << ',' << fmt(r.err_final) << ','
        << fmt(r.err_max) << ',' << fmt(r.chi) << ',' << fmt(r.ln_n) << ','
        << fmt(r.bound) << '\n';
  }
  out << "# ratio_final=" << fmt(ratio_final) << " ratio_max=" << fmt(ratio_max)
      << " bound_ratio_last_pair=" << fmt(bound_ratio_last_pair)
      << " chi_within_log=" << (chi_within_log ? 1 : 0) << '\n';
  return out.str();
}

std::string AlphaSweepReport::to_json() const {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config.to_json());
  for (const auto& r : rows) {
    j["rows"].push_back({{"alpha", r.alpha},
                         {"gamma", r.gamma},
                         {"err_final", r.err_final},
                         {"err_max", r.err_max},
                         {"chi", r.chi},
                         {"ln_n", r.ln_n},
                         {"bound", r.bound}});
  }
  j["ratio_final"] = ratio_final;
  j["ratio_max"] = ratio_max;
  j["bound_ratio_last_pair"] = bound_ratio_last_pair;
  j["chi_within_log"] = chi_within_log;
  return j.dump(2);
}

OrderFit spatial_order_probe(double alpha, double kappa, int N,
                             const std::vector<int>& Ms, double x_l, double x_r) {
  const double wave = M_PI / (x_r - x_l);
  Problem p;
  p.kappa = kappa;
  p.f = [=](double x, double t) {
    const double s = std::sin(wave * (x - x_l));
    return (caputo_power(alpha, 1.0, t) +
            (wave * wave - kappa) * (1.0 + t)) * s;
  };
  p.u0 = [=](double x) { return std::sin(wave * (x - x_l)); };
  p.exact = [=](double x, double t) {
    return (1.0 + t) * std::sin(wave * (x - x_l));
  };

  const TimeMesh mesh = uniform_mesh(1.0, N);
  const KernelTable kernels = l1_kernels(mesh, alpha);
  std::vector<double> errs;
  for (int M : Ms) {
    const SpatialGrid grid(x_l, x_r, M);
    const Solution sol = solve(p, grid, kernels);
    errs.push_back(error_series(sol, p).maxCoeff());
  }
  return fit_order(Ms, errs);
}

GronwallInput make_gronwall_set(const KernelTable& kernels, std::uint32_t seed) {
  const int N = kernels.N();
  const double theta = kernels.scheme().theta;
  Minstd rng(seed);

  GronwallInput in;
  in.v.resize(N + 1);
  in.v(0) = 0.5 + rng.next();
  for (int k = 1; k <= N; ++k) in.v(k) = in.v(k - 1) * (0.75 + 0.5 * rng.next());

  in.lambdas.resize(N);
  double wsum = 0.0;
  for (int l = 0; l < N; ++l) {
    in.lambdas(l) = 0.05 + rng.next();
    wsum += in.lambdas(l);
  }
  in.Lambda = 0.05 + 0.2 * rng.next();
  in.lambdas *= in.Lambda / wsum;

  auto v_theta = [&](int k) { return theta * in.v(k - 1) + (1.0 - theta) * in.v(k); };
  in.g.resize(N);
  for (int n = 1; n <= N; ++n) {
    const auto& A = kernels.row(n);
    double lhs = 0.0, lam = 0.0;
    for (int k = 1; k <= n; ++k) {
      lhs += A(n - k) * (in.v(k) * in.v(k) - in.v(k - 1) * in.v(k - 1));
      lam += in.lambdas(n - k) * v_theta(k) * v_theta(k);
    }
    const double needed = (lhs - lam) / v_theta(n);
    in.g(n - 1) = std::max(0.0, needed) * (1.0 + 0.25 * rng.next()) + 0.01 * rng.next();
  }
  return in;
}

GronwallInput corrupt_gronwall_set(const KernelTable& kernels, GronwallInput in,
                                   std::uint32_t seed) {
  const int N = kernels.N();
  Minstd rng(seed);
  const int n0 = N / 4 + static_cast<int>(rng.next() * (N / 2));
  // jump far above the running maximum so the quadratic growth term swamps
  // the forcing slack no matter how the original walk behaved
  in.v(std::max(1, n0)) = 30.0 * in.v.maxCoeff();
  return in;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::vector<CheckResult> run_kernel_checks(int N) {
  std::vector<CheckResult> out;
  for (const auto& spec : kernel_mesh_matrix()) {
    const TimeMesh mesh = build_mesh(spec.family, 1.0, N, spec.gamma, 0.2, 42);
    for (double alpha : alpha_matrix()) {
      for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
        const std::string tag = std::string(scheme_name(kind)) + " " + spec.name +
                                " a=" + fmt(alpha);
        const KernelTable table = build_kernels(kind, mesh, alpha);

        const A1Result a1 = check_A1(table);
        out.push_back({"A1 " + tag, a1.ok, 0.0,
                       a1.ok ? "monotone rows"
                             : "violation at row " + std::to_string(a1.n)});

        const double margin = check_A2(table);
        out.push_back({"A2 " + tag, margin >= -1e-12, margin,
                       "worst relative margin"});

        // energy-offset quantities on every row with both entries: the
        // product damping * (threshold - theta) stays inside (0, 1/A^(n)_0],
        // with damping * threshold = 1/A^(n)_0 as an algebraic identity
        bool eo_ok = true;
        double theta_min = 1.0;
        for (int n = 2; n <= N; ++n) {
          const auto q = energy_offset_quantities(table, n);
          theta_min = std::min(theta_min, q.offset_threshold);
          if (!(q.offset_threshold > 0.0 && q.offset_threshold < 0.5)) eo_ok = false;
          if (std::abs(q.damping * q.offset_threshold * table.entry(n, 0) - 1.0) >
              1e-12)
            eo_ok = false;
          // theta = 0 attains the upper endpoint exactly
          const double prod = q.damping * (q.offset_threshold - table.scheme().theta);
          if (!(prod > 0.0 &&
                prod <= (1.0 / table.entry(n, 0)) * (1.0 + 1e-12)))
            eo_ok = false;
          if (kind == SchemeKind::Alikhanov &&
              !(table.scheme().theta < q.offset_threshold))
            eo_ok = false;
        }
        out.push_back({"energy-offset " + tag, eo_ok, theta_min, "min offset threshold"});

        if (kind == SchemeKind::L1) {
          // mean-value sandwich: A_{n-k+1} < omega(t_n - t_{k-1}) < A_{n-k}
          bool mvt_ok = true;
          for (int n = 2; n <= N && mvt_ok; ++n) {
            for (int k = 2; k <= n; ++k) {
              const double w = omega(1.0 - alpha, mesh.t(n) - mesh.t(k - 1));
              if (!(table.entry(n, n - k + 1) < w && w < table.entry(n, n - k))) {
                mvt_ok = false;
                break;
              }
            }
          }
          out.push_back({"MVT " + tag, mvt_ok, 0.0, "strict sandwich"});
        }
      }
    }
  }
  return out;
}

std::vector<CheckResult> run_dcc_checks(int N, int random_sequences) {
  std::vector<CheckResult> out;
  for (const auto& spec : kernel_mesh_matrix()) {
    const TimeMesh mesh = build_mesh(spec.family, 1.0, N, spec.gamma, 0.2, 42);
    for (double alpha : alpha_matrix()) {
      for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
        const std::string tag = std::string(scheme_name(kind)) + " " + spec.name +
                                " a=" + fmt(alpha);
        const KernelTable table = build_kernels(kind, mesh, alpha);
        const DccTable dcc = build_dcc(table);

        const double resid = check_identity(dcc);
        out.push_back({"dcc-identity " + tag, resid <= 1e-10, resid,
                       "max |sum P A - 1|"});

        const double slack = check_p_bound(dcc);
        out.push_back({"p-bound " + tag, slack <= 1e-10, slack,
                       "max sum P - pi_A omega_{1+a}(t_n)"});

        Minstd rng(1234);
        int violations = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < random_sequences; ++trial) {
          const int n = 1 + static_cast<int>(rng.next() * N);
          Eigen::VectorXd nu(n);
          for (int k = 0; k < n; ++k) nu(k) = 0.01 + rng.next();
          const double lhs = weighted_sum(dcc, n, nu);
          const double rhs = summation_estimate_rhs(dcc, n, nu);
          worst = std::min(worst, rhs - lhs);
          // n = 1 attains equality for the L1 kernels; guard rounding
          if (lhs > rhs * (1.0 + 1e-12)) ++violations;
        }
        out.push_back({"summation " + tag, violations == 0, worst,
                       std::to_string(random_sequences) + " random sequences"});
      }
    }
  }
  return out;
}

std::vector<CheckResult> run_ecs_checks(int N) {
  std::vector<CheckResult> out;
  static const std::vector<MeshSpec> meshes = {
      {"uniform", MeshFamily::Uniform, 1.0},
      {"graded2", MeshFamily::Graded, 2.0},
      {"jittered2", MeshFamily::Jittered, 2.0},
  };
  for (const auto& spec : meshes) {
    const TimeMesh mesh = build_mesh(spec.family, 1.0, N, spec.gamma, 0.2, 42);
    for (double alpha : alpha_matrix()) {
      for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
        const KernelTable table = build_kernels(kind, mesh, alpha);
        const DccTable dcc = build_dcc(table);
        for (double sigma : {0.4, alpha, 1.5}) {
          const std::string tag = std::string(scheme_name(kind)) + " " + spec.name +
                                  " a=" + fmt(alpha) + " s=" + fmt(sigma);
          const double cu = family_cu(kind, sigma);
          const ConsistencyData data =
              interpolation_errors(kind, mesh, alpha, sigma, cu);
          const Eigen::VectorXd rt = measure_rt(table, sigma);

          const double ecs_margin = check_ecs(table, data, rt);
          out.push_back({"ecs " + tag, ecs_margin >= -1e-12, ecs_margin,
                         "min per-level margin"});

          const Eigen::VectorXd xi = xi_values(table, g_weighted(table, data));
          const double chain_margin = check_global_consistency(dcc, rt, xi);
          out.push_back({"chain " + tag, chain_margin >= -1e-12, chain_margin,
                         "min (1+rho)Xi - sum P|R_t|"});
        }
      }
    }
  }
  return out;
}

std::vector<CheckResult> run_gronwall_checks(int N, int sets) {
  std::vector<CheckResult> out;
  static const double alphas[4] = {0.3, 0.5, 0.7, 0.9};
  for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
    int concluded = 0, rejected = 0;
    for (int s = 0; s < sets; ++s) {
      const double alpha = alphas[s % 4];
      const TimeMesh mesh =
          (s % 2 == 0) ? uniform_mesh(1.0, N) : graded_mesh(1.0, N, 2.0);
      const KernelTable table = build_kernels(kind, mesh, alpha);
      const DccTable dcc = build_dcc(table);

      const GronwallInput good = make_gronwall_set(table, 1000 + s);
      if (check_dfgi(table, dcc, good)) ++concluded;

      const GronwallInput bad = corrupt_gronwall_set(table, good, 2000 + s);
      try {
        check_dfgi(table, dcc, bad);
      } catch (const std::invalid_argument&) {
        ++rejected;
      }
    }
    const std::string tag = scheme_name(kind);
    out.push_back({"gronwall-conclusion " + tag, concluded == sets,
                   static_cast<double>(concluded),
                   std::to_string(sets) + " admissible sets"});
    out.push_back({"gronwall-reject " + tag, rejected == sets,
                   static_cast<double>(rejected),
                   std::to_string(sets) + " corrupted sets"});
  }
  return out;
}

std::string factor_table_csv(int table) {
  const double alpha = 0.5;
  const double n = 256.0;
  // representative effective index on a concrete jittered mesh
  const TimeMesh mesh = jittered_graded_mesh(1.0, 256, 2.0, 0.2, 42);
  const double ns = n_star(mesh, 256, 2.0);

  std::ostringstream out;
  out << "scheme,mesh_family,case,formula,exponent,n,value,ln_n,ratio\n";
  for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
    for (const auto& cell : factor_table_cells(table, kind, alpha, n, ns)) {
      out << cell.scheme << ',' << cell.mesh_family << ',' << cell.case_label
          << ',' << cell.formula << ',' << fmt(cell.exponent) << ','
          << fmt(cell.n) << ',' << fmt(cell.value) << ',' << fmt(cell.ln_n)
          << ',' << fmt(cell.ratio) << '\n';
    }
  }
  return out.str();
}

void emit_factor_tables(const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir + "/table1.csv", factor_table_csv(1));
  write_file(dir + "/table2.csv", factor_table_csv(2));
}

std::string kernel_table_csv(const KernelTable& table) {
  std::ostringstream out;
  for (int n = 1; n <= table.N(); ++n) {
    out << n;
    for (int j = 0; j < n; ++j) out << ',' << fmt(table.entry(n, j));
    out << '\n';
  }
  return out.str();
}

std::string dcc_table_csv(const DccTable& table) {
  std::ostringstream out;
  for (int n = 1; n <= table.N(); ++n) {
    out << n;
    for (int j = 0; j < n; ++j) out << ',' << fmt(table.entry(n, j));
    out << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace subdiff
