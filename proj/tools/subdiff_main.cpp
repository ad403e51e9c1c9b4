// Command-line front end: solve manufactured problems, run convergence and
// alpha-robustness sweeps, verify the kernel/DCC/consistency/Gronwall
// properties, and emit the factor tables.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subdiff/harness.hpp"

namespace {

using namespace subdiff;

struct CliOptions {
  std::string config_path;
  std::string scheme = "l1";
  std::string mesh = "uniform";
  double gamma = 1.0;
  bool gamma_opt = false;
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
};

void add_config_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (flags override)");
  cmd->add_option("--scheme", o.scheme, "l1 | alikhanov");
  cmd->add_option("--mesh", o.mesh, "uniform | graded | jittered");
  cmd->add_option("--gamma", o.gamma, "grading exponent");
  cmd->add_flag("--gamma-opt", o.gamma_opt, "use gamma = max{1,(2-alpha)/sigma}");
  cmd->add_option("--jitter", o.jitter, "step jitter in [0,0.3)");
  cmd->add_option("--seed", o.seed, "jitter seed");
  cmd->add_option("--alpha", o.alphas, "fractional order(s)");
  cmd->add_option("--sigma", o.sigma, "regularity parameter");
  cmd->add_flag("--sigma-follows-alpha", o.sigma_follows_alpha, "set sigma = alpha");
  cmd->add_option("--kappa", o.kappa, "reaction coefficient");
  cmd->add_option("--T", o.T, "final time");
  cmd->add_option("--N", o.Ns, "time level count(s)");
  cmd->add_option("--M", o.M, "spatial resolution");
  cmd->add_option("--xl", o.x_l, "left endpoint");
  cmd->add_option("--xr", o.x_r, "right endpoint");
  cmd->add_option("--out", o.out_dir, "output directory");
}

ExperimentConfig to_config(const CliOptions& o, const CLI::App* cmd) {
  ExperimentConfig c;
  if (!o.config_path.empty()) c = ExperimentConfig::from_json_file(o.config_path);
  auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
  if (o.config_path.empty() || given("--scheme"))
    c.scheme = (o.scheme == "alikhanov") ? SchemeKind::Alikhanov : SchemeKind::L1;
  if (o.config_path.empty() || given("--mesh")) {
    if (o.mesh == "uniform") c.mesh_family = MeshFamily::Uniform;
    else if (o.mesh == "graded") c.mesh_family = MeshFamily::Graded;
    else if (o.mesh == "jittered") c.mesh_family = MeshFamily::Jittered;
    else throw CLI::ValidationError("--mesh", "unknown mesh family " + o.mesh);
  }
  if (o.config_path.empty() || given("--gamma")) c.gamma = o.gamma;
  if (o.config_path.empty() || given("--gamma-opt")) c.gamma_opt = o.gamma_opt;
  if (o.config_path.empty() || given("--jitter")) c.jitter = o.jitter;
  if (o.config_path.empty() || given("--seed")) c.seed = o.seed;
  if (o.config_path.empty() || given("--alpha")) c.alphas = o.alphas;
  if (o.config_path.empty() || given("--sigma")) c.sigma = o.sigma;
  if (o.config_path.empty() || given("--sigma-follows-alpha"))
    c.sigma_follows_alpha = o.sigma_follows_alpha;
  if (o.config_path.empty() || given("--kappa")) c.kappa = o.kappa;
  if (o.config_path.empty() || given("--T")) c.T = o.T;
  if (o.config_path.empty() || given("--N")) c.Ns = o.Ns;
  if (o.config_path.empty() || given("--M")) c.M = o.M;
  if (o.config_path.empty() || given("--xl")) c.x_l = o.x_l;
  if (o.config_path.empty() || given("--xr")) c.x_r = o.x_r;
  if (o.config_path.empty() || given("--out")) c.out_dir = o.out_dir;
  c.validate();
  return c;
}

int print_results(const std::vector<CheckResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%-6s %-50s metric=%.3e  %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.metric, r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convolution-type time stepping for reaction-subdiffusion: "
               "solver, convergence harness and theory checks"};
  app.require_subcommand(1);

  CliOptions o;

  auto* cmd_solve = app.add_subcommand("solve", "solve one manufactured problem");
  add_config_flags(cmd_solve, o);
  bool dump_kernels = false, dump_dcc = false;
  cmd_solve->add_flag("--dump-kernels", dump_kernels, "write kernel rows as CSV");
  cmd_solve->add_flag("--dump-dcc", dump_dcc, "write DCC rows as CSV");

  auto* cmd_converge = app.add_subcommand("converge", "convergence-order study");
  add_config_flags(cmd_converge, o);

  auto* cmd_sweep = app.add_subcommand("sweep-alpha", "fixed-N robustness sweep");
  add_config_flags(cmd_sweep, o);

  auto* cmd_check = app.add_subcommand("check", "verify theory properties");
  std::string what = "kernels";
  int check_N = 0;  // 0 keeps each suite's default size
  int check_sets = 100;
  cmd_check->add_option("what", what, "kernels | dcc | ecs | gronwall")->required();
  cmd_check->add_option("--N", check_N, "time levels for the check matrix");
  cmd_check->add_option("--sets", check_sets, "sequence sets per scheme (gronwall)");

  auto* cmd_factors = app.add_subcommand("factors", "emit factor tables as CSV");
  std::string factors_out = ".";
  cmd_factors->add_option("--out", factors_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_solve->parsed()) {
      const ExperimentConfig c = to_config(o, cmd_solve);
      std::filesystem::create_directories(c.out_dir);
      const double alpha = c.alphas.front();
      const double sigma = c.sigma_follows_alpha ? alpha : c.sigma;
      const double gamma_eff =
          c.gamma_opt ? std::max(1.0, (2.0 - alpha) / sigma) : c.gamma;
      const TimeMesh mesh =
          build_mesh(c.mesh_family, c.T, c.Ns.front(), gamma_eff, c.jitter, c.seed);
      const KernelTable kernels = c.scheme == SchemeKind::L1
                                      ? l1_kernels(mesh, alpha)
                                      : alikhanov_kernels(mesh, alpha);
      const Problem problem = manufactured_problem(sigma, alpha, c.kappa, c.x_l, c.x_r);
      const SpatialGrid grid(c.x_l, c.x_r, c.M);
      const Solution sol = solve(problem, grid, kernels);
      write_file(c.out_dir + "/solution.csv", sol.to_csv());
      write_file(c.out_dir + "/mesh.json", mesh.to_json());
      if (dump_kernels) write_file(c.out_dir + "/kernels.csv", kernel_table_csv(kernels));
      if (dump_dcc) write_file(c.out_dir + "/dcc.csv", dcc_table_csv(build_dcc(kernels)));
      std::printf("final-time L2 error: %.6e\n", sol.error_at(problem, mesh.N()));
      std::printf("wrote %s/solution.csv\n", c.out_dir.c_str());
      return 0;
    }
    if (cmd_converge->parsed()) {
      const ExperimentConfig c = to_config(o, cmd_converge);
      std::filesystem::create_directories(c.out_dir);
      const ErrorReport report = run_convergence(c);
      write_file(c.out_dir + "/convergence.csv", report.to_csv());
      write_file(c.out_dir + "/convergence.json", report.to_json());
      for (const auto& f : report.fits)
        std::printf("alpha=%.4g  order(max)=%.3f residual=%.3f%s  order(final)=%.3f\n",
                    f.alpha, f.fit_max.order, f.fit_max.residual,
                    f.fit_max.reliable ? "" : " [unreliable]", f.fit_final.order);
      std::printf("spatial probe: rel=%.2f%% %s\n", 100.0 * report.spatial_probe_rel,
                  report.spatial_probe_ok ? "ok" : "CONTAMINATED");
      return report.spatial_probe_ok ? 0 : 1;
    }
    if (cmd_sweep->parsed()) {
      const ExperimentConfig c = to_config(o, cmd_sweep);
      std::filesystem::create_directories(c.out_dir);
      const AlphaSweepReport report = alpha_sweep(c);
      write_file(c.out_dir + "/sweep.csv", report.to_csv());
      write_file(c.out_dir + "/sweep.json", report.to_json());
      for (const auto& r : report.rows)
        std::printf("alpha=%.4g err_final=%.4e err_max=%.4e chi=%.4f bound=%.4e\n",
                    r.alpha, r.err_final, r.err_max, r.chi, r.bound);
      std::printf("ratio_final=%.2f ratio_max=%.2f bound_ratio_last_pair=%.3f\n",
                  report.ratio_final, report.ratio_max, report.bound_ratio_last_pair);
      return 0;
    }
    if (cmd_check->parsed()) {
      if (what == "kernels")
        return print_results(run_kernel_checks(check_N > 0 ? check_N : 256));
      if (what == "dcc")
        return print_results(run_dcc_checks(check_N > 0 ? check_N : 256));
      if (what == "ecs")
        return print_results(run_ecs_checks(check_N > 0 ? check_N : 128));
      if (what == "gronwall")
        return print_results(run_gronwall_checks(check_N > 0 ? check_N : 48, check_sets));
      std::fprintf(stderr, "unknown check target: %s\n", what.c_str());
      return 2;
    }
    if (cmd_factors->parsed()) {
      emit_factor_tables(factors_out);
      std::printf("wrote %s/table1.csv and %s/table2.csv\n", factors_out.c_str(),
                  factors_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
