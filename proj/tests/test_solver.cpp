#include <doctest.h>

#include <cmath>
#include <sstream>

#include "subdiff/harness.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/special_functions.hpp"

using namespace subdiff;

TEST_CASE("discrete_l2_norm") {
  const SpatialGrid grid(0.0, 1.0, 10);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(11);
  CHECK(discrete_l2_norm(grid, zero) == 0.0);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(11);
  ones(0) = ones(10) = 0.0;
  CHECK(discrete_l2_norm(grid, ones) == doctest::Approx(std::sqrt(0.9)).epsilon(1e-14));
  CHECK(discrete_l2_norm(grid, 2.0 * ones) ==
        doctest::Approx(2.0 * std::sqrt(0.9)).epsilon(1e-14));
}

TEST_CASE("thomas_solve") {
  // identity
  Eigen::VectorXd d = Eigen::VectorXd::Ones(5);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd rhs(5);
  rhs << 1, 2, 3, 4, 5;
  CHECK((thomas_solve(off, d, off, rhs) - rhs).norm() == doctest::Approx(0.0));

  // symmetric 2x2
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(2, 2.0);
  Eigen::VectorXd o2 = Eigen::VectorXd::Constant(1, -1.0);
  Eigen::VectorXd r2 = Eigen::VectorXd::Ones(2);
  const Eigen::VectorXd x2 = thomas_solve(o2, d2, o2, r2);
  CHECK(x2(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x2(1) == doctest::Approx(1.0).epsilon(1e-14));

  // random diagonally dominant 50x50, residual by direct multiplication
  Minstd rng(5);
  const int n = 50;
  Eigen::VectorXd lower(n - 1), upper(n - 1), diag(n), b(n);
  for (int i = 0; i < n - 1; ++i) {
    lower(i) = rng.next() - 0.5;
    upper(i) = rng.next() - 0.5;
  }
  for (int i = 0; i < n; ++i) {
    diag(i) = 2.5 + rng.next();
    b(i) = rng.next() * 4.0 - 2.0;
  }
  const Eigen::VectorXd x = thomas_solve(lower, diag, upper, b);
  Eigen::VectorXd res = diag.cwiseProduct(x) - b;
  for (int i = 0; i < n - 1; ++i) {
    res(i) += upper(i) * x(i + 1);
    res(i + 1) += lower(i) * x(i);
  }
  CHECK(res.norm() <= 1e-12 * b.norm());

  Eigen::VectorXd zero_diag = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd o1 = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(thomas_solve(o1, zero_diag, o1, Eigen::VectorXd::Ones(2)),
                  std::runtime_error);
}

TEST_CASE("zero data gives the zero solution") {
  const TimeMesh mesh = graded_mesh(1.0, 8, 2.0);
  const KernelTable kernels = l1_kernels(mesh, 0.5);
  Problem p;
  p.kappa = 0.7;
  p.f = [](double, double) { return 0.0; };
  p.u0 = [](double) { return 0.0; };
  const Solution sol = solve(p, SpatialGrid(0.0, 1.0, 16), kernels);
  CHECK(sol.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary rows stay exactly zero") {
  const TimeMesh mesh = uniform_mesh(1.0, 6);
  const KernelTable kernels = alikhanov_kernels(mesh, 0.6);
  const Problem p = manufactured_problem(0.5, 0.6, 1.0, 0.0, 1.0);
  const Solution sol = solve(p, SpatialGrid(0.0, 1.0, 12), kernels);
  for (int n = 0; n <= 6; ++n) {
    CHECK(sol.values(n, 0) == 0.0);
    CHECK(sol.values(n, 12) == 0.0);
  }
  CHECK(sol.values(0, 3) == doctest::Approx(p.u0(0.25)).epsilon(1e-15));
}

TEST_CASE("L1 is temporally exact for linear-in-time solutions") {
  // forcing built from the DISCRETE Laplacian eigenvalue makes the sampled
  // solution an exact fixed point of the scheme, so the computed solution
  // matches it to rounding: the time discretization contributes nothing
  const int M = 32;
  const SpatialGrid grid(0.0, 1.0, M);
  const double h = grid.h();
  const double lam = 4.0 / (h * h) * std::pow(std::sin(M_PI * h / 2.0), 2);
  const double kappa = 0.25;
  Problem p;
  p.kappa = kappa;
  p.f = [&](double x, double t) {
    return (caputo_power(0.5, 1.0, t) + (lam - kappa) * (1.0 + t)) *
           std::sin(M_PI * x);
  };
  p.u0 = [](double x) { return std::sin(M_PI * x); };
  p.exact = [](double x, double t) { return (1.0 + t) * std::sin(M_PI * x); };

  for (const TimeMesh& mesh : {uniform_mesh(1.0, 16), graded_mesh(1.0, 16, 2.0)}) {
    const Solution sol = solve(p, grid, l1_kernels(mesh, 0.5));
    double worst = 0.0;
    for (int n = 0; n <= 16; ++n) worst = std::max(worst, sol.error_at(p, n));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("spatial error decays at second order") {
  const OrderFit fit = spatial_order_probe(0.5, 1.0, 32, {8, 16, 32, 64}, 0.0, 1.0);
  CHECK(fit.order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("discrete positivity smoke test") {
  // kappa <= 0, f >= 0, u0 >= 0 keeps the solution nonnegative
  const TimeMesh mesh = graded_mesh(1.0, 12, 2.0);
  for (SchemeKind kind : {SchemeKind::L1, SchemeKind::Alikhanov}) {
    const KernelTable kernels =
        kind == SchemeKind::L1 ? l1_kernels(mesh, 0.5) : alikhanov_kernels(mesh, 0.5);
    Problem p;
    p.kappa = -1.0;
    p.f = [](double x, double t) { return x * (1.0 - x) * (1.0 + t); };
    p.u0 = [](double x) { return std::sin(M_PI * x); };
    const Solution sol = solve(p, SpatialGrid(0.0, 1.0, 24), kernels);
    CHECK(sol.values.minCoeff() >= -1e-10);
  }
}

TEST_CASE("determinism: identical inputs give identical solutions") {
  const TimeMesh mesh = jittered_graded_mesh(1.0, 10, 2.0, 0.2, 42);
  const KernelTable kernels = l1_kernels(mesh, 0.4);
  const Problem p = manufactured_problem(0.6, 0.4, 0.3, 0.0, 1.0);
  const Solution a = solve(p, SpatialGrid(0.0, 1.0, 20), kernels);
  const Solution b = solve(p, SpatialGrid(0.0, 1.0, 20), kernels);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manufactured convergence sanity at one configuration") {
  // L1 on the optimal graded mesh, sigma = alpha = 0.5: the error at the
  // final level drops when N quadruples
  const Problem p = manufactured_problem(0.5, 0.5, 0.0, 0.0, 1.0);
  const SpatialGrid grid(0.0, 1.0, 256);
  double coarse = 0.0, fine = 0.0;
  {
    const Solution sol = solve(p, grid, l1_kernels(graded_mesh(1.0, 16, 3.0), 0.5));
    Eigen::VectorXd errs(17);
    for (int n = 0; n <= 16; ++n) errs(n) = sol.error_at(p, n);
    coarse = errs.maxCoeff();
  }
  {
    const Solution sol = solve(p, grid, l1_kernels(graded_mesh(1.0, 64, 3.0), 0.5));
    Eigen::VectorXd errs(65);
    for (int n = 0; n <= 64; ++n) errs(n) = sol.error_at(p, n);
    fine = errs.maxCoeff();
  }
  CHECK(fine < 0.3 * coarse);  // order 1.5 would give a factor 8
}

TEST_CASE("solution csv shape and round trip") {
  const TimeMesh mesh = graded_mesh(1.0, 3, 2.0);
  const KernelTable kernels = l1_kernels(mesh, 0.5);
  const Problem p = manufactured_problem(0.5, 0.5, 0.0, 0.0, 1.0);
  const Solution sol = solve(p, SpatialGrid(0.0, 1.0, 5), kernels);
  std::istringstream lines(sol.to_csv());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (count == 0) CHECK(line.rfind("# scheme=l1", 0) == 0);
    ++count;
  }
  CHECK(count == 1 + 4);  // header plus one row per time level

  const Solution back = Solution::from_csv(sol.to_csv());
  CHECK(back.mesh.N() == 3);
  CHECK(back.grid.M == 5);
  CHECK(back.scheme.kind == SchemeKind::L1);
  CHECK(back.mesh.family() == MeshFamily::Graded);
  CHECK((back.values - sol.values).cwiseAbs().maxCoeff() == 0.0);
  for (int n = 0; n <= 3; ++n) CHECK(back.mesh.t(n) == sol.mesh.t(n));
}

TEST_CASE("max_step_restriction") {
  const auto l1 = SchemeDescriptor::l1(0.5);
  CHECK(std::isinf(max_step_restriction(l1, 1.0, -2.0)));
  CHECK(std::isinf(max_step_restriction(l1, 1.0, 0.0)));
  const double cap = max_step_restriction(l1, 1.0, 1.0);
  CHECK(cap > 0.0);
  CHECK(std::isfinite(cap));
}
