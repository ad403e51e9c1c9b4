#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace subdiff {

enum class MeshFamily { Uniform, Graded, Jittered, General };

std::string to_string(MeshFamily f);

/// Nonuniform time grid 0 = t_0 < t_1 < ... < t_N = T. Immutable after
/// construction; steps and ratios are cached at build time.
class TimeMesh {
 public:
  /// Build from raw points (general family). Validates monotonicity.
  TimeMesh(Eigen::VectorXd points, MeshFamily family = MeshFamily::General,
           double gamma = 1.0);

  double T() const { return points_(points_.size() - 1); }
  int N() const { return static_cast<int>(points_.size()) - 1; }
  const Eigen::VectorXd& points() const { return points_; }
  double t(int k) const { return points_(k); }

  /// Step sizes tau_k = t_k - t_{k-1}, k = 1..N (index k-1 in the vector).
  const Eigen::VectorXd& steps() const { return steps_; }
  double tau(int k) const { return steps_(k - 1); }
  double max_step() const { return steps_.maxCoeff(); }

  /// Step ratios rho_k = tau_k / tau_{k+1}, k = 1..N-1. Empty for N = 1.
  const Eigen::VectorXd& ratios() const { return ratios_; }
  double max_ratio() const { return ratios_.size() ? ratios_.maxCoeff() : 0.0; }

  MeshFamily family() const { return family_; }
  double grading() const { return gamma_; }

  /// Offset time level t_{n-theta} = theta t_{n-1} + (1-theta) t_n.
  double t_offset(int n, double theta) const {
    return theta * points_(n - 1) + (1.0 - theta) * points_(n);
  }

  std::string to_json() const;
  static TimeMesh from_json(const std::string& text);

 private:
  Eigen::VectorXd points_;
  Eigen::VectorXd steps_;
  Eigen::VectorXd ratios_;
  MeshFamily family_;
  double gamma_;
};

/// t_k = k T / N.
TimeMesh uniform_mesh(double T, int N);

/// t_k = T (k/N)^gamma, gamma >= 1. Coincides with uniform_mesh at gamma = 1.
TimeMesh graded_mesh(double T, int N, double gamma);

/// Graded mesh whose steps are each scaled by a deterministic pseudo-random
/// factor in [1-jitter, 1+jitter] (MINSTD generator), then renormalized so
/// that t_N = T. jitter = 0 returns the graded mesh unchanged.
TimeMesh jittered_graded_mesh(double T, int N, double gamma, double jitter,
                              std::uint32_t seed);

struct A3Result {
  bool ok = true;
  int first_bad_index = -1;  // k with rho_k > cap, 1-based; -1 when ok
  double max_ratio = 0.0;
};

/// Step-ratio cap check: rho_k <= rho_cap for 1 <= k <= N-1.
A3Result check_A3(const TimeMesh& mesh, double rho_cap);

struct MeshReport {
  double max_ratio = 0.0;
  double c1 = 0.0;       // largest C_1 with tau_1 >= C_1 tau^gamma
  double c_gamma = 0.0;  // smallest C_gamma for the remaining three bounds
  bool satisfied = false;
};

/// Fits the smallest constants that make the four grading-class inequalities
///   tau_1 >= C_1 tau^gamma,
///   tau_k <= C_gamma tau min{1, t_k^{1-1/gamma}},
///   t_k <= C_gamma t_{k-1}   (k >= 2),
///   tau_k <= C_gamma tau_{k-1} (k >= 2)
/// hold, and accepts the mesh when C_gamma stays below `threshold`.
MeshReport check_M1(const TimeMesh& mesh, double gamma, double threshold = 10.0);

/// n* = (t_n / tau_1)^{1/gamma}, the effective level index on general meshes.
double n_star(const TimeMesh& mesh, int n, double gamma);

/// MINSTD linear congruential generator (modulus 2^31-1, multiplier 48271),
/// mapped to [0,1). Exposed so tests and mesh construction stay reproducible
/// across implementations.
class Minstd {
 public:
  explicit Minstd(std::uint32_t seed);
  double next();

 private:
  std::uint64_t state_;
};

}  // namespace subdiff
