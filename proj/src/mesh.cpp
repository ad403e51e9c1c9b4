#include "subdiff/mesh.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace subdiff {

std::string to_string(MeshFamily f) {
  switch (f) {
    case MeshFamily::Uniform: return "uniform";
    case MeshFamily::Graded: return "graded";
    case MeshFamily::Jittered: return "jittered";
    case MeshFamily::General: return "general";
  }
  return "general";
}

namespace {
MeshFamily family_from_string(const std::string& s) {
  if (s == "uniform") return MeshFamily::Uniform;
  if (s == "graded") return MeshFamily::Graded;
  if (s == "jittered") return MeshFamily::Jittered;
  if (s == "general") return MeshFamily::General;
  throw std::invalid_argument("unknown mesh family: " + s);
}
}  // namespace

TimeMesh::TimeMesh(Eigen::VectorXd points, MeshFamily family, double gamma)
    : points_(std::move(points)), family_(family), gamma_(gamma) {
  const auto n = points_.size();
  if (n < 2) throw std::invalid_argument("TimeMesh: need at least two points");
  if (points_(0) != 0.0) throw std::invalid_argument("TimeMesh: t_0 must be 0");
  steps_.resize(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    steps_(k - 1) = points_(k) - points_(k - 1);
    if (!(steps_(k - 1) > 0.0))
      throw std::invalid_argument("TimeMesh: points must be strictly increasing");
  }
  ratios_.resize(n - 2);
  for (Eigen::Index k = 0; k + 1 < n - 1; ++k) ratios_(k) = steps_(k) / steps_(k + 1);
}

std::string TimeMesh::to_json() const {
  nlohmann::json j;
  j["T"] = T();
  j["points"] = std::vector<double>(points_.data(), points_.data() + points_.size());
  j["family"] = to_string(family_);
  if (family_ == MeshFamily::Graded || family_ == MeshFamily::Jittered)
    j["gamma"] = gamma_;
  return j.dump();
}

TimeMesh TimeMesh::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto pts = j.at("points").get<std::vector<double>>();
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(pts.data(), pts.size());
  const auto fam = family_from_string(j.at("family").get<std::string>());
  const double g = j.value("gamma", 1.0);
  TimeMesh mesh(std::move(v), fam, g);
  const double T = j.at("T").get<double>();
  if (std::abs(mesh.T() - T) > 1e-12 * std::max(1.0, T))
    throw std::invalid_argument("TimeMesh::from_json: T does not match points");
  return mesh;
}

TimeMesh uniform_mesh(double T, int N) {
  if (!(T > 0.0)) throw std::domain_error("uniform_mesh: T must be positive");
  if (N < 1) throw std::domain_error("uniform_mesh: N must be >= 1");
  Eigen::VectorXd p(N + 1);
  for (int k = 0; k <= N; ++k) p(k) = T * k / N;
  p(N) = T;
  return TimeMesh(std::move(p), MeshFamily::Uniform, 1.0);
}

TimeMesh graded_mesh(double T, int N, double gamma) {
  if (!(T > 0.0)) throw std::domain_error("graded_mesh: T must be positive");
  if (N < 1) throw std::domain_error("graded_mesh: N must be >= 1");
  if (!(gamma >= 1.0)) throw std::domain_error("graded_mesh: gamma must be >= 1");
  Eigen::VectorXd p(N + 1);
  for (int k = 0; k <= N; ++k)
    p(k) = T * std::pow(static_cast<double>(k) / N, gamma);
  p(N) = T;
  const auto fam = (gamma == 1.0) ? MeshFamily::Uniform : MeshFamily::Graded;
  return TimeMesh(std::move(p), fam, gamma);
}

Minstd::Minstd(std::uint32_t seed) : state_(seed % 2147483647u) {
  if (state_ == 0) state_ = 1;
}

double Minstd::next() {
  state_ = (state_ * 48271u) % 2147483647u;
  return static_cast<double>(state_) / 2147483647.0;
}

TimeMesh jittered_graded_mesh(double T, int N, double gamma, double jitter,
                              std::uint32_t seed) {
  if (!(jitter >= 0.0 && jitter < 0.3))
    throw std::domain_error("jittered_graded_mesh: jitter must lie in [0, 0.3)");
  TimeMesh base = graded_mesh(T, N, gamma);
  if (jitter == 0.0) return base;

  Minstd rng(seed);
  Eigen::VectorXd steps = base.steps();
  for (int k = 0; k < N; ++k)
    steps(k) *= 1.0 - jitter + 2.0 * jitter * rng.next();
  steps *= T / steps.sum();

  Eigen::VectorXd p(N + 1);
  p(0) = 0.0;
  for (int k = 1; k <= N; ++k) p(k) = p(k - 1) + steps(k - 1);
  p(N) = T;
  TimeMesh mesh(std::move(p), MeshFamily::Jittered, gamma);
  if (N >= 2) {
    const MeshReport rep = check_M1(mesh, gamma);
    if (!rep.satisfied)
      throw std::domain_error(
          "jittered_graded_mesh: perturbed mesh leaves the grading class "
          "(fitted C_gamma = " + std::to_string(rep.c_gamma) + ")");
  }
  return mesh;
}

A3Result check_A3(const TimeMesh& mesh, double rho_cap) {
  A3Result r;
  r.max_ratio = mesh.max_ratio();
  const auto& rho = mesh.ratios();
  for (Eigen::Index k = 0; k < rho.size(); ++k) {
    if (rho(k) > rho_cap) {
      r.ok = false;
      r.first_bad_index = static_cast<int>(k) + 1;
      return r;
    }
  }
  return r;
}

MeshReport check_M1(const TimeMesh& mesh, double gamma, double threshold) {
  if (mesh.N() < 2) throw std::domain_error("check_M1: need N >= 2");
  if (!(gamma >= 1.0)) throw std::domain_error("check_M1: gamma must be >= 1");
  MeshReport rep;
  rep.max_ratio = mesh.max_ratio();
  const int N = mesh.N();
  const double tau = mesh.max_step();

  rep.c1 = mesh.tau(1) / std::pow(tau, gamma);

  double cg = 0.0;
  for (int k = 1; k <= N; ++k) {
    const double cap = tau * std::min(1.0, std::pow(mesh.t(k), 1.0 - 1.0 / gamma));
    cg = std::max(cg, mesh.tau(k) / cap);
  }
  for (int k = 2; k <= N; ++k) {
    cg = std::max(cg, mesh.t(k) / mesh.t(k - 1));
    cg = std::max(cg, mesh.tau(k) / mesh.tau(k - 1));
  }
  rep.c_gamma = cg;
  rep.satisfied = cg <= threshold;
  return rep;
}

double n_star(const TimeMesh& mesh, int n, double gamma) {
  if (n < 1 || n > mesh.N()) throw std::out_of_range("n_star: level out of range");
  return std::pow(mesh.t(n) / mesh.tau(1), 1.0 / gamma);
}

}  // namespace subdiff
