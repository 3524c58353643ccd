#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "afem/error_norms.hpp"
#include "afem/manufactured.hpp"
#include "afem/stepper.hpp"

namespace afem {

/// Uniform numbers in [-1, 1] from a 64-bit Mersenne twister, bit-identical
/// across platforms for a given seed.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

/// Random nodal velocity with values in [-1, 1] at interior nodes and zero
/// on the boundary.
Field random_velocity(const Discretization& disc, std::uint64_t seed);

/// Projection errors of ms on each n x n mesh (n increasing).
ErrorReport run_projection_convergence(const std::vector<int>& n_list, double mu, double gamma,
                                       const ManufacturedSolution& ms, int workers = 1);

struct ManufacturedRun {
  Eigen::VectorXd solution;
  double t_final = 0;
  FieldErrors errors;
  std::vector<StepDiagnostics> steps;
};

/// Constant steps dt on [0, T]: S_h of the exact fields at t=0, one
/// midpoint step, then DLN(theta) steps.
ManufacturedRun run_manufactured(const Discretization& disc, const ManufacturedSolution& ms,
                                 const ModelParams& params, double theta, double dt, double T,
                                 const NewtonConfig& newton = {});

ErrorReport run_scheme_convergence_time(int n, const std::vector<double>& dt_list, double theta, double T,
                                        const ModelParams& params, const ManufacturedSolution& ms,
                                        std::vector<ManufacturedRun>* runs = nullptr, int workers = 1);

ErrorReport run_scheme_convergence_space(const std::vector<int>& n_list, double dt, double theta, double T,
                                         const ModelParams& params, const ManufacturedSolution& ms,
                                         std::vector<ManufacturedRun>* runs = nullptr, int workers = 1);

/// Active-fluid parameters of the self-organization runs; gamma = mu^3.
ModelParams active_fluid_params(double mu = 0.045);

struct Snapshot {
  double time = 0;
  Eigen::VectorXd state;
};

using StepObserver = std::function<void(const StepDiagnostics&, const SolutionHistory&)>;

struct SelfOrganizationConfig {
  int n = 64;
  double dt = 0.01;
  double T = 1;
  double theta = 0.3;
  std::uint64_t seed = 1;
  ModelParams params = active_fluid_params();
  std::vector<double> snapshot_times;
  NewtonConfig newton;
};

struct SelfOrganizationResult {
  Eigen::VectorXd initial;  // random nodal velocity coefficients
  Eigen::VectorXd level0;   // projected initial state
  double initial_kinetic = 0;
  std::vector<StepDiagnostics> steps;
  std::vector<Snapshot> snapshots;  // level 0 first when t=0 is requested
};

/// f = 0, zero boundary data, random initial velocity, constant steps.
/// Newton failures are rethrown with the step index.
SelfOrganizationResult run_self_organization(const SelfOrganizationConfig& cfg, const StepObserver& observer = {});

struct AdaptiveConfig {
  int n = 64;
  double T = 1;
  double theta = 0.3;
  StepBounds bounds;
  double delta = 2;
  double constant_dt = 1e-4;
  std::uint64_t seed = 1;
  ModelParams base = active_fluid_params();
  NewtonConfig newton;
  int max_steps = 0;  // stop early after this many steps; 0 = no limit
};

struct AdaptiveRun {
  double re = 0;
  int adaptive_steps = 0;
  int constant_steps = 0;  // T / constant_dt
  bool completed = false;  // reached T
  std::vector<StepDiagnostics> steps;
};

/// Minimum-dissipation controller on [0, T] starting from k_min with
/// mu = 1/re; the other coefficients come from cfg.base.
AdaptiveRun run_adaptive(const AdaptiveConfig& cfg, double re, const StepObserver& observer = {});

std::vector<AdaptiveRun> run_adaptive_comparison(const AdaptiveConfig& cfg, const std::vector<double>& re_list);

}  // namespace afem
