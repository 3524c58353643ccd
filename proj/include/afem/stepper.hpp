#pragma once

#include <vector>

#include <Eigen/Core>

#include "afem/dln.hpp"
#include "afem/scheme.hpp"
#include "afem/solver.hpp"

namespace afem {

struct StepDiagnostics {
  int step = 0;        // index of the level just computed
  double time = 0;     // t_{n+1}
  double k = 0;        // t_{n+1} - t_n
  double theta = 0;
  double g_energy = 0;  // (1+theta)/4 |u_{n+1}|^2 + (1-theta)/4 |u_n|^2
  double kinetic = 0;   // |u_{n+1}|^2
  DissipationRates rates;
  int newton_iterations = 0;
  std::vector<double> residual_norms;
  DivergenceResidual divergence;
  StabilityCondition stability;
};

struct StepOutcome {
  SolutionHistory history;
  StepDiagnostics diagnostics;
};

/// Drives the DLN scheme on one discretisation: initial projection, the
/// one-step bootstrap, and the two-step DLN advance.
class DlnStepper {
 public:
  DlnStepper(const Discretization& disc, ModelParams params, ProblemData data, NewtonConfig newton = {});

  const Discretization& discretization() const { return disc_; }
  const ModelParams& params() const { return params_; }
  const NewtonConfig& newton_config() const { return newton_; }

  /// Linear extrapolation from (t_{n-1}, t_n) as the Newton guess; when off,
  /// the guess is level n.
  void set_predictor(bool on) { predictor_ = on; }

  /// Four-field Stokes-type projection of exact fields.
  Eigen::VectorXd project(const ExactFields& exact) const;

  /// Projection of a nodal velocity: w, phi from the w-definition and
  /// w-divergence rows with u fixed, then the projection system applied to
  /// the resulting discrete fields.
  Eigen::VectorXd project_velocity(const Field& u0) const;

  /// Level 1 from level 0 by one implicit-midpoint step of the four-field
  /// system.
  StepOutcome bootstrap_first_step(const Eigen::VectorXd& level0, double t0, double k0);

  /// Level n+1 by one DLN step of size k_next.
  StepOutcome advance(const SolutionHistory& history, double k_next, double theta);

 private:
  StepOutcome solve_step(const SolutionHistory& history, const DlnStepContext& ctx, const Eigen::VectorXd& guess);

  const Discretization& disc_;
  ModelParams params_;
  ProblemData data_;
  NewtonConfig newton_;
  SparseDirectSolver solver_;
  bool predictor_ = true;
  int levels_ = 0;
};

}  // namespace afem
