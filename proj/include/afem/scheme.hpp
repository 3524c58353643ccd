#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "afem/assembly.hpp"
#include "afem/dln.hpp"
#include "afem/solver.hpp"

namespace afem {

/// Coefficients of u_t - mu Lap u + gamma Lap^2 u + nu (u.grad)u + rho u
/// + lambda |u|^2 u + grad p = f.
struct ModelParams {
  double mu = 1;
  double gamma = 1;
  double nu = 1;
  double rho = 1;
  double lambda = 1;
};

using SpaceTimeVector = std::function<Eigen::Vector2d(const Point2&, double)>;

/// Source and Dirichlet data for u and w. Empty functions mean zero.
struct ProblemData {
  SpaceTimeVector source;
  SpaceTimeVector u_boundary;
  SpaceTimeVector w_boundary;
};

/// Exact fields at one instant, used by the Stokes-type projection.
struct ExactFields {
  VectorFunction u, w;
  std::function<Eigen::Matrix2d(const Point2&)> grad_u, grad_w;  // row c = grad of component c
  ScalarFunction phi, p;
};

/// Block coefficient vectors (BlockLayout) at t_{n-1} and t_n.
struct SolutionHistory {
  Eigen::VectorXd prev;
  Eigen::VectorXd curr;
  double t_prev = 0;
  double t_curr = 0;

  bool complete() const { return prev.size() > 0 && curr.size() == prev.size(); }
};

/// Linearised block system at an iterate: J * delta = -residual.
/// Dirichlet rows/columns are already reduced to identity.
struct BlockSystem {
  Eigen::VectorXd residual;
  SparseOperator jacobian;
  std::vector<int> dirichlet;
};

/// Per-step data of the DLN system that does not depend on the Newton iterate.
class SchemeStepAssembler {
 public:
  SchemeStepAssembler(const Discretization& disc, const SolutionHistory& history, const DlnStepContext& ctx,
                      const ModelParams& params, const ProblemData& data);

  /// Dirichlet values of u_{n+1}, w_{n+1} written into a copy of x.
  Eigen::VectorXd with_boundary_values(Eigen::VectorXd x) const;

  BlockSystem assemble(const Eigen::VectorXd& iterate) const;

  double t_next() const { return t_next_; }

 private:
  const Discretization& disc_;
  DlnStepContext ctx_;
  ModelParams params_;
  double t_next_;
  // Contributions of levels n-1 and n to u_alpha, u_beta, w_beta, p_beta.
  Eigen::VectorXd u_alpha_hist_, u_beta_hist_, w_beta_hist_, p_beta_hist_;
  Eigen::VectorXd load_;    // (f(t_beta), v)
  Eigen::VectorXd target_;  // Dirichlet values in block numbering
};

/// Residual and Jacobian of the four coupled equations for
/// (u_{n+1}, w_{n+1}, phi_{n+1}, p_{n+1}) at `guess`. Dirichlet data is
/// imposed on the guess before evaluation.
BlockSystem assemble_scheme_system(const Discretization& disc, const SolutionHistory& history,
                                   const DlnStepContext& ctx, const ModelParams& params,
                                   const ProblemData& data, const Eigen::VectorXd& guess);

/// Linear system of the four-field Stokes-type projection of `exact`,
/// written at the zero iterate (solution = -J^{-1} residual). Dirichlet data
/// for S_h u and S_h w is the nodal interpolant of the exact traces.
BlockSystem assemble_stokes_projection_system(const Discretization& disc, const ExactFields& exact, double mu,
                                              double gamma);

/// Stokes-type projection matrix (before Dirichlet reduction).
SparseOperator projection_matrix(const Discretization& disc, double mu, double gamma);

/// Projection of discrete data `data` (block layout, u/w/phi/p filled);
/// Dirichlet data is taken from the boundary entries of u and w.
BlockSystem assemble_discrete_projection_system(const Discretization& disc, const Eigen::VectorXd& data, double mu,
                                                double gamma);

/// Reduces Dirichlet rows to identity and eliminates Dirichlet columns,
/// lifting (x_D - g_D) into the residual; residual rows on D become x_D - g_D.
void apply_dirichlet(SparseOperator& jacobian, Eigen::VectorXd& residual, const std::vector<int>& dofs,
                     const Eigen::VectorXd& state, const Eigen::VectorXd& target);

/// The phi and p mean-value multipliers in a form the direct solver can
/// eliminate.
std::vector<MeanConstraint> mean_constraints(const BlockLayout& layout);

/// Weak divergence norms |B u| and |B w| of a block vector.
struct DivergenceResidual {
  double u = 0;
  double w = 0;
};
DivergenceResidual divergence_residual(const Discretization& disc, const Eigen::VectorXd& x);

}  // namespace afem
