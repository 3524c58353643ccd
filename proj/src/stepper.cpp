#include "afem/stepper.hpp"

#include <stdexcept>

namespace afem {

DlnStepper::DlnStepper(const Discretization& disc, ModelParams params, ProblemData data, NewtonConfig newton)
    : disc_(disc),
      params_(params),
      data_(std::move(data)),
      newton_(newton),
      solver_(mean_constraints(disc.layout()), LuStrategy::unsymmetric) {
  newton_.validate();
}

namespace {

Eigen::VectorXd solve_reduced(const Discretization& disc, const BlockSystem& sys) {
  return sparse_direct_solve(sys.jacobian, -sys.residual, mean_constraints(disc.layout()), LuStrategy::symmetric);
}

}  // namespace

Eigen::VectorXd DlnStepper::project(const ExactFields& exact) const {
  return solve_reduced(disc_, assemble_stokes_projection_system(disc_, exact, params_.mu, params_.gamma));
}

Eigen::VectorXd DlnStepper::project_velocity(const Field& u0) const {
  const BlockLayout& L = disc_.layout();
  if (u0.coeffs.size() != L.vel) throw std::invalid_argument("initial velocity is not in the velocity space");

  // w and phi from the w-definition rows with u held at u0.
  Eigen::VectorXd data = Eigen::VectorXd::Zero(L.size());
  data.segment(L.u(), L.vel) = u0.coeffs;
  std::vector<int> fixed;
  fixed.reserve(static_cast<std::size_t>(L.vel + L.pres + 2));
  for (int i = 0; i < L.vel; ++i) fixed.push_back(L.u() + i);
  for (int i = 0; i < L.pres; ++i) fixed.push_back(L.p() + i);
  fixed.push_back(L.xi_p());
  SparseOperator J = projection_matrix(disc_, params_.mu, params_.gamma);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(L.size());
  apply_dirichlet(J, r, fixed, Eigen::VectorXd::Zero(L.size()), data);
  data = sparse_direct_solve(J, -r, mean_constraints(L), LuStrategy::symmetric);

  return solve_reduced(disc_, assemble_discrete_projection_system(disc_, data, params_.mu, params_.gamma));
}

StepOutcome DlnStepper::solve_step(const SolutionHistory& history, const DlnStepContext& ctx,
                                   const Eigen::VectorXd& guess) {
  const SchemeStepAssembler assembler(disc_, history, ctx, params_, data_);
  const SystemBuilder builder = [&](const Eigen::VectorXd& x) {
    BlockSystem sys = assembler.assemble(x);
    return LinearizedSystem{std::move(sys.residual), std::move(sys.jacobian)};
  };
  NewtonResult res = newton_solve(builder, newton_, assembler.with_boundary_values(guess), &solver_);

  const BlockLayout& L = disc_.layout();
  const Eigen::VectorXd& next = res.solution;
  const SparseOperator& M = disc_.velocity_mass();
  const SparseOperator& K = disc_.velocity_stiffness();
  const Eigen::VectorXd prev = history.prev.size() == L.size() ? history.prev : history.curr;
  auto combine = [&](const std::array<double, 3>& c, int off) -> Eigen::VectorXd {
    return c[0] * prev.segment(off, L.vel) + c[1] * history.curr.segment(off, L.vel) +
           c[2] * next.segment(off, L.vel);
  };
  const Eigen::VectorXd ua = combine(ctx.alpha, L.u()), wa = combine(ctx.alpha, L.w());
  const Eigen::VectorXd ub = combine(ctx.beta, L.u()), wb = combine(ctx.beta, L.w());

  StepOutcome out;
  StepDiagnostics& dg = out.diagnostics;
  dg.step = ++levels_;
  dg.time = assembler.t_next();
  dg.k = ctx.k_curr;
  dg.theta = ctx.theta;
  const auto un = next.segment(L.u(), L.vel);
  const auto uc = history.curr.segment(L.u(), L.vel);
  dg.g_energy = g_norm_squared(un, uc, ctx.theta, M);
  dg.kinetic = un.dot(M * un);
  dg.rates.numerical_u = ua.dot(M * ua) / ctx.k_hat;
  dg.rates.numerical_w = wa.dot(M * wa) / ctx.k_hat;
  dg.rates.viscous_u = params_.mu * ub.dot(K * ub);
  dg.rates.stability_w = params_.gamma * wb.dot(K * wb);
  dg.newton_iterations = res.iterations;
  dg.residual_norms = std::move(res.residual_norms);
  dg.divergence = divergence_residual(disc_, next);
  dg.stability = check_stability_step_condition(ctx, params_.rho);

  out.history.prev = history.curr;
  out.history.t_prev = history.t_curr;
  out.history.curr = std::move(res.solution);
  out.history.t_curr = dg.time;
  return out;
}

StepOutcome DlnStepper::bootstrap_first_step(const Eigen::VectorXd& level0, double t0, double k0) {
  if (level0.size() != disc_.layout().size()) throw std::invalid_argument("level 0 does not match the layout");
  levels_ = 0;
  SolutionHistory h;
  h.prev = level0;
  h.curr = level0;
  h.t_prev = t0;
  h.t_curr = t0;
  return solve_step(h, midpoint_step(k0), level0);
}

StepOutcome DlnStepper::advance(const SolutionHistory& history, double k_next, double theta) {
  if (!history.complete()) throw std::invalid_argument("DLN step needs two history levels");
  const double k_prev = history.t_curr - history.t_prev;
  const DlnStepContext ctx = dln_coefficients(theta, k_prev, k_next);
  Eigen::VectorXd guess = history.curr;
  if (predictor_) guess += (k_next / k_prev) * (history.curr - history.prev);
  return solve_step(history, ctx, guess);
}

}  // namespace afem
