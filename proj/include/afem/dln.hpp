#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "afem/fem.hpp"

namespace afem {

/// Coefficients of one variable-step DLN step from t_{n-1}, t_n to t_{n+1}.
///
/// Index l of alpha/beta multiplies the level n-1+l. k_prev = t_n - t_{n-1},
/// k_curr = t_{n+1} - t_n.
struct DlnStepContext {
  double theta = 0.5;
  double k_prev = 0;
  double k_curr = 0;
  double epsilon = 0;  // (k_curr - k_prev) / (k_curr + k_prev)
  std::array<double, 3> alpha{};
  std::array<double, 3> beta{};
  double k_hat = 0;  // sum_l alpha_l t_{n-1+l}

  /// Sum of beta_l^2.
  double beta_square_sum() const { return beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2]; }
  /// Time at which the step's one-leg average is taken.
  double beta_time(double t_prev, double t_curr, double t_next) const {
    return beta[0] * t_prev + beta[1] * t_curr + beta[2] * t_next;
  }
};

DlnStepContext dln_coefficients(double theta, double k_prev, double k_curr);

/// One-step implicit midpoint rule written in the same form (theta = 1:
/// alpha = (0,-1,1), beta = (0,1/2,1/2)); level n-1 is ignored.
DlnStepContext midpoint_step(double k);

/// Numerical-dissipation coefficients a_l of the G-stability identity.
std::array<double, 3> g_dissipation_coefficients(const DlnStepContext& ctx);

/// (1+theta)/4 |u|^2 + (1-theta)/4 |v|^2 in the norm induced by `mass`.
double g_norm_squared(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double theta,
                      const Eigen::SparseMatrix<double>& mass);
double g_norm_squared(const Field& u, const Field& v, double theta);

/// |(v_alpha, v_beta) - [G(v_next, v_curr) - G(v_curr, v_prev) + |sum a_l v_l|^2]|.
/// Zero up to rounding for any data.
double g_stability_check(const Eigen::VectorXd& v_prev, const Eigen::VectorXd& v_curr,
                         const Eigen::VectorXd& v_next, const DlnStepContext& ctx,
                         const Eigen::SparseMatrix<double>& mass);
double g_stability_check(const Field& v_prev, const Field& v_curr, const Field& v_next,
                         const DlnStepContext& ctx);

struct StabilityCondition {
  bool satisfied = true;
  double margin = 0;  // (1+theta)/4 - C_beta |rho| k_hat
};

/// Sufficient step condition C_beta |rho| k_hat <= (1+theta)/4 for the
/// kinetic-energy bound.
StabilityCondition check_stability_step_condition(const DlnStepContext& ctx, double rho);

/// Dissipation measures of the last accepted step.
struct DissipationRates {
  double numerical_u = 0;  // |u_alpha|^2 / k_hat
  double numerical_w = 0;
  double viscous_u = 0;    // mu |grad u_beta|^2
  double stability_w = 0;  // gamma |grad w_beta|^2

  double chi_u() const;
  double chi_w() const;
};

struct StepBounds {
  double k_min = 1e-5;
  double k_max = 1e-2;
};

/// Minimum-dissipation controller: double (capped at k_max) when
/// max(|chi_u|, |chi_w|) <= delta, otherwise halve (floored at k_min).
double adapt_step(const DissipationRates& rates, double k_curr, const StepBounds& bounds, double delta);

}  // namespace afem
