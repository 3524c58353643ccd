#include "afem/dln.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "afem/assembly.hpp"

namespace afem {

DlnStepContext dln_coefficients(double theta, double k_prev, double k_curr) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("DLN parameter theta must lie in [0,1], got " + std::to_string(theta));
  }
  if (!(k_prev > 0.0) || !(k_curr > 0.0)) {
    throw std::invalid_argument("DLN step sizes must be positive");
  }
  DlnStepContext c;
  c.theta = theta;
  c.k_prev = k_prev;
  c.k_curr = k_curr;
  c.epsilon = (k_curr - k_prev) / (k_curr + k_prev);
  c.alpha = {0.5 * (theta - 1), -theta, 0.5 * (theta + 1)};

  const double eps = c.epsilon;
  const double denom = (1 + eps * theta) * (1 + eps * theta);
  const double s = (1 - theta * theta) / denom;
  const double r = eps * eps * theta * (1 - theta * theta) / denom;
  c.beta[2] = 0.25 * (1 + s + r + theta);
  c.beta[1] = 0.5 * (1 - s);
  c.beta[0] = 0.25 * (1 + s - r - theta);

  c.k_hat = 0.5 * (1 + theta) * k_curr + 0.5 * (1 - theta) * k_prev;
  return c;
}

DlnStepContext midpoint_step(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("step size must be positive");
  DlnStepContext c;
  c.theta = 1.0;
  c.k_prev = k;
  c.k_curr = k;
  c.epsilon = 0.0;
  c.alpha = {0.0, -1.0, 1.0};
  c.beta = {0.0, 0.5, 0.5};
  c.k_hat = k;
  return c;
}

std::array<double, 3> g_dissipation_coefficients(const DlnStepContext& ctx) {
  const double th = ctx.theta, eps = ctx.epsilon;
  const double a1 = -std::sqrt(th * (1 - th * th)) / (std::sqrt(2.0) * (1 + eps * th));
  return {-0.5 * (1 + eps) * a1, a1, -0.5 * (1 - eps) * a1};
}

double g_norm_squared(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double theta,
                      const Eigen::SparseMatrix<double>& mass) {
  if (u.size() != v.size() || u.size() != mass.rows()) {
    throw std::invalid_argument("G-norm arguments live on different spaces");
  }
  return 0.25 * (1 + theta) * u.dot(mass * u) + 0.25 * (1 - theta) * v.dot(mass * v);
}

double g_norm_squared(const Field& u, const Field& v, double theta) {
  if (u.space != v.space) throw std::invalid_argument("G-norm arguments live on different spaces");
  return g_norm_squared(u.coeffs, v.coeffs, theta, assemble_mass(*u.space));
}

double g_stability_check(const Eigen::VectorXd& v_prev, const Eigen::VectorXd& v_curr,
                         const Eigen::VectorXd& v_next, const DlnStepContext& ctx,
                         const Eigen::SparseMatrix<double>& mass) {
  const auto& al = ctx.alpha;
  const auto& be = ctx.beta;
  const Eigen::VectorXd va = al[0] * v_prev + al[1] * v_curr + al[2] * v_next;
  const Eigen::VectorXd vb = be[0] * v_prev + be[1] * v_curr + be[2] * v_next;
  const auto a = g_dissipation_coefficients(ctx);
  const Eigen::VectorXd vd = a[0] * v_prev + a[1] * v_curr + a[2] * v_next;
  const double lhs = va.dot(mass * vb);
  const double rhs = g_norm_squared(v_next, v_curr, ctx.theta, mass) -
                     g_norm_squared(v_curr, v_prev, ctx.theta, mass) + vd.dot(mass * vd);
  return std::abs(lhs - rhs);
}

double g_stability_check(const Field& v_prev, const Field& v_curr, const Field& v_next,
                         const DlnStepContext& ctx) {
  return g_stability_check(v_prev.coeffs, v_curr.coeffs, v_next.coeffs, ctx, assemble_mass(*v_curr.space));
}

StabilityCondition check_stability_step_condition(const DlnStepContext& ctx, double rho) {
  StabilityCondition s;
  s.margin = 0.25 * (1 + ctx.theta) - ctx.beta_square_sum() * std::abs(rho) * ctx.k_hat;
  s.satisfied = s.margin >= 0;
  return s;
}

namespace {
double ratio(double num, double den) {
  if (den > 0) return num / den;
  return num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
}
}  // namespace

double DissipationRates::chi_u() const { return ratio(numerical_u, viscous_u); }
double DissipationRates::chi_w() const { return ratio(numerical_w, stability_w); }

double adapt_step(const DissipationRates& rates, double k_curr, const StepBounds& bounds, double delta) {
  const double chi = std::max(std::abs(rates.chi_u()), std::abs(rates.chi_w()));
  if (chi <= delta) return std::min(2 * k_curr, bounds.k_max);
  return std::max(0.5 * k_curr, bounds.k_min);
}

}  // namespace afem
