#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "afem/dln.hpp"
#include "support.hpp"

using namespace afem;

namespace {

struct Sample {
  double theta, k_prev, k_curr;
};

// Random (theta, step pair) with step ratio in [1/4, 4].
std::vector<Sample> samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(0.0, 1.0), lr(-std::log(4.0), std::log(4.0)), lk(-8.0, 0.0);
  std::vector<Sample> out;
  for (int i = 0; i < count; ++i) {
    const double k0 = std::exp(lk(rng));
    out.push_back({th(rng), k0, k0 * std::exp(lr(rng))});
  }
  return out;
}

Eigen::SparseMatrix<double> diagonal_mass(int n, std::uint64_t seed) {
  const Eigen::VectorXd d = afem::testing::random_vector(n, seed).cwiseAbs().array() + 0.1;
  Eigen::SparseMatrix<double> M(n, n);
  for (int i = 0; i < n; ++i) M.insert(i, i) = d[i];
  M.makeCompressed();
  return M;
}

}  // namespace

TEST(DlnCoefficients, ThetaOneIsMidpointOnLastStep) {
  for (auto [kp, kc] : {std::pair{0.1, 0.1}, std::pair{0.3, 0.05}, std::pair{0.01, 0.04}}) {
    const DlnStepContext c = dln_coefficients(1.0, kp, kc);
    EXPECT_EQ(c.alpha, (std::array<double, 3>{0.0, -1.0, 1.0}));
    EXPECT_EQ(c.beta, (std::array<double, 3>{0.0, 0.5, 0.5}));
    EXPECT_EQ(c.k_hat, kc);
  }
}

TEST(DlnCoefficients, ThetaZeroIsMidpointOverTwoSteps) {
  for (auto [kp, kc] : {std::pair{0.1, 0.1}, std::pair{0.3, 0.05}, std::pair{0.01, 0.04}}) {
    const DlnStepContext c = dln_coefficients(0.0, kp, kc);
    EXPECT_EQ(c.alpha, (std::array<double, 3>{-0.5, 0.0, 0.5}));
    EXPECT_EQ(c.beta, (std::array<double, 3>{0.5, 0.0, 0.5}));
    EXPECT_DOUBLE_EQ(c.k_hat, 0.5 * (kp + kc));
  }
}

TEST(DlnCoefficients, VariableStepExample) {
  const DlnStepContext c = dln_coefficients(0.3, 0.1, 0.2);
  EXPECT_NEAR(c.epsilon, 1.0 / 3, 1e-15);
  // Hand evaluation: (1 + eps theta)^2 = 1.21, s = 0.91/1.21, r = s * 0.3 / 9.
  const double s = 0.91 / 1.21, r = s * 0.3 / 9;
  EXPECT_NEAR(c.beta[2], 0.25 * (1.3 + s + r), 1e-15);
  EXPECT_NEAR(c.beta[1], 0.5 * (1 - s), 1e-15);
  EXPECT_NEAR(c.beta[0], 0.25 * (0.7 + s - r), 1e-15);
  EXPECT_NEAR(c.beta[0] + c.beta[1] + c.beta[2], 1.0, 1e-15);
}

TEST(DlnCoefficients, ConsistencyIdentities) {
  for (const Sample& s : samples(1000, 42)) {
    const DlnStepContext c = dln_coefficients(s.theta, s.k_prev, s.k_curr);
    EXPECT_NEAR(c.alpha[0] + c.alpha[1] + c.alpha[2], 0.0, 1e-14);
    EXPECT_NEAR(c.beta[0] + c.beta[1] + c.beta[2], 1.0, 1e-14);
    // Times relative to t_n: t_{n-1} = -k_prev, t_{n+1} = k_curr.
    const std::array<double, 3> t{-s.k_prev, 0.0, s.k_curr};
    double at = 0, at2 = 0, bt = 0;
    for (int l = 0; l < 3; ++l) {
      at += c.alpha[l] * t[l];
      at2 += c.alpha[l] * t[l] * t[l];
      bt += c.beta[l] * t[l];
    }
    const double scale = s.k_prev + s.k_curr;
    EXPECT_NEAR(at, c.k_hat, 1e-14 * scale);
    // Second order: exact for y = t^2 at the beta point.
    EXPECT_NEAR(at2, 2 * c.k_hat * bt, 1e-13 * scale * scale);
    EXPECT_NEAR(c.beta_time(t[0], t[1], t[2]), bt, 1e-15 * scale);
  }
}

TEST(DlnCoefficients, RejectsBadArguments) {
  EXPECT_THROW(dln_coefficients(1.2, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(dln_coefficients(-0.1, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(dln_coefficients(0.5, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(midpoint_step(-1.0), std::invalid_argument);
}

TEST(DlnCoefficients, MidpointStepForm) {
  const DlnStepContext c = midpoint_step(0.25);
  EXPECT_EQ(c.alpha, (std::array<double, 3>{0.0, -1.0, 1.0}));
  EXPECT_EQ(c.beta, (std::array<double, 3>{0.0, 0.5, 0.5}));
  EXPECT_EQ(c.k_hat, 0.25);
}

TEST(GNorm, Examples) {
  const auto M = diagonal_mass(20, 1);
  const Eigen::VectorXd u = afem::testing::random_vector(20, 2), v = afem::testing::random_vector(20, 3);
  const double uu = u.dot(M * u), vv = v.dot(M * v);
  EXPECT_NEAR(g_norm_squared(u, v, 1.0, M), 0.5 * uu, 1e-15);
  for (double th : {0.0, 0.3, 0.8}) EXPECT_NEAR(g_norm_squared(u, u, th, M), 0.5 * uu, 1e-14);
  EXPECT_NEAR(g_norm_squared(u, v, 0.3, M), 0.325 * uu + 0.175 * vv, 1e-14);
}

TEST(GStability, IdentityHoldsForRandomData) {
  const auto M = diagonal_mass(30, 7);
  int k = 0;
  for (const Sample& s : samples(1000, 5)) {
    const DlnStepContext c = dln_coefficients(s.theta, s.k_prev, s.k_curr);
    const Eigen::VectorXd v0 = afem::testing::random_vector(30, 1000 + 3 * k);
    const Eigen::VectorXd v1 = afem::testing::random_vector(30, 1001 + 3 * k);
    const Eigen::VectorXd v2 = afem::testing::random_vector(30, 1002 + 3 * k, 4.0);
    ++k;
    // Independent right-hand side from the lemma's coefficients.
    const double th = c.theta, e = c.epsilon;
    const double a1 = -std::sqrt(th * (1 - th * th)) / (std::sqrt(2.0) * (1 + e * th));
    const double a2 = -0.5 * (1 - e) * a1, a0 = -0.5 * (1 + e) * a1;
    const Eigen::VectorXd va = c.alpha[0] * v0 + c.alpha[1] * v1 + c.alpha[2] * v2;
    const Eigen::VectorXd vb = c.beta[0] * v0 + c.beta[1] * v1 + c.beta[2] * v2;
    const Eigen::VectorXd vd = a0 * v0 + a1 * v1 + a2 * v2;
    auto G = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
      return 0.25 * (1 + th) * x.dot(M * x) + 0.25 * (1 - th) * y.dot(M * y);
    };
    const double lhs = va.dot(M * vb), rhs = G(v2, v1) - G(v1, v0) + vd.dot(M * vd);
    const double scale = v0.dot(M * v0) + v1.dot(M * v1) + v2.dot(M * v2);
    EXPECT_LE(std::abs(lhs - rhs), 1e-11 * scale);
    EXPECT_LE(g_stability_check(v0, v1, v2, c, M), 1e-11 * scale);
    const auto a = g_dissipation_coefficients(c);
    EXPECT_NEAR(a[0], a0, 1e-15);
    EXPECT_NEAR(a[1], a1, 1e-15);
    EXPECT_NEAR(a[2], a2, 1e-15);
  }
  // Named grid of theta and epsilon, epsilon set through the step ratio.
  for (double th : {0.0, 0.3, 0.7, 1.0}) {
    for (double e : {-0.5, 0.0, 0.5}) {
      const DlnStepContext c = dln_coefficients(th, 1.0, (1 + e) / (1 - e));
      EXPECT_NEAR(c.epsilon, e, 1e-15);
      const Eigen::VectorXd v0 = afem::testing::random_vector(30, 1), v1 = afem::testing::random_vector(30, 2),
                            v2 = afem::testing::random_vector(30, 3);
      EXPECT_LE(g_stability_check(v0, v1, v2, c, M), 1e-11 * (v0.squaredNorm() + v1.squaredNorm() + v2.squaredNorm()));
    }
  }
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(30);
  EXPECT_EQ(g_stability_check(z, z, z, dln_coefficients(0.3, 0.1, 0.2), M), 0.0);
}

TEST(StabilityCondition, Examples) {
  EXPECT_TRUE(check_stability_step_condition(dln_coefficients(0.3, 5.0, 80.0), 0.0).satisfied);
  // theta = 1: C_beta = 1/2, so |rho| k <= 1.
  EXPECT_TRUE(check_stability_step_condition(dln_coefficients(1.0, 1.0, 1.0), 1.0).satisfied);
  EXPECT_NEAR(check_stability_step_condition(dln_coefficients(1.0, 1.0, 1.0), 1.0).margin, 0.0, 1e-15);
  EXPECT_FALSE(check_stability_step_condition(dln_coefficients(1.0, 1.01, 1.01), 1.0).satisfied);
  const StabilityCondition s = check_stability_step_condition(dln_coefficients(0.3, 0.01, 0.01), -0.81);
  const double cb = 0.4025 * 0.4025 + 0.045 * 0.045 + 0.5525 * 0.5525;
  EXPECT_TRUE(s.satisfied);
  EXPECT_NEAR(s.margin, 0.325 - cb * 0.81 * 0.01, 1e-15);
  EXPECT_GT(s.margin, 0.3);
}

TEST(Controller, DoublesOnSmallRatios) {
  const StepBounds b{1e-5, 1e-2};
  DissipationRates steady;  // all zero
  double k = 1e-5;
  int steps = 0;
  while (k < b.k_max) {
    k = adapt_step(steady, k, b, 2.0);
    ++steps;
  }
  EXPECT_EQ(k, b.k_max);
  EXPECT_EQ(steps, 10);  // 1e-5 * 2^10 > 1e-2
  EXPECT_EQ(adapt_step(steady, b.k_max, b, 2.0), b.k_max);
}

TEST(Controller, BoundaryRatioDoubles) {
  const StepBounds b{1e-5, 1e-2};
  DissipationRates r;
  r.numerical_u = 2.0;
  r.viscous_u = 1.0;
  EXPECT_DOUBLE_EQ(r.chi_u(), 2.0);
  EXPECT_EQ(adapt_step(r, 1e-3, b, 2.0), 2e-3);
  r.numerical_u = 2.0000001;
  EXPECT_EQ(adapt_step(r, 1e-3, b, 2.0), 5e-4);
  EXPECT_EQ(adapt_step(r, 1.5e-5, b, 2.0), 1e-5);
}

TEST(Controller, UsesLargerOfTheTwoRatios) {
  const StepBounds b{1e-5, 1e-2};
  DissipationRates r;
  r.numerical_u = 1.0;
  r.viscous_u = 1.0;
  r.numerical_w = 5.0;
  r.stability_w = 1.0;
  EXPECT_EQ(adapt_step(r, 1e-3, b, 2.0), 5e-4);
  r.stability_w = 0.0;  // zero physical dissipation with nonzero numerical
  EXPECT_TRUE(std::isinf(r.chi_w()));
  EXPECT_EQ(adapt_step(r, 1e-3, b, 2.0), 5e-4);
}
