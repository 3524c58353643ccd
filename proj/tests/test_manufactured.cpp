#include <gtest/gtest.h>

#include <cmath>
#include <type_traits>

#include "afem/manufactured.hpp"

using namespace afem;
using Vec = Eigen::Vector2d;

namespace {

const std::vector<ManufacturedSolution>& all_solutions() {
  static const std::vector<ManufacturedSolution> s{projection_solution(), time_dependent_solution(), steady_solution(),
                                                   polynomial_solution()};
  return s;
}

const Point2 kPoints[] = {Point2(0.3, 0.7), Point2(0.11, 0.52), Point2(0.83, 0.29)};

// Gradient by central differences, row c = grad of component c.
Eigen::Matrix2d fd_grad(const SpaceTimeVector& f, const Point2& x, double t, double h = 1e-5) {
  Eigen::Matrix2d g;
  for (int j = 0; j < 2; ++j) {
    Point2 e = Point2::Zero();
    e[j] = h;
    g.col(j) = (f(x + e, t) - f(x - e, t)) / (2 * h);
  }
  return g;
}

Vec fd_grad(const SpaceTimeScalar& f, const Point2& x, double t, double h = 1e-5) {
  return {(f(x + Point2(h, 0), t) - f(x - Point2(h, 0), t)) / (2 * h),
          (f(x + Point2(0, h), t) - f(x - Point2(0, h), t)) / (2 * h)};
}

// Five-point Laplacian with one Richardson step.
template <class F>
auto fd_lap(const F& f, const Point2& x, double t, double h = 2e-3) {
  using R = std::decay_t<decltype(f(x, t))>;
  auto five = [&](double s) -> R {
    return (f(x + Point2(s, 0), t) + f(x - Point2(s, 0), t) + f(x + Point2(0, s), t) + f(x - Point2(0, s), t) -
            4.0 * f(x, t)) /
           (s * s);
  };
  return R((4.0 * five(h / 2) - five(h)) / 3.0);
}

double scale(const Vec& v) { return std::max(1.0, v.norm()); }

}  // namespace

TEST(Manufactured, DerivativesMatchFiniteDifferences) {
  for (const ManufacturedSolution& ms : all_solutions()) {
    for (const Point2& x : kPoints) {
      for (double t : {0.0, 0.5}) {
        const double ht = 1e-6;
        const Vec ut = (ms.u(x, t + ht) - ms.u(x, t - ht)) / (2 * ht);
        EXPECT_LT((ms.u_t(x, t) - ut).norm(), 1e-7 * scale(ut)) << ms.name;
        EXPECT_LT((ms.grad_u(x, t) - fd_grad(ms.u, x, t)).norm(), 1e-7 * std::max(1.0, ms.grad_u(x, t).norm()))
            << ms.name;
        EXPECT_LT((ms.grad_w(x, t) - fd_grad(ms.w, x, t)).norm(), 1e-7 * std::max(1.0, ms.grad_w(x, t).norm()))
            << ms.name;
        EXPECT_LT((ms.lap_u(x, t) - fd_lap(ms.u, x, t)).norm(), 1e-5 * scale(ms.lap_u(x, t))) << ms.name;
        EXPECT_LT((ms.lap_w(x, t) - fd_lap(ms.w, x, t)).norm(), 1e-5 * scale(ms.lap_w(x, t))) << ms.name;
        EXPECT_LT((ms.grad_phi(x, t) - fd_grad(ms.phi, x, t)).norm(), 1e-7 * scale(ms.grad_phi(x, t))) << ms.name;
        EXPECT_LT((ms.grad_p(x, t) - fd_grad(ms.p, x, t)).norm(), 1e-6 * scale(ms.grad_p(x, t))) << ms.name;
      }
    }
  }
}

TEST(Manufactured, AuxiliaryFieldRelations) {
  for (const ManufacturedSolution& ms : all_solutions()) {
    for (const Point2& x : kPoints) {
      const double t = 0.4;
      // w = -Lap u - grad phi, both u and w solenoidal, phi harmonic.
      const Vec w = -ms.lap_u(x, t) - ms.grad_phi(x, t);
      EXPECT_LT((ms.w(x, t) - w).norm(), 1e-12 * scale(w)) << ms.name;
      EXPECT_NEAR(ms.grad_u(x, t).trace(), 0.0, 1e-12 * std::max(1.0, ms.grad_u(x, t).norm())) << ms.name;
      EXPECT_NEAR(ms.grad_w(x, t).trace(), 0.0, 1e-10 * std::max(1.0, ms.grad_w(x, t).norm())) << ms.name;
      EXPECT_NEAR(fd_lap(ms.phi, x, t), 0.0, 1e-5) << ms.name;
    }
  }
}

TEST(Manufactured, TimeFactors) {
  const ManufacturedSolution td = time_dependent_solution(), st = steady_solution();
  const Point2 x(0.3, 0.7);
  EXPECT_LT((td.u(x, 0.7) - std::exp(1.4) * st.u(x, 0.0)).norm(), 1e-13);
  EXPECT_LT((td.w(x, 0.7) - std::exp(1.4) * st.w(x, 0.0)).norm(), 1e-11);
  EXPECT_NEAR(td.phi(x, 0.7), std::exp(1.4) * st.phi(x, 0.0), 1e-13);
  EXPECT_NEAR(td.p(x, 0.7), std::exp(-0.7) * st.p(x, 0.0), 1e-13);
  EXPECT_EQ(st.u_t(x, 0.3).norm(), 0.0);
  const ManufacturedSolution pr = projection_solution();
  EXPECT_NEAR(pr.p(Point2(0.0, 0.5), 0.0), -1.0 + 1.0, 1e-15);
  EXPECT_LT((pr.u(x, 0.0) - st.u(x, 0.0)).norm(), 1e-15);
}

TEST(Manufactured, SourceMatchesFiniteDifferenceOperator) {
  const ManufacturedSolution ms = time_dependent_solution();
  const ModelParams prm{1.0, 1.0, 1.0, 1.0, 1.0};
  const SpaceTimeVector f = source_term(ms, prm);
  const Point2 x(0.3, 0.7);
  const double t = 0.5;
  // Fully finite-difference oracle: u_t - mu Lap u + gamma Lap^2 u + nu (grad u) u + rho u + lambda |u|^2 u + grad p,
  // with Lap^2 u = -Lap w - Lap grad phi and Lap grad phi = 0.
  const double ht = 1e-6;
  const Vec u = ms.u(x, t);
  const Vec ut = (ms.u(x, t + ht) - ms.u(x, t - ht)) / (2 * ht);
  const Vec lap_u = fd_lap(ms.u, x, t);
  const Vec lap_w = fd_lap(ms.w, x, t);
  const Vec conv = fd_grad(ms.u, x, t) * u;
  const Vec oracle = ut - prm.mu * lap_u - prm.gamma * lap_w + prm.nu * conv + prm.rho * u +
                     prm.lambda * u.squaredNorm() * u + fd_grad(ms.p, x, t);
  EXPECT_LT((f(x, t) - oracle).norm(), 1e-5 * oracle.norm());
}

TEST(Manufactured, SourceReducesToPressureGradient) {
  const ManufacturedSolution ms = steady_solution();
  const SpaceTimeVector f = source_term(ms, ModelParams{0, 0, 0, 0, 0});
  for (const Point2& x : kPoints) EXPECT_LT((f(x, 0.0) - ms.grad_p(x, 0.0)).norm(), 1e-12);
}

TEST(Manufactured, ProblemCarriesTraces) {
  const ManufacturedSolution ms = time_dependent_solution();
  const ProblemData d = manufactured_problem(ms, ModelParams{});
  const Point2 x(1.0, 0.25);
  EXPECT_EQ((d.u_boundary(x, 0.3) - ms.u(x, 0.3)).norm(), 0.0);
  EXPECT_EQ((d.w_boundary(x, 0.3) - ms.w(x, 0.3)).norm(), 0.0);
  const ExactFields e = ms.at(0.3);
  EXPECT_EQ((e.u(x) - ms.u(x, 0.3)).norm(), 0.0);
  EXPECT_EQ(e.p(x), ms.p(x, 0.3));
}
