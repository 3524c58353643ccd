#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "afem/assembly.hpp"

using namespace afem;

namespace {

MeshPtr square(int n) { return std::make_shared<const TriMesh>(TriMesh::unit_square(n)); }

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = U(rng);
  return v;
}

}  // namespace

TEST(Mass, PartitionOfUnity) {
  for (int deg : {1, 2}) {
    const FunctionSpace s(square(3), deg, 1);
    const SparseOperator M = assemble_mass(s);
    EXPECT_NEAR(Eigen::MatrixXd(M).sum(), 1.0, 1e-12);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(s.dof_count(), 2.5);
    EXPECT_NEAR(c.dot(M * c), 6.25, 1e-12);
  }
  const FunctionSpace v(square(2), 2, 2);
  EXPECT_NEAR(Eigen::MatrixXd(assemble_mass(v)).sum(), 2.0, 1e-12);
}

TEST(Mass, P1TwoTriangleMatrix) {
  // Vertices 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1); diagonal 0-3 is shared.
  const FunctionSpace s(square(1), 1, 1);
  const Eigen::MatrixXd M(assemble_mass(s));
  const double a = 0.5;  // triangle area
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(4, 4);
  const int tris[2][3] = {{0, 1, 3}, {0, 3, 2}};
  for (const auto& t : tris) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ref(t[i], t[j]) += a / 12 * (i == j ? 2.0 : 1.0);
    }
  }
  EXPECT_LT((M - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Stiffness, ConstantsInKernel) {
  const FunctionSpace s(square(4), 2, 2);
  const SparseOperator K = assemble_stiffness(s);
  EXPECT_LT((K * Eigen::VectorXd::Ones(s.dof_count())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((Eigen::MatrixXd(K) - Eigen::MatrixXd(K).transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Stiffness, GradientOfCoordinate) {
  const auto s = build_function_space(square(3), 1, 1);
  const Field x = interpolate(s, [](const Point2& p) { return p.x(); });
  EXPECT_NEAR(x.coeffs.dot(assemble_stiffness(*s) * x.coeffs), 1.0, 1e-13);
}

TEST(Stiffness, FirstDirichletEigenvalue) {
  const auto s = build_function_space(square(32), 2, 1);
  const SparseOperator K = assemble_stiffness(*s), M = assemble_mass(*s);
  const double pi = std::numbers::pi;
  const Field v = interpolate(s, [&](const Point2& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); });
  const double rq = v.coeffs.dot(K * v.coeffs) / v.coeffs.dot(M * v.coeffs);
  EXPECT_NEAR(rq / (2 * pi * pi), 1.0, 0.02);
}

TEST(Divergence, ConstantAndSolenoidalFields) {
  const auto v = build_function_space(square(3), 2, 2);
  const FunctionSpace q(v->mesh_ptr(), 1, 1);
  const SparseOperator B = assemble_divergence(*v, q);
  EXPECT_EQ(B.rows(), q.dof_count());
  EXPECT_EQ(B.cols(), v->dof_count());
  const Field c = interpolate(v, [](const Point2&) { return Eigen::Vector2d(1.0, -2.0); });
  EXPECT_LT((B * c.coeffs).cwiseAbs().maxCoeff(), 1e-14);
  const Field s = interpolate(v, [](const Point2& p) { return Eigen::Vector2d(p.x(), -p.y()); });
  EXPECT_LT((B * s.coeffs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Divergence, UnitDivergenceGivesIntegrals) {
  const auto v = build_function_space(square(3), 2, 2);
  const FunctionSpace q(v->mesh_ptr(), 1, 1);
  const Field u = interpolate(v, [](const Point2& p) { return Eigen::Vector2d(p.x(), 0.0); });
  const Eigen::VectorXd m = assemble_integrals(q);
  EXPECT_LT((assemble_divergence(*v, q) * u.coeffs - m).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((Eigen::MatrixXd(assemble_mass(q)).rowwise().sum() - m).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(m.sum(), 1.0, 1e-14);
}

TEST(Load, MatchesMassTimesInterpolantForQuadratics) {
  const auto v = build_function_space(square(3), 2, 2);
  auto f = [](const Point2& p) { return Eigen::Vector2d(p.x() * p.y(), 1.0 - p.y() * p.y()); };
  const Field fi = interpolate(v, f);
  const Eigen::VectorXd b = assemble_load(*v, f);
  EXPECT_LT((b - assemble_mass(*v) * fi.coeffs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Trilinear, SkewSymmetry) {
  const auto v = build_function_space(square(3), 2, 2);
  const Field u(v, random_vector(v->dof_count(), 1));
  const SparseOperator N = assemble_trilinear_matrix(u);
  for (std::uint64_t seed = 2; seed < 6; ++seed) {
    const Eigen::VectorXd w = random_vector(v->dof_count(), seed);
    EXPECT_NEAR(w.dot(N * w), 0.0, 1e-12);
  }
  EXPECT_LT((Eigen::MatrixXd(N) + Eigen::MatrixXd(N).transpose()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(Eigen::MatrixXd(assemble_trilinear_matrix(Field(v))).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Trilinear, MatchesDirectQuadrature) {
  const auto v = build_function_space(square(2), 2, 2);
  const Field u(v, random_vector(v->dof_count(), 11));
  const Eigen::MatrixXd N(assemble_trilinear_matrix(u));
  const int nd = v->dof_count(), ns = v->scalar_dof_count();

  // Independent oracle: evaluate unit fields through evaluate_field on a
  // collapsed 6x6 Gauss rule per triangle.
  const TriMesh& m = v->mesh();
  std::vector<double> gx, gw;
  {
    const int k = 6;
    const double x6[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                          0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
    const double w6[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                          0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    for (int i = 0; i < k; ++i) {
      gx.push_back(0.5 * (x6[i] + 1));
      gw.push_back(0.5 * w6[i]);
    }
  }
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(nd, nd);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto tri = m.triangles()[t];
    const Point2 a = m.vertices()[tri[0]], b = m.vertices()[tri[1]], c = m.vertices()[tri[2]];
    const double area2 = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    const auto local = v->cell_dofs(t);
    std::vector<int> dofs;
    for (int comp = 0; comp < 2; ++comp) {
      for (int s : local) dofs.push_back(comp * ns + s);
    }
    for (std::size_t i = 0; i < gx.size(); ++i) {
      for (std::size_t j = 0; j < gx.size(); ++j) {
        // Duffy map of the unit square onto the triangle.
        const double s1 = gx[i], s2 = gx[j] * (1 - gx[i]);
        const double wq = gw[i] * gw[j] * (1 - gx[i]) * area2;
        const Point2 p = a + s1 * (b - a) + s2 * (c - a);
        const FieldSample us = evaluate_field(u, p);
        std::vector<FieldSample> phi;
        for (int d : dofs) {
          Field e(v);
          e.coeffs[d] = 1.0;
          phi.push_back(evaluate_field(e, p));
        }
        for (std::size_t r = 0; r < dofs.size(); ++r) {
          for (std::size_t col = 0; col < dofs.size(); ++col) {
            // 1/2 (u.grad psi_col, psi_r) - 1/2 (u.grad psi_r, psi_col)
            const double t1 = (phi[col].gradient * us.value).dot(phi[r].value);
            const double t2 = (phi[r].gradient * us.value).dot(phi[col].value);
            ref(dofs[r], dofs[col]) += wq * 0.5 * (t1 - t2);
          }
        }
      }
    }
  }
  EXPECT_LT((N - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Cubic, ZeroFieldGivesZero) {
  const auto v = build_function_space(square(2), 2, 2);
  const NonlinearAssembly a = assemble_cubic_residual_and_jacobian(Field(v));
  EXPECT_EQ(a.residual.norm(), 0.0);
  EXPECT_EQ(Eigen::MatrixXd(a.jacobian).norm(), 0.0);
}

TEST(Cubic, PointwiseDerivativeOfCubicMap) {
  // d/de |x + e d|^2 (x + e d) at x=(1,0), d=(0,1) is (0,1).
  const Eigen::Vector2d x(1, 0), d(0, 1);
  auto g = [](const Eigen::Vector2d& y) -> Eigen::Vector2d { return y.squaredNorm() * y; };
  const Eigen::Vector2d analytic = x.squaredNorm() * d + 2 * x.dot(d) * x;
  const double e = 1e-7;
  EXPECT_LT(((g(x + e * d) - g(x - e * d)) / (2 * e) - analytic).norm(), 1e-7);
  EXPECT_NEAR(analytic.y(), 1.0, 0.0);
}

TEST(Cubic, JacobianMatchesFiniteDifferences) {
  const auto v = build_function_space(square(2), 2, 2);
  const Eigen::VectorXd u0 = random_vector(v->dof_count(), 3);
  const Eigen::VectorXd dir = random_vector(v->dof_count(), 4);
  for (auto [nu, lambda] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}, std::pair{0.7, 1.3}}) {
    const NonlinearAssembly a = assemble_nonlinear_terms(Field(v, u0), nu, lambda);
    const double h = 1e-6;
    const Eigen::VectorXd rp = assemble_nonlinear_terms(Field(v, u0 + h * dir), nu, lambda).residual;
    const Eigen::VectorXd rm = assemble_nonlinear_terms(Field(v, u0 - h * dir), nu, lambda).residual;
    const Eigen::VectorXd fd = (rp - rm) / (2 * h);
    const Eigen::VectorXd jd = a.jacobian * dir;
    EXPECT_LT((fd - jd).norm() / jd.norm(), 1e-8);
  }
  const NonlinearAssembly cubic = assemble_cubic_residual_and_jacobian(Field(v, u0));
  const NonlinearAssembly both = assemble_nonlinear_terms(Field(v, u0), 0.0, 1.0);
  EXPECT_LT((cubic.residual - both.residual).norm(), 1e-13);
}

TEST(Cubic, Monotone) {
  const auto v = build_function_space(square(3), 2, 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::VectorXd a = 3 * random_vector(v->dof_count(), 100 + s);
    const Eigen::VectorXd b = random_vector(v->dof_count(), 200 + s);
    const Eigen::VectorXd ra = assemble_cubic_residual_and_jacobian(Field(v, a)).residual;
    const Eigen::VectorXd rb = assemble_cubic_residual_and_jacobian(Field(v, b)).residual;
    EXPECT_GE((ra - rb).dot(a - b), 0.0);
  }
}

TEST(Discretization, LayoutAndBoundary) {
  const Discretization d(2);
  const BlockLayout& L = d.layout();
  EXPECT_EQ(L.vel, 50);
  EXPECT_EQ(L.pres, 9);
  EXPECT_EQ(L.size(), 2 * 50 + 2 * 9 + 2);
  EXPECT_EQ(d.dirichlet_dofs().size(), 2u * 2u * 16u);
  for (int k : d.dirichlet_dofs()) EXPECT_LT(k, 2 * L.vel);
}
