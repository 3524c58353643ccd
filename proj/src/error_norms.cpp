#include "afem/error_norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afem {

namespace {

// Calls visit(x, weight, value, gradient) at every error-quadrature point.
template <class Visit>
void for_each_point(const Field& field, Visit&& visit) {
  const FunctionSpace& V = *field.space;
  const TriMesh& mesh = V.mesh();
  const QuadratureRule& rule = quadrature_rule(kErrorQuadratureDegree);
  const BasisTable tab = tabulate(V.degree(), rule);
  const int ns = V.scalar_dof_count();
  const int nc = V.components();
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const ElementMap map = element_map(mesh, e);
    const auto dofs = V.cell_dofs(e);
    for (int q = 0; q < tab.num_points; ++q) {
      Eigen::Vector2d val = Eigen::Vector2d::Zero();
      Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
      for (int i = 0; i < tab.size; ++i) {
        const Eigen::Vector2d g = map.physical_gradient(tab.ref_gradient(q, i));
        for (int c = 0; c < nc; ++c) {
          const double a = field.coeffs[c * ns + dofs[i]];
          val[c] += a * tab.value(q, i);
          grad.row(c) += a * g.transpose();
        }
      }
      visit(map.to_physical(rule.points[q]), rule.weights[q] * std::abs(map.det), val, grad);
    }
  }
}

}  // namespace

ErrorPair vector_error(const Field& field, const VectorFunction& value, const MatrixFunction& gradient) {
  if (field.space->components() != 2) throw std::invalid_argument("vector_error needs a vector field");
  double l2 = 0, semi = 0;
  for_each_point(field, [&](const Point2& x, double wq, const Eigen::Vector2d& v, const Eigen::Matrix2d& g) {
    l2 += wq * (v - value(x)).squaredNorm();
    semi += wq * (g - gradient(x)).squaredNorm();
  });
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

ErrorPair scalar_error(const Field& field, const ScalarFunction& value, const GradientFunction& gradient,
                       bool mean_free) {
  if (field.space->components() != 1) throw std::invalid_argument("scalar_error needs a scalar field");
  double mean = 0, area = 0;
  if (mean_free) {
    for_each_point(field, [&](const Point2& x, double wq, const Eigen::Vector2d& v, const Eigen::Matrix2d&) {
      mean += wq * (v[0] - value(x));
      area += wq;
    });
    mean /= area;
  }
  double l2 = 0, semi = 0;
  for_each_point(field, [&](const Point2& x, double wq, const Eigen::Vector2d& v, const Eigen::Matrix2d& g) {
    const double d = v[0] - value(x) - mean;
    l2 += wq * d * d;
    semi += wq * (g.row(0).transpose() - gradient(x)).squaredNorm();
  });
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

FieldErrors solution_errors(const Discretization& disc, const Eigen::VectorXd& x, const ManufacturedSolution& ms,
                            double t) {
  FieldErrors out;
  out.e[0] = vector_error(disc.u(x), [&](const Point2& p) { return ms.u(p, t); },
                          [&](const Point2& p) { return ms.grad_u(p, t); });
  out.e[1] = vector_error(disc.w(x), [&](const Point2& p) { return ms.w(p, t); },
                          [&](const Point2& p) { return ms.grad_w(p, t); });
  out.e[2] = scalar_error(disc.phi(x), [&](const Point2& p) { return ms.phi(p, t); },
                          [&](const Point2& p) { return ms.grad_phi(p, t); }, true);
  out.e[3] = scalar_error(disc.p(x), [&](const Point2& p) { return ms.p(p, t); },
                          [&](const Point2& p) { return ms.grad_p(p, t); }, true);
  return out;
}

double convergence_rate(double e_coarse, double e_fine, double step_coarse, double step_fine) {
  return std::log(e_coarse / e_fine) / std::log(step_coarse / step_fine);
}

double ErrorReport::value(std::size_t row, Component c, Norm n) const {
  const ErrorPair& e = rows.at(row).errors[c];
  return n == Norm::l2 ? e.l2 : e.h1;
}

double ErrorReport::rate(std::size_t row, Component c, Norm n) const {
  if (row == 0 || row >= rows.size()) return std::numeric_limits<double>::quiet_NaN();
  return convergence_rate(value(row - 1, c, n), value(row, c, n), rows[row - 1].step, rows[row].step);
}

}  // namespace afem
