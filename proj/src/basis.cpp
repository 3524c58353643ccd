#include <stdexcept>
#include <string>

#include <Eigen/LU>

#include "afem/fem.hpp"

namespace afem {

BasisEval p_basis_eval(int degree, const Barycentric& b) {
  // d(l0, l1, l2)/d(xi, eta) = (-1,-1), (1,0), (0,1)
  static const Eigen::Vector2d dl[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  BasisEval out;
  if (degree == 1) {
    out.values = {b[0], b[1], b[2]};
    out.gradients = {dl[0], dl[1], dl[2]};
    return out;
  }
  if (degree != 2) {
    throw std::invalid_argument("Lagrange degree must be 1 or 2, got " + std::to_string(degree));
  }
  out.values.resize(6);
  out.gradients.resize(6);
  for (int i = 0; i < 3; ++i) {
    out.values[i] = b[i] * (2 * b[i] - 1);
    out.gradients[i] = (4 * b[i] - 1) * dl[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int i = k, j = (k + 1) % 3;
    out.values[3 + k] = 4 * b[i] * b[j];
    out.gradients[3 + k] = 4 * (b[j] * dl[i] + b[i] * dl[j]);
  }
  return out;
}

BasisTable tabulate(int degree, const QuadratureRule& rule) {
  BasisTable t;
  t.degree = degree;
  t.size = basis_size(degree);
  t.num_points = static_cast<int>(rule.points.size());
  t.values.reserve(static_cast<std::size_t>(t.size) * t.num_points);
  t.ref_gradients.reserve(t.values.capacity());
  for (const auto& p : rule.points) {
    auto e = p_basis_eval(degree, p);
    t.values.insert(t.values.end(), e.values.begin(), e.values.end());
    t.ref_gradients.insert(t.ref_gradients.end(), e.gradients.begin(), e.gradients.end());
  }
  return t;
}

ElementMap element_map(const TriMesh& mesh, int triangle) {
  const auto& tri = mesh.triangles()[triangle];
  const auto v = mesh.vertices();
  ElementMap m;
  m.origin = v[tri[0]];
  m.jacobian.col(0) = v[tri[1]] - v[tri[0]];
  m.jacobian.col(1) = v[tri[2]] - v[tri[0]];
  m.det = m.jacobian.determinant();
  m.inverse_transpose = m.jacobian.inverse().transpose();
  return m;
}

}  // namespace afem
