#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

#include "afem/fem.hpp"

namespace afem {

FunctionSpace::FunctionSpace(MeshPtr mesh, int degree, int components)
    : mesh_(std::move(mesh)), degree_(degree), components_(components) {
  if (degree_ != 1 && degree_ != 2) {
    throw std::invalid_argument("space degree must be 1 or 2, got " + std::to_string(degree_));
  }
  if (components_ != 1 && components_ != 2) {
    throw std::invalid_argument("space components must be 1 or 2");
  }
  const TriMesh& m = *mesh_;
  const int nv = m.num_vertices();
  scalar_dofs_ = degree_ == 1 ? nv : nv + m.num_edges();

  dof_coords_.assign(m.vertices().begin(), m.vertices().end());
  scalar_on_boundary_.resize(scalar_dofs_);
  for (int v = 0; v < nv; ++v) scalar_on_boundary_[v] = m.is_boundary_vertex(v);
  if (degree_ == 2) {
    for (int e = 0; e < m.num_edges(); ++e) {
      const auto& ed = m.edges()[e];
      dof_coords_.push_back(0.5 * (m.vertices()[ed[0]] + m.vertices()[ed[1]]));
      scalar_on_boundary_[nv + e] = m.is_boundary_edge(e);
    }
  }

  const int ls = local_size();
  cell_dofs_.resize(static_cast<std::size_t>(m.num_triangles()) * ls);
  for (int t = 0; t < m.num_triangles(); ++t) {
    int* d = cell_dofs_.data() + static_cast<std::size_t>(t) * ls;
    for (int k = 0; k < 3; ++k) d[k] = m.triangles()[t][k];
    if (degree_ == 2) {
      for (int k = 0; k < 3; ++k) d[3 + k] = nv + m.triangle_edges()[t][k];
    }
  }

  for (int c = 0; c < components_; ++c) {
    for (int s = 0; s < scalar_dofs_; ++s) {
      if (scalar_on_boundary_[s]) boundary_dofs_.push_back(c * scalar_dofs_ + s);
    }
  }
}

SpacePtr build_function_space(MeshPtr mesh, int degree, int components) {
  return std::make_shared<const FunctionSpace>(std::move(mesh), degree, components);
}

Field::Field(SpacePtr s, Eigen::VectorXd c) : space(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != space->dof_count()) {
    throw std::invalid_argument("field coefficient length " + std::to_string(coeffs.size()) +
                                " does not match space dof count " +
                                std::to_string(space->dof_count()));
  }
}

FieldSample evaluate_field(const Field& field, const Point2& point) {
  const FunctionSpace& space = *field.space;
  const auto tri = space.mesh().locate(point);
  if (!tri) {
    throw std::out_of_range("point (" + std::to_string(point.x()) + ", " +
                            std::to_string(point.y()) + ") lies outside the mesh");
  }
  const ElementMap map = element_map(space.mesh(), *tri);
  const Eigen::Vector2d ref = map.jacobian.inverse() * (point - map.origin);
  const Barycentric b{1 - ref.x() - ref.y(), ref.x(), ref.y()};
  const BasisEval basis = p_basis_eval(space.degree(), b);
  const auto dofs = space.cell_dofs(*tri);
  const int ns = space.scalar_dof_count();

  FieldSample s;
  for (int c = 0; c < space.components(); ++c) {
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const double coef = field.coeffs[c * ns + dofs[i]];
      s.value[c] += coef * basis.values[i];
      s.gradient.row(c) += coef * map.physical_gradient(basis.gradients[i]).transpose();
    }
  }
  return s;
}

}  // namespace afem
