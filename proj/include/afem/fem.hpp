#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "afem/mesh.hpp"

namespace afem {

/// Barycentric coordinates (l0, l1, l2) on the reference triangle with
/// vertices (0,0), (1,0), (0,1); reference coordinates are (l1, l2).
using Barycentric = std::array<double, 3>;

/// Values and reference-coordinate gradients of a Lagrange basis.
///
/// Node order: P1 uses the three vertices. P2 appends the midpoints of the
/// edges (0,1), (1,2), (2,0).
struct BasisEval {
  std::vector<double> values;
  std::vector<Eigen::Vector2d> gradients;
};

BasisEval p_basis_eval(int degree, const Barycentric& ref_point);

inline int basis_size(int degree) { return degree == 1 ? 3 : 6; }

struct QuadratureRule {
  int degree = 0;  // polynomial exactness
  std::vector<Barycentric> points;
  std::vector<double> weights;  // sum to 1/2
};

/// Gauss rule on the reference triangle exact to at least the requested
/// degree (<= 10). Cached, so the reference stays valid for the program.
const QuadratureRule& quadrature_rule(int min_exact_degree);

/// Quadrature degree used for volume forms.
inline constexpr int kAssemblyQuadratureDegree = 8;

/// Basis values and reference gradients at every point of a rule, laid out
/// point-major: entry [q * size + i].
struct BasisTable {
  int degree = 0;
  int size = 0;
  int num_points = 0;
  std::vector<double> values;
  std::vector<Eigen::Vector2d> ref_gradients;

  double value(int q, int i) const { return values[q * size + i]; }
  const Eigen::Vector2d& ref_gradient(int q, int i) const { return ref_gradients[q * size + i]; }
};

BasisTable tabulate(int degree, const QuadratureRule& rule);

/// Affine map x = origin + jacobian * xi from the reference triangle.
struct ElementMap {
  Point2 origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_transpose;
  double det = 0;

  Point2 to_physical(const Barycentric& b) const {
    return origin + jacobian * Eigen::Vector2d(b[1], b[2]);
  }
  Eigen::Vector2d physical_gradient(const Eigen::Vector2d& ref_grad) const {
    return inverse_transpose * ref_grad;
  }
};

ElementMap element_map(const TriMesh& mesh, int triangle);

/// Continuous Lagrange space of degree 1 or 2 with 1 or 2 components.
///
/// Scalar numbering: vertex v -> v, and for P2 edge e -> num_vertices + e.
/// Vector spaces use block layout: component c of scalar node s is
/// c * scalar_dof_count + s.
class FunctionSpace {
 public:
  FunctionSpace(MeshPtr mesh, int degree, int components);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  int scalar_dof_count() const { return scalar_dofs_; }
  int dof_count() const { return components_ * scalar_dofs_; }
  int local_size() const { return basis_size(degree_); }

  /// Scalar global indices of the local nodes of a triangle.
  std::span<const int> cell_dofs(int triangle) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(triangle) * local_size(),
            static_cast<std::size_t>(local_size())};
  }
  std::span<const Point2> dof_coords() const { return dof_coords_; }

  /// All (component-expanded) DoFs on the boundary, sorted.
  std::span<const int> boundary_dofs() const { return boundary_dofs_; }
  bool is_boundary_scalar_dof(int s) const { return scalar_on_boundary_[s]; }

 private:
  MeshPtr mesh_;
  int degree_;
  int components_;
  int scalar_dofs_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<Point2> dof_coords_;
  std::vector<int> boundary_dofs_;
  std::vector<bool> scalar_on_boundary_;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

SpacePtr build_function_space(MeshPtr mesh, int degree, int components);

/// Discrete function: coefficient vector on a space.
struct Field {
  SpacePtr space;
  Eigen::VectorXd coeffs;

  Field() = default;
  explicit Field(SpacePtr s) : space(std::move(s)), coeffs(Eigen::VectorXd::Zero(space->dof_count())) {}
  Field(SpacePtr s, Eigen::VectorXd c);
};

/// Point value and gradient; for scalars only the first component/row is set.
struct FieldSample {
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  Eigen::Matrix2d gradient = Eigen::Matrix2d::Zero();  // row c = grad of component c
};

FieldSample evaluate_field(const Field& field, const Point2& point);

/// Nodal interpolation. f maps Point2 to double (scalar spaces) or to
/// Eigen::Vector2d (vector spaces).
template <class F>
Field interpolate(const SpacePtr& space, F&& f) {
  Field out(space);
  const int ns = space->scalar_dof_count();
  const auto coords = space->dof_coords();
  using R = std::invoke_result_t<F&, const Point2&>;
  for (int s = 0; s < ns; ++s) {
    if constexpr (std::is_convertible_v<R, double>) {
      if (space->components() != 1) throw std::invalid_argument("scalar function on a vector space");
      out.coeffs[s] = f(coords[s]);
    } else {
      if (space->components() != 2) throw std::invalid_argument("vector function on a scalar space");
      const Eigen::Vector2d v = f(coords[s]);
      out.coeffs[s] = v.x();
      out.coeffs[ns + s] = v.y();
    }
  }
  return out;
}

}  // namespace afem
