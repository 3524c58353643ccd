#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "afem/fem.hpp"
#include "afem/mesh.hpp"

namespace afem {

using SparseOperator = Eigen::SparseMatrix<double>;
using VectorFunction = std::function<Eigen::Vector2d(const Point2&)>;
using ScalarFunction = std::function<double(const Point2&)>;

/// M_ij = (psi_j, psi_i); block diagonal for vector spaces.
SparseOperator assemble_mass(const FunctionSpace& space);

/// K_ij = (grad psi_j, grad psi_i); block diagonal for vector spaces.
SparseOperator assemble_stiffness(const FunctionSpace& space);

/// B_ij = (div psi_j, q_i): rows are scalar test functions, columns velocity DoFs.
SparseOperator assemble_divergence(const FunctionSpace& velocity, const FunctionSpace& scalar);

/// m_i = integral of q_i over the domain.
Eigen::VectorXd assemble_integrals(const FunctionSpace& scalar);

/// (f, psi_i) for a vector space.
Eigen::VectorXd assemble_load(const FunctionSpace& velocity, const VectorFunction& f);

/// N(u)_ij = b(u, psi_j, psi_i) with b(u,v,w) = 1/2 (u.grad v, w) - 1/2 (u.grad w, v).
SparseOperator assemble_trilinear_matrix(const Field& advecting);

struct NonlinearAssembly {
  Eigen::VectorXd residual;
  SparseOperator jacobian;
};

/// r_i = (|u|^2 u, psi_i) and its derivative
/// J_ij = (|u|^2 psi_j + 2 (u.psi_j) u, psi_i).
NonlinearAssembly assemble_cubic_residual_and_jacobian(const Field& u);

/// nu * b(u, u, psi_i) + lambda * (|u|^2 u, psi_i) together with the exact
/// derivative in u, assembled in one element pass.
NonlinearAssembly assemble_nonlinear_terms(const Field& u, double nu, double lambda);

/// Unknown layout [u | w | phi | p | xi_phi | xi_p]. The two trailing scalars
/// are the multipliers of the mean-value rows for phi and p.
struct BlockLayout {
  int vel = 0;
  int pres = 0;

  int u() const { return 0; }
  int w() const { return vel; }
  int phi() const { return 2 * vel; }
  int p() const { return 2 * vel + pres; }
  int xi_phi() const { return 2 * vel + 2 * pres; }
  int xi_p() const { return xi_phi() + 1; }
  int size() const { return xi_p() + 1; }
};

/// Taylor-Hood discretisation of the unit square plus the constant operators
/// shared by every system assembled on it.
class Discretization {
 public:
  explicit Discretization(int n);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const SpacePtr& velocity_space() const { return velocity_; }
  const SpacePtr& pressure_space() const { return pressure_; }
  const BlockLayout& layout() const { return layout_; }

  const SparseOperator& velocity_mass() const { return mass_; }
  const SparseOperator& velocity_stiffness() const { return stiffness_; }
  const SparseOperator& divergence() const { return divergence_; }
  const SparseOperator& pressure_mass() const { return pressure_mass_; }
  const Eigen::VectorXd& pressure_integrals() const { return pressure_integrals_; }

  /// Boundary DoFs of the u and w blocks in block numbering.
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }

  Field u(const Eigen::VectorXd& x) const { return {velocity_, x.segment(layout_.u(), layout_.vel)}; }
  Field w(const Eigen::VectorXd& x) const { return {velocity_, x.segment(layout_.w(), layout_.vel)}; }
  Field phi(const Eigen::VectorXd& x) const {
    return {pressure_, x.segment(layout_.phi(), layout_.pres)};
  }
  Field p(const Eigen::VectorXd& x) const { return {pressure_, x.segment(layout_.p(), layout_.pres)}; }

  double l2_norm_squared(const Eigen::VectorXd& velocity_coeffs) const {
    return velocity_coeffs.dot(mass_ * velocity_coeffs);
  }

 private:
  MeshPtr mesh_;
  SpacePtr velocity_;
  SpacePtr pressure_;
  BlockLayout layout_;
  SparseOperator mass_, stiffness_, divergence_, pressure_mass_;
  Eigen::VectorXd pressure_integrals_;
  std::vector<int> dirichlet_;
};

}  // namespace afem
