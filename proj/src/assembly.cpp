#include "afem/assembly.hpp"

#include <stdexcept>

namespace afem {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseOperator from_triplets(int rows, int cols, const Triplets& t) {
  SparseOperator A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// Copies a scalar operator onto each diagonal block of a vector space.
SparseOperator block_diagonal(const SparseOperator& scalar, int components) {
  if (components == 1) return scalar;
  const int n = static_cast<int>(scalar.rows());
  Triplets t;
  t.reserve(static_cast<std::size_t>(scalar.nonZeros()) * components);
  for (int c = 0; c < components; ++c) {
    for (int k = 0; k < scalar.outerSize(); ++k) {
      for (SparseOperator::InnerIterator it(scalar, k); it; ++it) {
        t.emplace_back(c * n + it.row(), c * n + it.col(), it.value());
      }
    }
  }
  return from_triplets(components * n, components * n, t);
}

// Scalar bilinear form integrated with an exact rule of the given degree.
template <class Kernel>
SparseOperator scalar_form(const FunctionSpace& space, int quad_degree, Kernel&& kernel) {
  const TriMesh& mesh = space.mesh();
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const BasisTable tab = tabulate(space.degree(), rule);
  const int ls = tab.size;
  Triplets t;
  t.reserve(static_cast<std::size_t>(mesh.num_triangles()) * ls * ls);
  std::vector<Eigen::Vector2d> grads(ls);
  std::vector<double> local(static_cast<std::size_t>(ls) * ls);
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const ElementMap map = element_map(mesh, e);
    std::fill(local.begin(), local.end(), 0.0);
    for (int q = 0; q < tab.num_points; ++q) {
      const double wq = rule.weights[q] * std::abs(map.det);
      for (int i = 0; i < ls; ++i) grads[i] = map.physical_gradient(tab.ref_gradient(q, i));
      for (int i = 0; i < ls; ++i) {
        for (int j = 0; j < ls; ++j) {
          local[i * ls + j] += wq * kernel(tab.value(q, i), grads[i], tab.value(q, j), grads[j]);
        }
      }
    }
    const auto dofs = space.cell_dofs(e);
    for (int i = 0; i < ls; ++i) {
      for (int j = 0; j < ls; ++j) t.emplace_back(dofs[i], dofs[j], local[i * ls + j]);
    }
  }
  const int n = space.scalar_dof_count();
  return from_triplets(n, n, t);
}

// Shared element loop for the velocity-nonlinear forms. The callback gets
// the quadrature weight, basis values/physical gradients, and u, grad u at
// the point; it accumulates into a local 2*ls residual and (2*ls)^2 matrix.
template <class Kernel>
NonlinearAssembly nonlinear_loop(const Field& u, bool want_residual, Kernel&& kernel) {
  const FunctionSpace& space = *u.space;
  if (space.components() != 2) throw std::invalid_argument("nonlinear forms need a vector field");
  const TriMesh& mesh = space.mesh();
  const QuadratureRule& rule = quadrature_rule(kAssemblyQuadratureDegree);
  const BasisTable tab = tabulate(space.degree(), rule);
  const int ls = tab.size;
  const int nl = 2 * ls;
  const int ns = space.scalar_dof_count();

  NonlinearAssembly out;
  out.residual = Eigen::VectorXd::Zero(space.dof_count());
  Triplets t;
  t.reserve(static_cast<std::size_t>(mesh.num_triangles()) * nl * nl);
  std::vector<Eigen::Vector2d> grads(ls);
  std::vector<double> vals(ls);
  Eigen::VectorXd local_r(nl);
  Eigen::MatrixXd local_j(nl, nl);
  std::vector<double> uc(nl);

  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const ElementMap map = element_map(mesh, e);
    const auto dofs = space.cell_dofs(e);
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < ls; ++i) uc[c * ls + i] = u.coeffs[c * ns + dofs[i]];
    }
    local_r.setZero();
    local_j.setZero();
    for (int q = 0; q < tab.num_points; ++q) {
      const double wq = rule.weights[q] * std::abs(map.det);
      Eigen::Vector2d uq = Eigen::Vector2d::Zero();
      Eigen::Matrix2d gu = Eigen::Matrix2d::Zero();  // gu(c, d) = d u_c / d x_d
      for (int i = 0; i < ls; ++i) {
        vals[i] = tab.value(q, i);
        grads[i] = map.physical_gradient(tab.ref_gradient(q, i));
        for (int c = 0; c < 2; ++c) {
          uq[c] += uc[c * ls + i] * vals[i];
          gu.row(c) += uc[c * ls + i] * grads[i].transpose();
        }
      }
      kernel(wq, vals, grads, uq, gu, local_r, local_j);
    }
    for (int a = 0; a < nl; ++a) {
      const int ga = (a / ls) * ns + dofs[a % ls];
      if (want_residual) out.residual[ga] += local_r[a];
      for (int b = 0; b < nl; ++b) {
        t.emplace_back(ga, (b / ls) * ns + dofs[b % ls], local_j(a, b));
      }
    }
  }
  out.jacobian = from_triplets(space.dof_count(), space.dof_count(), t);
  return out;
}

}  // namespace

SparseOperator assemble_mass(const FunctionSpace& space) {
  const auto scalar = scalar_form(space, 2 * space.degree(),
                                  [](double vi, const auto&, double vj, const auto&) { return vi * vj; });
  return block_diagonal(scalar, space.components());
}

SparseOperator assemble_stiffness(const FunctionSpace& space) {
  const auto scalar =
      scalar_form(space, std::max(2 * space.degree() - 2, 1),
                  [](double, const Eigen::Vector2d& gi, double, const Eigen::Vector2d& gj) { return gi.dot(gj); });
  return block_diagonal(scalar, space.components());
}

SparseOperator assemble_divergence(const FunctionSpace& velocity, const FunctionSpace& scalar) {
  if (velocity.mesh_ptr() != scalar.mesh_ptr() && &velocity.mesh() != &scalar.mesh()) {
    throw std::invalid_argument("divergence operator needs spaces on one mesh");
  }
  if (velocity.components() != 2 || scalar.components() != 1) {
    throw std::invalid_argument("divergence operator maps a vector space to a scalar space");
  }
  const TriMesh& mesh = velocity.mesh();
  const QuadratureRule& rule = quadrature_rule(velocity.degree() - 1 + scalar.degree());
  const BasisTable vt = tabulate(velocity.degree(), rule);
  const BasisTable st = tabulate(scalar.degree(), rule);
  const int nv = velocity.scalar_dof_count();
  Triplets t;
  t.reserve(static_cast<std::size_t>(mesh.num_triangles()) * st.size * vt.size * 2);
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const ElementMap map = element_map(mesh, e);
    const auto vd = velocity.cell_dofs(e);
    const auto sd = scalar.cell_dofs(e);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(st.size, 2 * vt.size);
    for (int q = 0; q < vt.num_points; ++q) {
      const double wq = rule.weights[q] * std::abs(map.det);
      for (int j = 0; j < vt.size; ++j) {
        const Eigen::Vector2d g = map.physical_gradient(vt.ref_gradient(q, j));
        for (int i = 0; i < st.size; ++i) {
          local(i, j) += wq * g.x() * st.value(q, i);
          local(i, vt.size + j) += wq * g.y() * st.value(q, i);
        }
      }
    }
    for (int i = 0; i < st.size; ++i) {
      for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < vt.size; ++j) t.emplace_back(sd[i], c * nv + vd[j], local(i, c * vt.size + j));
      }
    }
  }
  return from_triplets(scalar.dof_count(), velocity.dof_count(), t);
}

Eigen::VectorXd assemble_integrals(const FunctionSpace& scalar) {
  const TriMesh& mesh = scalar.mesh();
  const QuadratureRule& rule = quadrature_rule(scalar.degree());
  const BasisTable tab = tabulate(scalar.degree(), rule);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(scalar.scalar_dof_count());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const double area = std::abs(element_map(mesh, e).det);
    const auto dofs = scalar.cell_dofs(e);
    for (int q = 0; q < tab.num_points; ++q) {
      for (int i = 0; i < tab.size; ++i) m[dofs[i]] += rule.weights[q] * area * tab.value(q, i);
    }
  }
  return m;
}

Eigen::VectorXd assemble_load(const FunctionSpace& velocity, const VectorFunction& f) {
  const TriMesh& mesh = velocity.mesh();
  const QuadratureRule& rule = quadrature_rule(kAssemblyQuadratureDegree);
  const BasisTable tab = tabulate(velocity.degree(), rule);
  const int ns = velocity.scalar_dof_count();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(velocity.dof_count());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const ElementMap map = element_map(mesh, e);
    const auto dofs = velocity.cell_dofs(e);
    for (int q = 0; q < tab.num_points; ++q) {
      const double wq = rule.weights[q] * std::abs(map.det);
      const Eigen::Vector2d fq = f(map.to_physical(rule.points[q]));
      for (int i = 0; i < tab.size; ++i) {
        b[dofs[i]] += wq * fq.x() * tab.value(q, i);
        b[ns + dofs[i]] += wq * fq.y() * tab.value(q, i);
      }
    }
  }
  return b;
}

SparseOperator assemble_trilinear_matrix(const Field& advecting) {
  const int ls = advecting.space->local_size();
  auto result = nonlinear_loop(
      advecting, false,
      [ls](double wq, const std::vector<double>& v, const std::vector<Eigen::Vector2d>& g,
           const Eigen::Vector2d& uq, const Eigen::Matrix2d&, Eigen::VectorXd&, Eigen::MatrixXd& J) {
        for (int a = 0; a < ls; ++a) {
          const double ua_grad = uq.dot(g[a]);
          for (int b = 0; b < ls; ++b) {
            // b(u, phi_b e_c, phi_a e_c) = 1/2 (u.grad phi_b) phi_a - 1/2 (u.grad phi_a) phi_b
            const double val = 0.5 * wq * (uq.dot(g[b]) * v[a] - ua_grad * v[b]);
            J(a, b) += val;
            J(ls + a, ls + b) += val;
          }
        }
      });
  return std::move(result.jacobian);
}

NonlinearAssembly assemble_cubic_residual_and_jacobian(const Field& u) {
  return assemble_nonlinear_terms(u, 0.0, 1.0);
}

NonlinearAssembly assemble_nonlinear_terms(const Field& u, double nu, double lambda) {
  const int ls = u.space->local_size();
  return nonlinear_loop(
      u, true,
      [ls, nu, lambda](double wq, const std::vector<double>& v, const std::vector<Eigen::Vector2d>& g,
                       const Eigen::Vector2d& uq, const Eigen::Matrix2d& gu, Eigen::VectorXd& r,
                       Eigen::MatrixXd& J) {
        const double u2 = uq.squaredNorm();
        const Eigen::Vector2d adv = gu * uq;  // (u.grad) u
        for (int a = 0; a < ls; ++a) {
          const double ugrad_a = uq.dot(g[a]);
          for (int c = 0; c < 2; ++c) {
            r[c * ls + a] += wq * (nu * 0.5 * (v[a] * adv[c] - ugrad_a * uq[c]) + lambda * u2 * uq[c] * v[a]);
          }
          for (int b = 0; b < ls; ++b) {
            const double vv = v[a] * v[b];
            // b(u, phi_b e_d, phi_a e_c): diagonal in (c, d)
            const double conv_diag = 0.5 * (v[a] * uq.dot(g[b]) - ugrad_a * v[b]);
            for (int c = 0; c < 2; ++c) {
              for (int d = 0; d < 2; ++d) {
                // b(phi_b e_d, u, phi_a e_c) = 1/2 phi_a phi_b d_d u_c - 1/2 phi_b d_d phi_a u_c
                double conv = 0.5 * (vv * gu(c, d) - v[b] * g[a][d] * uq[c]);
                if (c == d) conv += conv_diag;
                const double cubic = vv * ((c == d ? u2 : 0.0) + 2 * uq[c] * uq[d]);
                J(c * ls + a, d * ls + b) += wq * (nu * conv + lambda * cubic);
              }
            }
          }
        }
      });
}

Discretization::Discretization(int n)
    : mesh_(std::make_shared<const TriMesh>(TriMesh::unit_square(n))),
      velocity_(build_function_space(mesh_, 2, 2)),
      pressure_(build_function_space(mesh_, 1, 1)) {
  layout_.vel = velocity_->dof_count();
  layout_.pres = pressure_->dof_count();
  mass_ = assemble_mass(*velocity_);
  stiffness_ = assemble_stiffness(*velocity_);
  divergence_ = assemble_divergence(*velocity_, *pressure_);
  pressure_mass_ = assemble_mass(*pressure_);
  pressure_integrals_ = assemble_integrals(*pressure_);
  for (int block : {layout_.u(), layout_.w()}) {
    for (int d : velocity_->boundary_dofs()) dirichlet_.push_back(block + d);
  }
}

}  // namespace afem
