#include <stdexcept>
#include <string>

#include "afem/scheme.hpp"

namespace afem {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& t, const SparseOperator& A, int row0, int col0, double scale, bool transpose = false) {
  if (scale == 0.0) return;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(A, k); it; ++it) {
      const int r = static_cast<int>(transpose ? it.col() : it.row());
      const int c = static_cast<int>(transpose ? it.row() : it.col());
      t.emplace_back(row0 + r, col0 + c, scale * it.value());
    }
  }
}

void add_column(Triplets& t, const Eigen::VectorXd& v, int row0, int col) {
  for (int i = 0; i < v.size(); ++i) t.emplace_back(row0 + i, col, v[i]);
}

void add_row(Triplets& t, const Eigen::VectorXd& v, int row, int col0) {
  for (int i = 0; i < v.size(); ++i) t.emplace_back(row, col0 + i, v[i]);
}

// Rows/columns shared by the scheme and projection systems: the w-definition,
// both divergence constraints and the two mean-value rows.
void add_constraint_blocks(Triplets& t, const Discretization& d) {
  const BlockLayout& L = d.layout();
  const SparseOperator& M = d.velocity_mass();
  const SparseOperator& K = d.velocity_stiffness();
  const SparseOperator& B = d.divergence();
  const Eigen::VectorXd& m = d.pressure_integrals();
  add_block(t, M, L.w(), L.w(), 1.0);
  add_block(t, K, L.w(), L.u(), -1.0);
  add_block(t, B, L.w(), L.phi(), -1.0, true);
  add_block(t, B, L.phi(), L.w(), 1.0);
  add_column(t, m, L.phi(), L.xi_phi());
  add_block(t, B, L.p(), L.u(), 1.0);
  add_column(t, m, L.p(), L.xi_p());
  add_row(t, m, L.xi_phi(), L.phi());
  add_row(t, m, L.xi_p(), L.p());
}

// Residual rows of the constraint blocks at x.
void constraint_residual(const Discretization& d, const Eigen::VectorXd& x, Eigen::VectorXd& r) {
  const BlockLayout& L = d.layout();
  const auto U = x.segment(L.u(), L.vel);
  const auto W = x.segment(L.w(), L.vel);
  const auto Phi = x.segment(L.phi(), L.pres);
  const auto P = x.segment(L.p(), L.pres);
  const SparseOperator& B = d.divergence();
  const Eigen::VectorXd& m = d.pressure_integrals();
  r.segment(L.w(), L.vel) = d.velocity_mass() * W - B.transpose() * Phi - d.velocity_stiffness() * U;
  r.segment(L.phi(), L.pres) = B * W + m * x[L.xi_phi()];
  r.segment(L.p(), L.pres) = B * U + m * x[L.xi_p()];
  r[L.xi_phi()] = m.dot(Phi);
  r[L.xi_p()] = m.dot(P);
}

SparseOperator to_matrix(int n, const Triplets& t) {
  SparseOperator A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Eigen::VectorXd boundary_target(const Discretization& d, const SpaceTimeVector& gu, const SpaceTimeVector& gw,
                                double t) {
  const BlockLayout& L = d.layout();
  Eigen::VectorXd target = Eigen::VectorXd::Zero(L.size());
  const FunctionSpace& V = *d.velocity_space();
  const int ns = V.scalar_dof_count();
  const auto coords = V.dof_coords();
  for (int s = 0; s < ns; ++s) {
    if (!V.is_boundary_scalar_dof(s)) continue;
    if (gu) {
      const Eigen::Vector2d g = gu(coords[s], t);
      target[L.u() + s] = g.x();
      target[L.u() + ns + s] = g.y();
    }
    if (gw) {
      const Eigen::Vector2d g = gw(coords[s], t);
      target[L.w() + s] = g.x();
      target[L.w() + ns + s] = g.y();
    }
  }
  return target;
}

}  // namespace

void apply_dirichlet(SparseOperator& J, Eigen::VectorXd& r, const std::vector<int>& dofs, const Eigen::VectorXd& state,
                     const Eigen::VectorXd& target) {
  std::vector<char> fixed(J.rows(), 0);
  for (int d : dofs) fixed[d] = 1;
  Eigen::VectorXd lifted = r;
  for (int k = 0; k < J.outerSize(); ++k) {
    const bool col_fixed = fixed[k];
    const double shift = col_fixed ? state[k] - target[k] : 0.0;
    for (SparseOperator::InnerIterator it(J, k); it; ++it) {
      const auto row = it.row();
      if (fixed[row]) {
        it.valueRef() = (row == k) ? 1.0 : 0.0;
      } else if (col_fixed) {
        lifted[row] -= it.value() * shift;
        it.valueRef() = 0.0;
      }
    }
  }
  for (int d : dofs) {
    if (J.coeff(d, d) != 1.0) J.coeffRef(d, d) = 1.0;
    lifted[d] = state[d] - target[d];
  }
  J.makeCompressed();
  r = std::move(lifted);
}

SchemeStepAssembler::SchemeStepAssembler(const Discretization& disc, const SolutionHistory& history,
                                         const DlnStepContext& ctx, const ModelParams& params, const ProblemData& data)
    : disc_(disc), ctx_(ctx), params_(params), t_next_(history.t_curr + ctx.k_curr) {
  const BlockLayout& L = disc.layout();
  if (history.curr.size() != L.size() || (ctx.beta[0] != 0.0 && history.prev.size() != L.size()) ||
      (ctx.alpha[0] != 0.0 && history.prev.size() != L.size())) {
    throw std::invalid_argument("solution history does not match the discretisation layout");
  }
  const Eigen::VectorXd prev = history.prev.size() == L.size() ? history.prev : Eigen::VectorXd::Zero(L.size());
  const Eigen::VectorXd& curr = history.curr;
  auto combine = [&](const std::array<double, 3>& c, int off, int len) -> Eigen::VectorXd {
    return c[0] * prev.segment(off, len) + c[1] * curr.segment(off, len);
  };
  u_alpha_hist_ = combine(ctx.alpha, L.u(), L.vel);
  u_beta_hist_ = combine(ctx.beta, L.u(), L.vel);
  w_beta_hist_ = combine(ctx.beta, L.w(), L.vel);
  p_beta_hist_ = combine(ctx.beta, L.p(), L.pres);

  const double t_beta = ctx.beta_time(history.t_prev, history.t_curr, t_next_);
  if (data.source) {
    load_ = assemble_load(*disc.velocity_space(),
                          [&](const Point2& x) { return data.source(x, t_beta); });
  } else {
    load_ = Eigen::VectorXd::Zero(L.vel);
  }
  target_ = boundary_target(disc, data.u_boundary, data.w_boundary, t_next_);
}

Eigen::VectorXd SchemeStepAssembler::with_boundary_values(Eigen::VectorXd x) const {
  for (int d : disc_.dirichlet_dofs()) x[d] = target_[d];
  return x;
}

BlockSystem SchemeStepAssembler::assemble(const Eigen::VectorXd& x) const {
  const Discretization& d = disc_;
  const BlockLayout& L = d.layout();
  if (x.size() != L.size()) throw std::invalid_argument("iterate length does not match the block layout");
  const SparseOperator& M = d.velocity_mass();
  const SparseOperator& K = d.velocity_stiffness();
  const SparseOperator& B = d.divergence();
  const auto& al = ctx_.alpha;
  const auto& be = ctx_.beta;
  const double b2 = be[2];
  const double kh = ctx_.k_hat;

  const Eigen::VectorXd Ua = al[2] * x.segment(L.u(), L.vel) + u_alpha_hist_;
  const Eigen::VectorXd Ub = b2 * x.segment(L.u(), L.vel) + u_beta_hist_;
  const Eigen::VectorXd Wb = b2 * x.segment(L.w(), L.vel) + w_beta_hist_;
  const Eigen::VectorXd Pb = b2 * x.segment(L.p(), L.pres) + p_beta_hist_;

  const bool nonlinear = params_.nu != 0.0 || params_.lambda != 0.0;
  NonlinearAssembly nl;
  if (nonlinear) nl = assemble_nonlinear_terms(Field(d.velocity_space(), Ub), params_.nu, params_.lambda);

  BlockSystem sys;
  sys.residual.resize(L.size());
  Eigen::VectorXd ru = (1.0 / kh) * (M * Ua) + params_.mu * (K * Ub) + params_.gamma * (K * Wb) +
                       params_.rho * (M * Ub) - B.transpose() * Pb - load_;
  if (nonlinear) ru += nl.residual;
  sys.residual.segment(L.u(), L.vel) = ru;
  constraint_residual(d, x, sys.residual);

  Triplets t;
  t.reserve(static_cast<std::size_t>(3 * M.nonZeros() + 4 * K.nonZeros() + 4 * B.nonZeros() +
                                     (nonlinear ? nl.jacobian.nonZeros() : 0) + 4 * L.pres));
  add_block(t, M, L.u(), L.u(), al[2] / kh + b2 * params_.rho);
  add_block(t, K, L.u(), L.u(), b2 * params_.mu);
  if (nonlinear) add_block(t, nl.jacobian, L.u(), L.u(), b2);
  add_block(t, K, L.u(), L.w(), b2 * params_.gamma);
  add_block(t, B, L.u(), L.p(), -b2, true);
  add_constraint_blocks(t, d);
  sys.jacobian = to_matrix(L.size(), t);

  sys.dirichlet = d.dirichlet_dofs();
  apply_dirichlet(sys.jacobian, sys.residual, sys.dirichlet, x, target_);
  return sys;
}

BlockSystem assemble_scheme_system(const Discretization& disc, const SolutionHistory& history,
                                   const DlnStepContext& ctx, const ModelParams& params, const ProblemData& data,
                                   const Eigen::VectorXd& guess) {
  if (!history.complete() && ctx.alpha[0] != 0.0) {
    throw std::invalid_argument("DLN step needs two history levels");
  }
  SchemeStepAssembler assembler(disc, history, ctx, params, data);
  return assembler.assemble(assembler.with_boundary_values(guess));
}

SparseOperator projection_matrix(const Discretization& d, double mu, double gamma) {
  const BlockLayout& L = d.layout();
  Triplets t;
  add_block(t, d.velocity_stiffness(), L.u(), L.u(), mu);
  add_block(t, d.velocity_stiffness(), L.u(), L.w(), gamma);
  add_block(t, d.divergence(), L.u(), L.p(), -1.0, true);
  add_constraint_blocks(t, d);
  return to_matrix(L.size(), t);
}

BlockSystem assemble_discrete_projection_system(const Discretization& d, const Eigen::VectorXd& data, double mu,
                                                double gamma) {
  const BlockLayout& L = d.layout();
  if (data.size() != L.size()) throw std::invalid_argument("projection data does not match the block layout");
  BlockSystem sys;
  sys.jacobian = projection_matrix(d, mu, gamma);
  // Residual at the zero iterate is -(J * data) restricted to the u and w rows.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L.size());
  const Eigen::VectorXd full = sys.jacobian * data;
  rhs.segment(L.u(), 2 * L.vel) = full.segment(L.u(), 2 * L.vel);
  sys.residual = -rhs;
  Eigen::VectorXd target = Eigen::VectorXd::Zero(L.size());
  for (int dof : d.dirichlet_dofs()) target[dof] = data[dof];
  sys.dirichlet = d.dirichlet_dofs();
  apply_dirichlet(sys.jacobian, sys.residual, sys.dirichlet, Eigen::VectorXd::Zero(L.size()), target);
  return sys;
}

BlockSystem assemble_stokes_projection_system(const Discretization& d, const ExactFields& exact, double mu,
                                              double gamma) {
  const BlockLayout& L = d.layout();
  const FunctionSpace& V = *d.velocity_space();

  // Right sides (exact fields tested against the velocity basis).
  Eigen::VectorXd fu = Eigen::VectorXd::Zero(L.vel), fw = Eigen::VectorXd::Zero(L.vel);
  {
    const TriMesh& mesh = V.mesh();
    const QuadratureRule& rule = quadrature_rule(kAssemblyQuadratureDegree);
    const BasisTable tab = tabulate(V.degree(), rule);
    const int ns = V.scalar_dof_count();
    for (int e = 0; e < mesh.num_triangles(); ++e) {
      const ElementMap map = element_map(mesh, e);
      const auto dofs = V.cell_dofs(e);
      for (int q = 0; q < tab.num_points; ++q) {
        const double wq = rule.weights[q] * std::abs(map.det);
        const Point2 xq = map.to_physical(rule.points[q]);
        const Eigen::Matrix2d gu = exact.grad_u(xq);
        const Eigen::Matrix2d gw = exact.grad_w(xq);
        const Eigen::Vector2d wv = exact.w(xq);
        const double pv = exact.p(xq), phiv = exact.phi(xq);
        for (int i = 0; i < tab.size; ++i) {
          const double v = tab.value(q, i);
          const Eigen::Vector2d g = map.physical_gradient(tab.ref_gradient(q, i));
          for (int c = 0; c < 2; ++c) {
            const int row = c * ns + dofs[i];
            const double grad_u_dot = gu.row(c).dot(g);
            fu[row] += wq * (mu * grad_u_dot + gamma * gw.row(c).dot(g) - pv * g[c]);
            fw[row] += wq * (wv[c] * v - phiv * g[c] - grad_u_dot);
          }
        }
      }
    }
  }

  BlockSystem sys;
  sys.jacobian = projection_matrix(d, mu, gamma);
  sys.residual = Eigen::VectorXd::Zero(L.size());
  sys.residual.segment(L.u(), L.vel) = -fu;
  sys.residual.segment(L.w(), L.vel) = -fw;

  const Eigen::VectorXd target =
      boundary_target(d, [&](const Point2& x, double) { return exact.u(x); },
                      [&](const Point2& x, double) { return exact.w(x); }, 0.0);
  sys.dirichlet = d.dirichlet_dofs();
  apply_dirichlet(sys.jacobian, sys.residual, sys.dirichlet, Eigen::VectorXd::Zero(L.size()), target);
  return sys;
}

std::vector<MeanConstraint> mean_constraints(const BlockLayout& L) {
  return {{L.xi_phi(), L.phi(), L.pres}, {L.xi_p(), L.p(), L.pres}};
}

DivergenceResidual divergence_residual(const Discretization& d, const Eigen::VectorXd& x) {
  const BlockLayout& L = d.layout();
  return {(d.divergence() * x.segment(L.u(), L.vel)).norm(), (d.divergence() * x.segment(L.w(), L.vel)).norm()};
}

}  // namespace afem
