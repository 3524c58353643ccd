#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "afem/scheme.hpp"

namespace afem {

using SpaceTimeScalar = std::function<double(const Point2&, double)>;
using SpaceTimeMatrix = std::function<Eigen::Matrix2d(const Point2&, double)>;

/// Closed-form exact fields with the derivatives the source term and the
/// error norms need. Gradients of vector fields have row c = grad of
/// component c.
struct ManufacturedSolution {
  std::string name;
  SpaceTimeVector u, u_t, lap_u;
  SpaceTimeMatrix grad_u;
  SpaceTimeVector w, lap_w;
  SpaceTimeMatrix grad_w;
  SpaceTimeScalar phi, p;
  SpaceTimeVector grad_phi, grad_p;

  /// Fields frozen at time t.
  ExactFields at(double t) const;
};

/// Trigonometric velocity with the cubic harmonic phi and
/// p = -cos(2 pi x) - cos(2 pi y); time independent.
ManufacturedSolution projection_solution();

/// Same u, w, phi scaled by exp(2t), with p = sin(3 pi^2 x) cos(3 pi^2 y) exp(-t).
ManufacturedSolution time_dependent_solution();

/// time_dependent_solution with both time factors removed.
ManufacturedSolution steady_solution();

/// Quadratic divergence-free u with linear phi and p, reproduced exactly by
/// the discrete spaces.
ManufacturedSolution polynomial_solution();

/// f = u_t - mu Lap u - gamma Lap w + nu (u.grad)u + rho u + lambda |u|^2 u + grad p.
SpaceTimeVector source_term(const ManufacturedSolution& ms, const ModelParams& params);

/// Source plus Dirichlet traces of u and w taken from ms.
ProblemData manufactured_problem(const ManufacturedSolution& ms, const ModelParams& params);

}  // namespace afem
