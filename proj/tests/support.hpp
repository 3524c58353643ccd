#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "afem/assembly.hpp"
#include "afem/manufactured.hpp"

namespace afem::testing {

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = U(rng);
  return v;
}

/// Nodal interpolants of all four exact fields at time t, multipliers zero.
inline Eigen::VectorXd interpolate_state(const Discretization& d, const ManufacturedSolution& ms, double t) {
  const BlockLayout& L = d.layout();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.size());
  x.segment(L.u(), L.vel) = interpolate(d.velocity_space(), [&](const Point2& p) { return ms.u(p, t); }).coeffs;
  x.segment(L.w(), L.vel) = interpolate(d.velocity_space(), [&](const Point2& p) { return ms.w(p, t); }).coeffs;
  x.segment(L.phi(), L.pres) = interpolate(d.pressure_space(), [&](const Point2& p) { return ms.phi(p, t); }).coeffs;
  x.segment(L.p(), L.pres) = interpolate(d.pressure_space(), [&](const Point2& p) { return ms.p(p, t); }).coeffs;
  return x;
}

/// Central-difference directional derivative of a residual map.
template <class F>
Eigen::VectorXd fd_directional(F&& residual, const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double h) {
  return (residual(x + h * dir) - residual(x - h * dir)) / (2 * h);
}

}  // namespace afem::testing
