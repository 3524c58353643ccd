#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "afem/assembly.hpp"
#include "afem/manufactured.hpp"

namespace afem {

/// Quadrature degree of the error integrals.
inline constexpr int kErrorQuadratureDegree = kAssemblyQuadratureDegree + 2;

struct ErrorPair {
  double l2 = 0;
  double h1 = 0;  // full H1 norm, sqrt(l2^2 + |.|_1^2)
};

using MatrixFunction = std::function<Eigen::Matrix2d(const Point2&)>;
using GradientFunction = std::function<Eigen::Vector2d(const Point2&)>;

ErrorPair vector_error(const Field& field, const VectorFunction& value, const MatrixFunction& gradient);

/// With mean_free set, the mean of the pointwise difference is removed
/// before the L2 part is taken (pressure-type fields).
ErrorPair scalar_error(const Field& field, const ScalarFunction& value, const GradientFunction& gradient,
                       bool mean_free);

enum class Component { u = 0, w = 1, phi = 2, p = 3 };
inline constexpr std::array<const char*, 4> kComponentNames{"u", "w", "phi", "p"};

struct FieldErrors {
  std::array<ErrorPair, 4> e;
  const ErrorPair& operator[](Component c) const { return e[static_cast<int>(c)]; }
};

/// Errors of all four fields of a block vector against ms at time t; phi
/// and p are compared up to constants.
FieldErrors solution_errors(const Discretization& disc, const Eigen::VectorXd& x, const ManufacturedSolution& ms,
                            double t);

enum class Norm { l2, h1 };

struct ErrorRow {
  double step = 0;  // h or dt
  FieldErrors errors;
};

/// Rows ordered by decreasing step; rates between consecutive rows.
struct ErrorReport {
  std::string step_label = "1/h";
  std::vector<ErrorRow> rows;

  double value(std::size_t row, Component c, Norm n) const;
  /// log(e_{r-1}/e_r)/log(step_{r-1}/step_r); NaN for the first row.
  double rate(std::size_t row, Component c, Norm n) const;
};

double convergence_rate(double e_coarse, double e_fine, double step_coarse, double step_fine);

}  // namespace afem
