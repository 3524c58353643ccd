#include "afem/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace afem {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec = Eigen::Vector2d;
using Mat = Eigen::Matrix2d;

Vec trig_u(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  return {(c2x - 1) * s2y, -s2x * c2y};
}

Mat trig_grad_u(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  Mat g;
  g << -2 * kPi * s2x * s2y, 2 * kPi * (c2x - 1) * c2y,
       -2 * kPi * c2x * c2y, 2 * kPi * s2x * s2y;
  return g;
}

Vec trig_lap_u(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  const double pi2 = kPi * kPi;
  return {-8 * pi2 * c2x * s2y + 4 * pi2 * s2y, 8 * pi2 * s2x * c2y};
}

Vec trig_w(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  const double pi2 = kPi * kPi;
  return {-3 * x * x + 3 * y * y + 8 * pi2 * s2y * c2x - 4 * pi2 * s2y, 6 * x * y - 8 * pi2 * s2x * c2y};
}

Mat trig_grad_w(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  const double pi3 = kPi * kPi * kPi;
  Mat g;
  g << -6 * x - 16 * pi3 * s2y * s2x, 6 * y + 16 * pi3 * c2y * c2x - 8 * pi3 * c2y,
       6 * y - 16 * pi3 * c2x * c2y, 6 * x + 16 * pi3 * s2x * s2y;
  return g;
}

Vec trig_lap_w(double x, double y) {
  const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
  const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);
  const double pi4 = kPi * kPi * kPi * kPi;
  return {-64 * pi4 * s2y * c2x + 16 * pi4 * s2y, 64 * pi4 * s2x * c2y};
}

double cubic_phi(double x, double y) { return x * x * x - 3 * x * y * y; }
Vec cubic_grad_phi(double x, double y) { return {3 * x * x - 3 * y * y, -6 * x * y}; }

// Fills u, w, phi and derivatives from the trigonometric fields times a(t),
// with da the derivative of a.
void set_trig_fields(ManufacturedSolution& ms, std::function<double(double)> a, std::function<double(double)> da) {
  ms.u = [a](const Point2& x, double t) -> Vec { return a(t) * trig_u(x.x(), x.y()); };
  ms.u_t = [da](const Point2& x, double t) -> Vec { return da(t) * trig_u(x.x(), x.y()); };
  ms.grad_u = [a](const Point2& x, double t) -> Mat { return a(t) * trig_grad_u(x.x(), x.y()); };
  ms.lap_u = [a](const Point2& x, double t) -> Vec { return a(t) * trig_lap_u(x.x(), x.y()); };
  ms.w = [a](const Point2& x, double t) -> Vec { return a(t) * trig_w(x.x(), x.y()); };
  ms.grad_w = [a](const Point2& x, double t) -> Mat { return a(t) * trig_grad_w(x.x(), x.y()); };
  ms.lap_w = [a](const Point2& x, double t) -> Vec { return a(t) * trig_lap_w(x.x(), x.y()); };
  ms.phi = [a](const Point2& x, double t) { return a(t) * cubic_phi(x.x(), x.y()); };
  ms.grad_phi = [a](const Point2& x, double t) -> Vec { return a(t) * cubic_grad_phi(x.x(), x.y()); };
}

}  // namespace

ExactFields ManufacturedSolution::at(double t) const {
  ExactFields e;
  e.u = [f = u, t](const Point2& x) { return f(x, t); };
  e.w = [f = w, t](const Point2& x) { return f(x, t); };
  e.grad_u = [f = grad_u, t](const Point2& x) { return f(x, t); };
  e.grad_w = [f = grad_w, t](const Point2& x) { return f(x, t); };
  e.phi = [f = phi, t](const Point2& x) { return f(x, t); };
  e.p = [f = p, t](const Point2& x) { return f(x, t); };
  return e;
}

ManufacturedSolution projection_solution() {
  ManufacturedSolution ms;
  ms.name = "projection";
  set_trig_fields(ms, [](double) { return 1.0; }, [](double) { return 0.0; });
  ms.p = [](const Point2& x, double) { return -std::cos(2 * kPi * x.x()) - std::cos(2 * kPi * x.y()); };
  ms.grad_p = [](const Point2& x, double) -> Vec {
    return {2 * kPi * std::sin(2 * kPi * x.x()), 2 * kPi * std::sin(2 * kPi * x.y())};
  };
  return ms;
}

namespace {

ManufacturedSolution oscillating_pressure_solution(bool with_time) {
  ManufacturedSolution ms;
  ms.name = with_time ? "time-dependent" : "steady";
  if (with_time) {
    set_trig_fields(ms, [](double t) { return std::exp(2 * t); }, [](double t) { return 2 * std::exp(2 * t); });
  } else {
    set_trig_fields(ms, [](double) { return 1.0; }, [](double) { return 0.0; });
  }
  const double k = 3 * kPi * kPi;
  ms.p = [k, with_time](const Point2& x, double t) {
    return std::sin(k * x.x()) * std::cos(k * x.y()) * (with_time ? std::exp(-t) : 1.0);
  };
  ms.grad_p = [k, with_time](const Point2& x, double t) -> Vec {
    const double s = with_time ? std::exp(-t) : 1.0;
    return {k * std::cos(k * x.x()) * std::cos(k * x.y()) * s, -k * std::sin(k * x.x()) * std::sin(k * x.y()) * s};
  };
  return ms;
}

}  // namespace

ManufacturedSolution time_dependent_solution() { return oscillating_pressure_solution(true); }

ManufacturedSolution steady_solution() { return oscillating_pressure_solution(false); }

ManufacturedSolution polynomial_solution() {
  ManufacturedSolution ms;
  ms.name = "polynomial";
  ms.u = [](const Point2& x, double) -> Vec {
    return {x.x() * x.x() + 2 * x.x() * x.y(), -2 * x.x() * x.y() - x.y() * x.y()};
  };
  ms.u_t = [](const Point2&, double) -> Vec { return Vec::Zero(); };
  ms.grad_u = [](const Point2& x, double) -> Mat {
    Mat g;
    g << 2 * x.x() + 2 * x.y(), 2 * x.x(), -2 * x.y(), -2 * x.x() - 2 * x.y();
    return g;
  };
  ms.lap_u = [](const Point2&, double) -> Vec { return {2.0, -2.0}; };
  ms.w = [](const Point2&, double) -> Vec { return {-3.0, 3.0}; };
  ms.grad_w = [](const Point2&, double) -> Mat { return Mat::Zero(); };
  ms.lap_w = [](const Point2&, double) -> Vec { return Vec::Zero(); };
  ms.phi = [](const Point2& x, double) { return x.x() - x.y(); };
  ms.grad_phi = [](const Point2&, double) -> Vec { return {1.0, -1.0}; };
  ms.p = [](const Point2& x, double) { return x.x() + x.y() - 1.0; };
  ms.grad_p = [](const Point2&, double) -> Vec { return {1.0, 1.0}; };
  return ms;
}

SpaceTimeVector source_term(const ManufacturedSolution& ms, const ModelParams& prm) {
  return [ms, prm](const Point2& x, double t) -> Vec {
    const Vec u = ms.u(x, t);
    return ms.u_t(x, t) - prm.mu * ms.lap_u(x, t) - prm.gamma * ms.lap_w(x, t) + prm.nu * (ms.grad_u(x, t) * u) +
           prm.rho * u + prm.lambda * u.squaredNorm() * u + ms.grad_p(x, t);
  };
}

ProblemData manufactured_problem(const ManufacturedSolution& ms, const ModelParams& params) {
  return {source_term(ms, params), ms.u, ms.w};
}

}  // namespace afem
