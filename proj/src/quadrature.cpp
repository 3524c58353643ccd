#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "afem/fem.hpp"

namespace afem {
namespace {

// Symmetric rules are listed by orbit on the reference triangle of area 1/2.
// Weights below are normalised to area 1 and halved on insertion.
struct RuleBuilder {
  QuadratureRule rule;

  void centroid(double w) { add({1.0 / 3, 1.0 / 3, 1.0 / 3}, w); }
  void orbit3(double a, double w) {
    const double b = 1 - 2 * a;
    add({b, a, a}, w);
    add({a, b, a}, w);
    add({a, a, b}, w);
  }
  void orbit6(double a, double b, double w) {
    const double c = 1 - a - b;
    add({a, b, c}, w);
    add({a, c, b}, w);
    add({b, a, c}, w);
    add({b, c, a}, w);
    add({c, a, b}, w);
    add({c, b, a}, w);
  }
  void add(const Barycentric& p, double w) {
    rule.points.push_back(p);
    rule.weights.push_back(0.5 * w);
  }
};

QuadratureRule symmetric_rule(int degree) {
  RuleBuilder r;
  switch (degree) {
    case 1:
      r.centroid(1.0);
      break;
    case 2:
      r.orbit3(1.0 / 6, 1.0 / 3);
      break;
    case 4:
      r.orbit3(0.445948490915965, 0.223381589678011);
      r.orbit3(0.091576213509771, 0.109951743655322);
      break;
    case 5: {
      const double s = std::sqrt(15.0);
      r.centroid(9.0 / 40);
      r.orbit3((6 - s) / 21, (155 - s) / 1200);
      r.orbit3((6 + s) / 21, (155 + s) / 1200);
      break;
    }
    case 6:
      r.orbit3(0.249286745170910, 0.116786275726379);
      r.orbit3(0.063089014491502, 0.050844906370207);
      r.orbit6(0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    case 8:
      r.centroid(0.144315607677787);
      r.orbit3(0.459292588292723, 0.095091634267285);
      r.orbit3(0.170569307751760, 0.103217370534718);
      r.orbit3(0.050547228317031, 0.032458497623198);
      r.orbit6(0.008394777409958, 0.263112829634638, 0.027230314174435);
      break;
    default:
      throw std::logic_error("no symmetric rule of degree " + std::to_string(degree));
  }
  r.rule.degree = degree;
  return r.rule;
}

// Gauss-Jacobi nodes/weights on [-1, 1] for weight (1-x)^a (1+x)^b.
void gauss_jacobi(int m, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    T(k, k) = (k == 0 && a + b == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
    if (k + 1 < m) {
      const double j = k + 1;
      const double sj = 2 * j + a + b;
      const double off =
          std::sqrt(4 * j * (j + a) * (j + b) * (j + a + b) / (sj * sj * (sj + 1) * (sj - 1)));
      T(k, k + 1) = off;
      T(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  const double mu0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) /
                     std::tgamma(a + b + 2);
  x = eig.eigenvalues();
  w = mu0 * eig.eigenvectors().row(0).array().square().transpose();
}

// Collapsed (conical) product rule: exact to degree 2m-1, not symmetric.
QuadratureRule conical_rule(int degree) {
  const int m = (degree + 2) / 2;
  Eigen::VectorXd xs, ws, xt, wt;
  gauss_jacobi(m, 1.0, 0.0, xs, ws);  // weight (1 - s) after mapping
  gauss_jacobi(m, 0.0, 0.0, xt, wt);
  QuadratureRule rule;
  rule.degree = 2 * m - 1;
  for (int i = 0; i < m; ++i) {
    const double s = 0.5 * (1 + xs[i]);
    for (int j = 0; j < m; ++j) {
      const double t = 0.5 * (1 + xt[j]);
      const double x = s, y = (1 - s) * t;
      rule.points.push_back({1 - x - y, x, y});
      rule.weights.push_back(ws[i] / 4 * wt[j] / 2);
    }
  }
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(int min_exact_degree) {
  if (min_exact_degree > 10) {
    throw std::invalid_argument("quadrature degree " + std::to_string(min_exact_degree) +
                                " not supported (max 10)");
  }
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  const int d = std::max(min_exact_degree, 1);
  std::lock_guard lock(mutex);
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  QuadratureRule rule;
  switch (d) {
    case 1:
    case 2:
    case 4:
    case 5:
    case 6:
    case 8:
      rule = symmetric_rule(d);
      break;
    case 3:
      rule = symmetric_rule(4);
      break;
    case 7:
      rule = symmetric_rule(8);
      break;
    default:
      rule = conical_rule(d);
  }
  return cache.emplace(d, std::move(rule)).first->second;
}

}  // namespace afem
