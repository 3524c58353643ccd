#include "afem/solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/UmfPackSupport>

namespace afem {

struct SparseDirectSolver::Impl {
  Eigen::UmfPackLU<SparseOperator> lu;
  SparseOperator factored;  // lu refers to its arrays during solves
  std::vector<int> outer, inner;
  long rows = -1;

  struct Active {
    MeanConstraint c;
    Eigen::VectorXd column;  // m restricted to the block rows
    Eigen::VectorXd row;     // constraint row restricted to the block columns
  };
  std::vector<MeanConstraint> constraints;
  std::vector<Active> active;
};

SparseDirectSolver::SparseDirectSolver() : SparseDirectSolver(std::vector<MeanConstraint>{}) {}
SparseDirectSolver::SparseDirectSolver(std::vector<MeanConstraint> constraints, LuStrategy strategy)
    : impl_(std::make_unique<Impl>()) {
  impl_->constraints = std::move(constraints);
  double code = UMFPACK_STRATEGY_AUTO;
  if (strategy == LuStrategy::symmetric) code = UMFPACK_STRATEGY_SYMMETRIC;
  if (strategy == LuStrategy::unsymmetric) code = UMFPACK_STRATEGY_UNSYMMETRIC;
  impl_->lu.umfpackControl()(UMFPACK_STRATEGY) = code;
}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

int SparseDirectSolver::reduced_constraints() const { return static_cast<int>(impl_->active.size()); }

namespace {

long singular_pivot(Eigen::UmfPackLU<SparseOperator>& lu) {
  try {
    const SparseOperator U = lu.matrixU();
    const auto Q = lu.permutationQ();
    const double scale =
        std::max(1.0, Eigen::Map<const Eigen::VectorXd>(U.valuePtr(), U.nonZeros()).cwiseAbs().maxCoeff());
    for (long k = 0; k < U.cols(); ++k) {
      if (std::abs(U.coeff(k, k)) <= 1e-14 * scale) return Q(k);
    }
  } catch (...) {
  }
  return -1;
}

bool in_block(long i, const MeanConstraint& c) { return i >= c.begin && i < c.begin + c.size; }

// Checks the null-vector structure of one constraint and extracts m and the
// constraint row. Returns false when the block cannot be reduced.
bool extract_constraint(const SparseOperator& A, const MeanConstraint& c, Eigen::VectorXd& column,
                        Eigen::VectorXd& row) {
  const long n = A.rows();
  if (c.multiplier < 0 || c.multiplier >= n || c.size < 2 || c.begin < 0 || c.begin + c.size > n ||
      in_block(c.multiplier, c)) {
    throw std::invalid_argument("mean constraint does not fit the matrix");
  }
  column = Eigen::VectorXd::Zero(c.size);
  row = Eigen::VectorXd::Zero(c.size);
  Eigen::VectorXd block_row_sums = Eigen::VectorXd::Zero(n);  // sum over block rows, per column
  Eigen::VectorXd block_col_sums = Eigen::VectorXd::Zero(n);  // sum over block columns, per row
  double scale = 0;
  for (long j = 0; j < A.outerSize(); ++j) {
    for (SparseOperator::InnerIterator it(A, j); it; ++it) {
      const long i = it.row();
      const double v = it.value();
      scale = std::max(scale, std::abs(v));
      if (j == c.multiplier) {
        if (v == 0.0) continue;
        if (!in_block(i, c)) return false;
        column[i - c.begin] = v;
      } else if (i == c.multiplier) {
        if (v == 0.0) continue;
        if (!in_block(j, c)) return false;
        row[j - c.begin] = v;
      } else {
        if (in_block(i, c)) block_row_sums[j] += v;
        if (in_block(j, c)) block_col_sums[i] += v;
      }
    }
  }
  const double tol = 1e-10 * std::max(scale, 1.0);
  if (std::abs(column.sum()) <= tol || std::abs(row.sum()) <= tol) return false;
  return block_row_sums.lpNorm<Eigen::Infinity>() <= tol && block_col_sums.lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace

void SparseDirectSolver::factorize(const SparseOperator& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("direct solve needs a square matrix");
  if (!A.isCompressed()) throw std::invalid_argument("direct solve needs a compressed matrix");
  Impl& s = *impl_;

  s.active.clear();
  for (const MeanConstraint& c : s.constraints) {
    Impl::Active a{c, {}, {}};
    if (extract_constraint(A, c, a.column, a.row)) s.active.push_back(std::move(a));
  }
  if (s.active.empty()) {
    s.factored = A;
  } else {
    std::vector<char> drop_row(A.rows(), 0), drop_col(A.cols(), 0);
    for (const Impl::Active& a : s.active) {
      drop_row[a.c.multiplier] = drop_col[a.c.multiplier] = 1;
      drop_row[a.c.begin] = 1;
    }
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (long j = 0; j < A.outerSize(); ++j) {
      if (drop_col[j]) continue;
      for (SparseOperator::InnerIterator it(A, j); it; ++it) {
        if (!drop_row[it.row()]) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(j), it.value());
      }
    }
    for (const Impl::Active& a : s.active) {
      t.emplace_back(a.c.multiplier, a.c.multiplier, 1.0);
      t.emplace_back(a.c.begin, a.c.begin, 1.0);
    }
    s.factored.resize(A.rows(), A.cols());
    s.factored.setFromTriplets(t.begin(), t.end());
  }
  const SparseOperator& M = s.factored;

  const bool same_pattern =
      s.rows == M.rows() && static_cast<long>(s.inner.size()) == M.nonZeros() &&
      std::equal(s.outer.begin(), s.outer.end(), M.outerIndexPtr()) &&
      std::equal(s.inner.begin(), s.inner.end(), M.innerIndexPtr());
  if (!same_pattern) {
    s.lu.analyzePattern(M);
    if (s.lu.info() != Eigen::Success) throw SingularSystemError("symbolic analysis failed", -1);
    s.outer.assign(M.outerIndexPtr(), M.outerIndexPtr() + M.outerSize() + 1);
    s.inner.assign(M.innerIndexPtr(), M.innerIndexPtr() + M.nonZeros());
    s.rows = M.rows();
    ++analyses_;
  }
  s.lu.factorize(M);
  if (s.lu.info() != Eigen::Success) {
    const long pivot = singular_pivot(s.lu);
    s.rows = -1;  // force a fresh analysis next time
    throw SingularSystemError("sparse LU found a singular matrix" +
                                  (pivot >= 0 ? " (zero pivot at column " + std::to_string(pivot) + ")"
                                              : std::string()),
                              pivot);
  }
}

Eigen::VectorXd SparseDirectSolver::solve(const Eigen::VectorXd& b) const {
  const Impl& s = *impl_;
  Eigen::VectorXd rhs = b;
  std::vector<double> xi(s.active.size());
  for (std::size_t a = 0; a < s.active.size(); ++a) {
    const Impl::Active& act = s.active[a];
    xi[a] = b.segment(act.c.begin, act.c.size).sum() / act.column.sum();
    rhs.segment(act.c.begin, act.c.size) -= xi[a] * act.column;
    rhs[act.c.begin] = 0.0;
    rhs[act.c.multiplier] = 0.0;
  }
  Eigen::VectorXd x = s.lu.solve(rhs);
  if (s.lu.info() != Eigen::Success) throw SingularSystemError("sparse LU solve failed", -1);
  for (std::size_t a = 0; a < s.active.size(); ++a) {
    const Impl::Active& act = s.active[a];
    auto block = x.segment(act.c.begin, act.c.size);
    block.array() += (b[act.c.multiplier] - act.row.dot(block)) / act.row.sum();
    x[act.c.multiplier] = xi[a];
  }
  return x;
}

Eigen::VectorXd sparse_direct_solve(const SparseOperator& A, const Eigen::VectorXd& b,
                                    const std::vector<MeanConstraint>& constraints, LuStrategy strategy) {
  SparseDirectSolver solver(constraints, strategy);
  solver.factorize(A);
  return solver.solve(b);
}

void NewtonConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw std::invalid_argument("Newton tolerances must be positive");
  if (max_iters < 1) throw std::invalid_argument("Newton needs max_iters >= 1");
}

NewtonResult newton_solve(const SystemBuilder& builder, const NewtonConfig& config, Eigen::VectorXd x,
                          SparseDirectSolver* solver) {
  config.validate();
  SparseDirectSolver local;
  SparseDirectSolver& lu = solver ? *solver : local;

  NewtonResult out;
  LinearizedSystem sys = builder(x);
  double rnorm = sys.residual.norm();
  out.residual_norms.push_back(rnorm);
  const double target = std::max(config.abs_tol, config.rel_tol * rnorm);

  while (!(rnorm <= config.abs_tol)) {
    if (out.iterations >= config.max_iters) {
      throw NewtonFailure("Newton did not converge in " + std::to_string(config.max_iters) +
                          " iterations (residual " + std::to_string(rnorm) + ")");
    }
    lu.factorize(sys.jacobian);
    const Eigen::VectorXd dx = lu.solve(-sys.residual);
    ++out.iterations;

    double step = 1.0;
    Eigen::VectorXd trial = x + dx;
    LinearizedSystem next = builder(trial);
    double next_norm = next.residual.norm();
    if (config.line_search) {
      for (int k = 0; k < 8 && !(next_norm < rnorm); ++k) {
        step *= 0.5;
        trial = x + step * dx;
        next = builder(trial);
        next_norm = next.residual.norm();
      }
    }
    x = std::move(trial);
    sys = std::move(next);
    rnorm = next_norm;
    out.residual_norms.push_back(rnorm);
    if (!std::isfinite(rnorm)) throw NewtonFailure("Newton residual is not finite");
    if (rnorm <= target) break;
    const double xs = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (step * dx.lpNorm<Eigen::Infinity>() <= config.step_tol * xs) break;
  }
  out.converged = true;
  out.solution = std::move(x);
  return out;
}

double newton_tail_order(const std::vector<double>& r, double floor) {
  std::vector<double> kept;
  for (double v : r) {
    if (v > floor) kept.push_back(v);
  }
  if (kept.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = kept.size();
  return std::log(kept[n - 1] / kept[n - 2]) / std::log(kept[n - 2] / kept[n - 3]);
}

}  // namespace afem
