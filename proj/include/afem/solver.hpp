#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace afem {

using SparseOperator = Eigen::SparseMatrix<double>;

/// Raised when the LU factorisation hits a (numerically) zero pivot.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, long pivot) : std::runtime_error(what), pivot_(pivot) {}
  /// Column of the original matrix at which elimination broke down, or -1.
  long pivot() const { return pivot_; }

 private:
  long pivot_;
};

/// Unknown `multiplier` enforces m^T x[begin, begin+size) = c and enters the
/// rows of that block through the column m.
struct MeanConstraint {
  int multiplier = 0;
  int begin = 0;
  int size = 0;
};

/// Pivoting strategy of the LU factorisation.
enum class LuStrategy { automatic, symmetric, unsymmetric };

/// Sparse LU (UMFPACK) that keeps its symbolic analysis while the sparsity
/// pattern of successive matrices stays the same.
///
/// With mean constraints registered, a block whose rows and columns sum to
/// zero outside the multiplier is solved without the dense multiplier row and
/// column: the multiplier follows from the block row sums, the block from a
/// system with one pinned row, and the constant from the constraint row.
/// Matrices without that structure are factorized as they are.
class SparseDirectSolver {
 public:
  SparseDirectSolver();
  explicit SparseDirectSolver(std::vector<MeanConstraint> constraints,
                              LuStrategy strategy = LuStrategy::automatic);
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  void factorize(const SparseOperator& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  int symbolic_analyses() const { return analyses_; }
  /// Number of constraints eliminated in the last factorization.
  int reduced_constraints() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int analyses_ = 0;
};

/// One-shot factor-and-solve.
Eigen::VectorXd sparse_direct_solve(const SparseOperator& A, const Eigen::VectorXd& b,
                                    const std::vector<MeanConstraint>& constraints = {},
                                    LuStrategy strategy = LuStrategy::automatic);

struct NewtonConfig {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  int max_iters = 25;
  bool line_search = false;
  /// Relative update size below which the iteration is accepted as having
  /// reached the rounding floor of the residual.
  double step_tol = 1e-13;

  void validate() const;
};

struct LinearizedSystem {
  Eigen::VectorXd residual;
  SparseOperator jacobian;
};

using SystemBuilder = std::function<LinearizedSystem(const Eigen::VectorXd&)>;

struct NewtonResult {
  Eigen::VectorXd solution;
  int iterations = 0;  // linear solves performed
  bool converged = false;
  std::vector<double> residual_norms;  // at each iterate, starting with the guess
};

class NewtonFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full Newton iteration J(x) dx = -r(x). Throws NewtonFailure when
/// max_iters is exhausted. A solver may be passed in to reuse its symbolic
/// analysis across calls.
NewtonResult newton_solve(const SystemBuilder& builder, const NewtonConfig& config, Eigen::VectorXd guess,
                          SparseDirectSolver* solver = nullptr);

/// Observed order log(r_{k+1}/r_k) / log(r_k/r_{k-1}) over the last three
/// residuals above `floor`; NaN when fewer are available.
double newton_tail_order(const std::vector<double>& residuals, double floor);

}  // namespace afem
