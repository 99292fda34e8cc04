#pragma once

#include <Eigen/Dense>

namespace entnum {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

// Dense two-phase primal simplex for
//
//   minimize c^T x  subject to  A x = b,  x >= 0.
//
// Rows with negative right-hand side are flipped internally. Redundant
// equality rows are tolerated: artificials left basic at zero after phase one
// are driven out or their rows dropped. Dantzig pricing with a switch to
// Bland's rule after a run of degenerate pivots.
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double tol = 1e-11,
                  int max_pivots = 200000);

}  // namespace entnum
