#pragma once

#include <Eigen/Dense>

namespace entnum {

// Weighted power sum of an affine residual,
//
//   phi(t) = sum_i w_i |b_i + (A t)_i|^r,   r > 1,
//
// the objective behind every Chebyshev projection and every L_p extremal
// problem in this library. Convex and C^1 for r > 1.
class PowerResidualObjective {
 public:
  PowerResidualObjective(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd w, double r);

  int dim() const { return static_cast<int>(A_.cols()); }
  double exponent() const { return r_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& t) const { return b_ + A_ * t; }
  double value(const Eigen::VectorXd& t) const;
  double value_of_residual(const Eigen::VectorXd& res) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& t) const;
  // Hessian with |res_i|^(r-2) floored at `floor` for r < 2.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& t, double floor) const;

  // Copy with |x|^r replaced by (x^2 + eps^2)^(r/2), which is C^2 for r < 2.
  PowerResidualObjective smoothed(double eps) const;
  double smoothing() const { return eps_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd w_;
  double r_;
  double eps_ = 0.0;
};

struct MinimizeOptions {
  double grad_tol = 1e-10;
  int max_iter = 100000;
  double armijo_c1 = 1e-4;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton with Armijo backtracking. Falls back to the steepest-descent
// direction whenever the (regularized) Hessian is not usable. Every accepted
// step strictly decreases phi, so warm starts never lose ground. Stops when
// the gradient norm is below grad_tol and the Newton step has stalled, when no
// representable decrease remains and the Newton decrement is below rounding
// (or the residual has collapsed to zero), or at the iteration cap
// (converged = false). For r < 2 the minimizer is first approached through a
// sequence of smoothed objectives with shrinking eps, then polished on phi.
MinimizeResult minimize(const PowerResidualObjective& objective, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options = {});

}  // namespace entnum
