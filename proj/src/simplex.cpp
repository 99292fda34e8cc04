#include "entnum/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace entnum {
namespace {

class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs).
  // Column `cols` holds the right-hand side.
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Eigen::MatrixXd& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(basis_.size()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }

  void pivot(int r, int c) {
    const double piv = t_(r, c);
    t_.row(r) /= piv;
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  // Runs simplex iterations on the objective row over columns [0, active).
  LpStatus optimize(int active, double tol, int max_pivots, int& pivots) {
    int degenerate_run = 0;
    while (pivots < max_pivots) {
      const int m = rows();
      const bool bland = degenerate_run > 50;
      int enter = -1;
      double best = -tol;
      for (int j = 0; j < active; ++j) {
        const double rc = t_(m, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a > tol) {
          const double r = t_(i, cols()) / a;
          if (r < ratio - 1e-14 || (std::abs(r - ratio) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      degenerate_run = ratio <= tol ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++pivots;
    }
    return LpStatus::kIterationLimit;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double tol, int max_pivots) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpResult result;
  result.x = Eigen::VectorXd::Zero(n);

  // Columns: n structural, m artificial.
  Tableau tab(m, n + m);
  auto& t = tab.t();
  const int rhs = n + m;
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * A.row(i);
    t(i, n + i) = 1.0;
    t(i, rhs) = sign * b(i);
    tab.basis()[i] = n + i;
  }

  // Phase one: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;

  int pivots = 0;
  LpStatus st = tab.optimize(n + m, tol, max_pivots, pivots);
  if (st == LpStatus::kIterationLimit) {
    result.status = st;
    result.pivots = pivots;
    return result;
  }
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (-t(m, rhs) > 1e-9 * scale) {
    result.status = LpStatus::kInfeasible;
    result.pivots = pivots;
    return result;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] >= n) {
      int enter = -1;
      double best = tol;
      for (int j = 0; j < n; ++j) {
        if (std::abs(t(i, j)) > best) {
          best = std::abs(t(i, j));
          enter = j;
        }
      }
      if (enter >= 0) {
        tab.pivot(i, enter);
        ++pivots;
        keep.push_back(i);
      }
    } else {
      keep.push_back(i);
    }
  }

  // Phase two on the structural columns only.
  Tableau tab2(static_cast<int>(keep.size()), n);
  auto& t2 = tab2.t();
  const int m2 = static_cast<int>(keep.size());
  for (int r = 0; r < m2; ++r) {
    t2.row(r).head(n) = t.row(keep[r]).head(n);
    t2(r, n) = t(keep[r], rhs);
    tab2.basis()[r] = tab.basis()[keep[r]];
  }
  t2.row(m2).head(n) = c.transpose();
  t2(m2, n) = 0.0;
  for (int r = 0; r < m2; ++r) {
    const double cb = c(tab2.basis()[r]);
    if (cb != 0.0) t2.row(m2) -= cb * t2.row(r);
  }

  st = tab2.optimize(n, tol, max_pivots, pivots);
  result.status = st;
  result.pivots = pivots;
  if (st != LpStatus::kOptimal) return result;

  for (int r = 0; r < m2; ++r) result.x(tab2.basis()[r]) = t2(r, n);
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace entnum
