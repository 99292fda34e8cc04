#include "entnum/convex.hpp"

#include <algorithm>
#include <cmath>

#include "entnum/error.hpp"

namespace entnum {

PowerResidualObjective::PowerResidualObjective(Eigen::MatrixXd A, Eigen::VectorXd b,
                                               Eigen::VectorXd w, double r)
    : A_(std::move(A)), b_(std::move(b)), w_(std::move(w)), r_(r) {
  require(r_ > 1.0, ErrorCode::kInvalidArgument, "power residual exponent must exceed 1");
  require(A_.rows() == b_.size() && b_.size() == w_.size(), ErrorCode::kDimensionMismatch,
          "power residual objective: inconsistent sizes");
}

PowerResidualObjective PowerResidualObjective::smoothed(double eps) const {
  PowerResidualObjective out = *this;
  out.eps_ = eps;
  return out;
}

double PowerResidualObjective::value_of_residual(const Eigen::VectorXd& res) const {
  double s = 0.0;
  if (eps_ > 0.0) {
    for (Eigen::Index i = 0; i < res.size(); ++i) s += w_(i) * std::pow(res(i) * res(i) + eps_ * eps_, 0.5 * r_);
    return s;
  }
  for (Eigen::Index i = 0; i < res.size(); ++i) s += w_(i) * std::pow(std::abs(res(i)), r_);
  return s;
}

double PowerResidualObjective::value(const Eigen::VectorXd& t) const {
  return value_of_residual(residual(t));
}

Eigen::VectorXd PowerResidualObjective::gradient(const Eigen::VectorXd& t) const {
  const Eigen::VectorXd res = residual(t);
  Eigen::VectorXd d(res.size());
  if (eps_ > 0.0) {
    for (Eigen::Index i = 0; i < res.size(); ++i)
      d(i) = w_(i) * r_ * std::pow(res(i) * res(i) + eps_ * eps_, 0.5 * r_ - 1.0) * res(i);
    return A_.transpose() * d;
  }
  for (Eigen::Index i = 0; i < res.size(); ++i) {
    const double a = std::abs(res(i));
    d(i) = a == 0.0 ? 0.0 : w_(i) * r_ * std::pow(a, r_ - 1.0) * (res(i) > 0 ? 1.0 : -1.0);
  }
  return A_.transpose() * d;
}

Eigen::MatrixXd PowerResidualObjective::hessian(const Eigen::VectorXd& t, double floor) const {
  const Eigen::VectorXd res = residual(t);
  Eigen::VectorXd d(res.size());
  if (eps_ > 0.0) {
    for (Eigen::Index i = 0; i < res.size(); ++i) {
      const double a2 = res(i) * res(i), e2 = eps_ * eps_;
      d(i) = w_(i) * r_ * std::pow(a2 + e2, 0.5 * r_ - 2.0) * ((r_ - 1.0) * a2 + e2);
    }
    return A_.transpose() * d.asDiagonal() * A_;
  }
  for (Eigen::Index i = 0; i < res.size(); ++i) {
    double a = std::abs(res(i));
    if (r_ < 2.0) a = std::max(a, floor);
    d(i) = w_(i) * r_ * (r_ - 1.0) * std::pow(a, r_ - 2.0);
  }
  return A_.transpose() * d.asDiagonal() * A_;
}

namespace {

MinimizeResult newton(const PowerResidualObjective& objective, const Eigen::VectorXd& x0,
                      const MinimizeOptions& options) {
  MinimizeResult out;
  out.x = x0;
  const int n = objective.dim();
  if (n == 0) {
    out.value = objective.value(out.x);
    out.converged = true;
    return out;
  }

  double f = objective.value(out.x);
  Eigen::VectorXd g = objective.gradient(out.x);
  const double r = objective.exponent();
  const double res_scale = std::max(1e-300, std::pow(std::max(f, 1e-300), 1.0 / r));
  // Residual size at t = 0 or at the start, whichever is larger; a residual
  // 1e-12 below it is zero to working precision.
  const double scale0 =
      std::max(res_scale, std::pow(objective.value(Eigen::VectorXd::Zero(n)), 1.0 / r));

  int stalled = 0;
  for (int it = 0; it < options.max_iter; ++it) {
    out.iterations = it;
    const double gn = g.norm();
    if (gn == 0.0) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd dir;
    {
      Eigen::MatrixXd H = objective.hessian(out.x, 1e-12 * res_scale);
      const double diag_scale = std::max(1e-300, H.diagonal().cwiseAbs().maxCoeff());
      double lambda = 1e-14 * diag_scale;
      for (int attempt = 0; attempt < 6 && dir.size() == 0; ++attempt) {
        Eigen::MatrixXd Hr = H;
        Hr.diagonal().array() += lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(Hr);
        if (llt.info() == Eigen::Success) {
          Eigen::VectorXd d = -llt.solve(g);
          if (d.allFinite() && d.dot(g) < 0.0) dir = d;
        }
        lambda *= 1e3;
      }
      if (dir.size() == 0) dir = -g / std::max(diag_scale, 1e-300);
    }

    const double slope = g.dot(dir);
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double ftrial = f;
    for (int bt = 0; bt < 80; ++bt) {
      trial = out.x + step * dir;
      ftrial = objective.value(trial);
      if (ftrial <= f + options.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || !(ftrial < f)) {
      // No representable decrease left. Accept when the predicted decrease
      // (the Newton decrement) is below rounding in phi, or the residual has
      // collapsed; for r < 2 the gradient |res|^(r-1) cannot reach grad_tol
      // there.
      const bool negligible = -slope <= 1e-12 * f || std::pow(f, 1.0 / r) <= 1e-12 * scale0;
      if (gn <= options.grad_tol || negligible) {
        out.converged = true;
        break;
      }
      if (++stalled > 3) break;
      dir = -g;
      continue;
    }

    const double step_norm = (trial - out.x).norm();
    out.x = trial;
    f = ftrial;
    g = objective.gradient(out.x);
    if (g.norm() <= options.grad_tol && step_norm <= 1e-13 * (1.0 + out.x.norm())) {
      out.converged = true;
      break;
    }
  }

  out.value = f;
  out.grad_norm = g.norm();
  if (!out.converged && out.grad_norm <= options.grad_tol) out.converged = true;
  return out;
}

}  // namespace

MinimizeResult minimize(const PowerResidualObjective& objective, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options) {
  const double r = objective.exponent();
  if (r >= 2.0 || objective.smoothing() > 0.0 || objective.dim() == 0) return newton(objective, x0, options);

  const double scale0 = std::pow(std::max(objective.value(x0), objective.value(Eigen::VectorXd::Zero(x0.size()))),
                                 1.0 / r);
  if (!(scale0 > 0.0)) return newton(objective, x0, options);
  Eigen::VectorXd x = x0;
  int iterations = 0;
  bool smoothed_ok = true;
  for (double eps = 0.1 * scale0; eps >= 0.99e-9 * scale0; eps *= 0.1) {
    const MinimizeResult stage = newton(objective.smoothed(eps), x, options);
    iterations += stage.iterations;
    x = stage.x;
    smoothed_ok = stage.converged;
    if (!smoothed_ok) break;
  }
  // Polish on phi itself. The last smoothed minimizer is within sum_i w_i eps^r
  // of the optimum in value, so a stalled polish still counts.
  MinimizeOptions polish = options;
  polish.max_iter = std::min(options.max_iter, 5);
  MinimizeResult out = newton(objective, x, polish);
  out.iterations += iterations;
  if (!out.converged && smoothed_ok) out.converged = true;
  return out;
}

}  // namespace entnum
