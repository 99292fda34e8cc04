#include "entnum/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "entnum/convex.hpp"
#include "entnum/error.hpp"
#include "entnum/lattice_net.hpp"

namespace entnum {
namespace {

constexpr double kGramTol = 1e-10;
constexpr double kReproducingTol = 1e-8;

double weighted_norm(const Vector& mu, const Vector& x, double r) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += mu(i) * std::pow(std::abs(x(i)) / m, r);
  return m * std::pow(s, 1.0 / r);
}

void check_p(double p) {
  require(p >= 2.0 && std::isfinite(p), ErrorCode::kInvalidArgument,
          "Nikol'skii constants need p in [2, inf), got " + std::to_string(p));
}

// min ||U(a0 + Z t)||_p^p over t; returns (optimal value of ||.||_p, a).
std::pair<double, Vector> direct_at(const Subspace& sub, int x, double p, double tol) {
  const Matrix& U = sub.basis();
  const Vector u = U.row(x).transpose();
  const double un = u.norm();
  if (un == 0.0) return {std::numeric_limits<double>::infinity(), Vector::Zero(sub.dim())};
  const Vector a0 = u / (un * un);
  const int N = sub.dim();
  const Vector& mu = sub.measure().weights();
  if (p == 2.0 || N == 1) {
    // a0 is the L_2 minimizer of the constrained problem; for N = 1 it is the only feasible point.
    return {weighted_norm(mu, U * a0, p), a0};
  }
  Eigen::HouseholderQR<Matrix> qr(u);
  const Matrix Q = qr.householderQ();
  const Matrix Z = Q.rightCols(N - 1);
  const Vector b = U * a0;
  const double scale = weighted_norm(mu, b, p);
  PowerResidualObjective obj(U * Z / scale, b / scale, mu, p);
  MinimizeOptions opts;
  opts.grad_tol = tol;
  const MinimizeResult res = minimize(obj, Vector::Zero(N - 1), opts);
  if (!res.converged) {
    fail(ErrorCode::kNonConvergence,
         "m_p_direct: inner solve did not converge at point " + std::to_string(x) + " (gradient norm " +
             std::to_string(res.grad_norm) + ")",
         res.grad_norm);
  }
  const Vector a = a0 + Z * res.x;
  return {scale * std::pow(res.value, 1.0 / p), a};
}

}  // namespace

MeasureSpace::MeasureSpace(Vector weights) : weights_(std::move(weights)) {
  require(weights_.size() >= 1, ErrorCode::kInvalidArgument, "measure needs at least one point");
  require((weights_.array() > 0.0).all(), ErrorCode::kInvalidArgument, "measure weights must be positive");
  require(std::abs(weights_.sum() - 1.0) <= 1e-12, ErrorCode::kInvalidArgument,
          "measure weights must sum to 1 (within 1e-12)");
}

MeasureSpace MeasureSpace::uniform(int s) {
  require(s >= 1, ErrorCode::kInvalidArgument, "measure needs at least one point");
  return MeasureSpace(Vector::Constant(s, 1.0 / s));
}

MeasureSpace MeasureSpace::random(int s, double spread, std::uint64_t seed) {
  require(s >= 1 && spread >= 0.0, ErrorCode::kInvalidArgument, "random measure: bad parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, spread);
  Vector w(s);
  for (int i = 0; i < s; ++i) w(i) = 1.0 + unif(rng);
  w /= w.sum();
  // Renormalize the last entry so the sum is 1 to rounding.
  w(s - 1) = 1.0 - (w.sum() - w(s - 1));
  return MeasureSpace(w);
}

Subspace::Subspace(MeasureSpace measure, Matrix basis) : measure_(std::move(measure)), basis_(std::move(basis)) {
  const int s = measure_.size();
  require(basis_.rows() == s, ErrorCode::kDimensionMismatch, "subspace basis rows must match the measure size");
  require(basis_.cols() >= 1 && basis_.cols() <= s, ErrorCode::kInvalidArgument,
          "subspace dimension must lie in [1, s]");
  const Vector& mu = measure_.weights();
  const Matrix gram = basis_.transpose() * mu.asDiagonal() * basis_;
  const double defect = (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (defect > kGramTol) {
    fail(ErrorCode::kNonOrthonormal, "subspace basis is not orthonormal in L_2(mu): Gram defect " +
                                         std::to_string(defect), defect);
  }
  const Vector sq = mu.cwiseSqrt();
  Eigen::HouseholderQR<Matrix> qr(sq.asDiagonal() * basis_);
  const Matrix Q = qr.householderQ();
  complement_ = sq.cwiseInverse().asDiagonal() * Q.rightCols(s - dim());
}

Subspace Subspace::random(MeasureSpace measure, int N, std::uint64_t seed) {
  const int s = measure.size();
  require(N >= 1 && N <= s, ErrorCode::kInvalidArgument, "random subspace: need 1 <= N <= s");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(s, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < s; ++i) X(i, j) = normal(rng);
  }
  const Vector sq = measure.weights().cwiseSqrt();
  Eigen::HouseholderQR<Matrix> qr(sq.asDiagonal() * X);
  const Matrix Q = qr.householderQ() * Matrix::Identity(s, N);
  Matrix U = sq.cwiseInverse().asDiagonal() * Q;
  return Subspace(std::move(measure), std::move(U));
}

Subspace Subspace::constants(MeasureSpace measure) {
  const int s = measure.size();
  return Subspace(std::move(measure), Matrix::Ones(s, 1));
}

SamplePointSet SamplePointSet::random(int s, int n, std::uint64_t seed) {
  require(n >= 1 && n <= s, ErrorCode::kInvalidArgument, "sample point set: need 1 <= n <= s");
  std::vector<int> idx(s);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> pick(i, s - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return {idx};
}

void SamplePointSet::validate(int s) const {
  require(!indices.empty(), ErrorCode::kInvalidArgument, "sample point set is empty");
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::kInvalidArgument,
          "sample point indices must be distinct");
  require(sorted.front() >= 0 && sorted.back() < s, ErrorCode::kInvalidArgument,
          "sample point index out of range");
}

Matrix dirichlet_kernel(const Subspace& sub) { return sub.basis() * sub.basis().transpose(); }

PointwiseNikolskii m_p_direct_pointwise(const Subspace& sub, double p, double tol) {
  check_p(p);
  PointwiseNikolskii out;
  const int s = sub.points();
  out.per_point.resize(s);
  for (int x = 0; x < s; ++x) {
    if (p == 2.0) {
      out.per_point(x) = sub.basis().row(x).norm();
    } else {
      const auto [mn, a] = direct_at(sub, x, p, tol);
      out.per_point(x) = std::isinf(mn) ? 0.0 : 1.0 / mn;
    }
  }
  out.value = out.per_point.maxCoeff(&out.argmax);
  return out;
}

double m_p_direct(const Subspace& sub, double p, double tol) { return m_p_direct_pointwise(sub, p, tol).value; }

Vector extremal_coefficients(const Subspace& sub, int x, double p, double tol) {
  check_p(p);
  require(x >= 0 && x < sub.points(), ErrorCode::kInvalidArgument, "extremal_coefficients: point out of range");
  const auto [mn, a] = direct_at(sub, x, p, tol);
  if (std::isinf(mn)) return Vector::Zero(sub.dim());
  return a / mn;
}

KernelSliceMin kernel_slice_min(const Subspace& sub, const Matrix& kernel, int x, double p, double tol) {
  check_p(p);
  const double pd = p / (p - 1.0);
  const Vector& mu = sub.measure().weights();
  const Matrix& V = sub.complement();
  const Vector k = kernel.row(x).transpose();
  KernelSliceMin out;
  if (V.cols() == 0) {
    out.w = k;
    out.norm = weighted_norm(mu, k, pd);
    return out;
  }
  if (p == 2.0) {
    // Orthogonal projection of the slice onto the complement.
    const Vector t = V.transpose() * (mu.asDiagonal() * k);
    out.w = k - V * t;
    out.norm = weighted_norm(mu, out.w, 2.0);
    return out;
  }
  const double scale = weighted_norm(mu, k, pd);
  if (scale == 0.0) {
    out.w = k;
    return out;
  }
  PowerResidualObjective obj(-V / scale, k / scale, mu, pd);
  MinimizeOptions opts;
  opts.grad_tol = tol;
  const MinimizeResult res = minimize(obj, Vector::Zero(V.cols()), opts);
  if (!res.converged) {
    fail(ErrorCode::kNonConvergence,
         "m_p_dual: inner solve did not converge at point " + std::to_string(x) + " (gradient norm " +
             std::to_string(res.grad_norm) + ")",
         res.grad_norm);
  }
  out.w = k - V * res.x;
  out.norm = weighted_norm(mu, out.w, pd);
  return out;
}

PointwiseNikolskii m_p_dual_pointwise(const Subspace& sub, double p, double tol) {
  check_p(p);
  const Matrix K = dirichlet_kernel(sub);
  PointwiseNikolskii out;
  out.per_point.resize(sub.points());
  for (int x = 0; x < sub.points(); ++x) out.per_point(x) = kernel_slice_min(sub, K, x, p, tol).norm;
  out.value = out.per_point.maxCoeff(&out.argmax);
  return out;
}

double m_p_dual(const Subspace& sub, double p, double tol) { return m_p_dual_pointwise(sub, p, tol).value; }

Dictionary DiscretizationDictionary::as_dictionary(const MeasureSpace& measure) const {
  return Dictionary(measure.lp(p / (p - 1.0)), g);
}

DiscretizationDictionary build_discretization_dictionary(const Subspace& sub, const SamplePointSet& pts, double p,
                                                         double tol) {
  check_p(p);
  pts.validate(sub.points());
  const Matrix K = dirichlet_kernel(sub);
  const Vector& mu = sub.measure().weights();
  const Matrix& U = sub.basis();
  const double pd = p / (p - 1.0);

  DiscretizationDictionary d;
  d.points = pts;
  d.p = p;
  d.mp = m_p_direct(sub, p);
  const int n = pts.size();
  d.w.resize(sub.points(), n);
  d.g.resize(sub.points(), n);
  d.w_norms.resize(n);
  for (int j = 0; j < n; ++j) {
    const int x = pts.indices[j];
    const KernelSliceMin sm = kernel_slice_min(sub, K, x, p);
    const Vector reproduced = U.transpose() * (mu.asDiagonal() * sm.w);
    const double err = (reproduced - U.row(x).transpose()).cwiseAbs().maxCoeff();
    d.max_reproducing_error = std::max(d.max_reproducing_error, err);
    if (err > kReproducingTol) {
      fail(ErrorCode::kPropertyViolation,
           "w_j does not reproduce X_N at point " + std::to_string(x) + " (error " + std::to_string(err) + ")", err);
    }
    const double nw = weighted_norm(mu, sm.w, pd);
    if (nw > 2.0 * d.mp + tol) {
      fail(ErrorCode::kPropertyViolation,
           "||w_j||_{p'} = " + std::to_string(nw) + " exceeds 2 M_p = " + std::to_string(2.0 * d.mp), nw);
    }
    d.w.col(j) = sm.w;
    d.w_norms(j) = nw;
    d.g.col(j) = sm.w / nw;
    d.max_w_norm = std::max(d.max_w_norm, nw);
  }
  return d;
}

TransferReport verify_transfer(const Subspace& sub, const DiscretizationDictionary& dict, int trials,
                               std::uint64_t seed) {
  require(trials >= 0, ErrorCode::kInvalidArgument, "verify_transfer: negative trial count");
  const Matrix& U = sub.basis();
  const Vector& mu = sub.measure().weights();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TransferReport rep;
  rep.trials = trials;
  // <f, g_j>_mu for f = U a is (G^T diag(mu) U a)_j.
  const Matrix pair = dict.g.transpose() * mu.asDiagonal() * U;
  for (int t = 0; t < trials; ++t) {
    Vector a(sub.dim());
    for (int i = 0; i < sub.dim(); ++i) a(i) = normal(rng);
    const Vector f = U * a;
    double lhs = 0.0;
    for (int x : dict.points.indices) lhs = std::max(lhs, std::abs(f(x)));
    const double unorm = (pair * a).cwiseAbs().maxCoeff();
    const double rhs = 2.0 * dict.mp * unorm;
    if (unorm > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / (dict.mp * unorm));
    if (lhs > rhs + 1e-8) {
      ++rep.violations;
      rep.witness = a;
      fail(ErrorCode::kPropertyViolation,
           "transfer inequality violated: ||f||_Linf(Omega_n) = " + std::to_string(lhs) + " > 2 M_p ||f||_U = " +
               std::to_string(rhs),
           lhs - rhs);
    }
  }
  return rep;
}

It1Report it1_experiment(const Subspace& sub, const SamplePointSet& pts, double p, const std::vector<int>& k_list,
                         const It1Options& options) {
  check_p(p);
  pts.validate(sub.points());
  const int n = pts.size();
  for (int k : k_list) {
    require(k >= 1 && k <= n, ErrorCode::kInvalidArgument, "it1_experiment: k values must lie in [1, n]");
  }
  const Matrix& U = sub.basis();
  const Vector& mu = sub.measure().weights();

  It1Report rep;
  rep.mp = m_p_direct(sub, p);
  double mu_min = mu(pts.indices.front());
  for (int x : pts.indices) mu_min = std::min(mu_min, mu(x));
  rep.lp_radius = std::pow(1.0 / mu_min, 1.0 / p);

  // Value vectors (f(x^1), ..., f(x^n)) of samples of X_N^p.
  std::vector<Vector> values;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const NormedSpace lp = sub.measure().lp(p);
  auto push_values = [&](const Vector& a) {
    const Vector f = U * a;
    Vector y(n);
    for (int j = 0; j < n; ++j) y(j) = f(pts.indices[j]);
    values.push_back(std::move(y));
  };
  for (int j = 0; j < n; ++j) {
    const Vector a = extremal_coefficients(sub, pts.indices[j], p);
    push_values(a);
    push_values(-a);
  }
  for (int t = 0; t < options.samples; ++t) {
    Vector a(sub.dim());
    for (int i = 0; i < sub.dim(); ++i) a(i) = normal(rng);
    const double nf = lp.norm(U * a);
    if (nf == 0.0) continue;
    push_values(a / nf);
  }
  rep.samples = static_cast<int>(values.size());

  const BoxBall outer{n, rep.mp, p, rep.lp_radius};
  for (const auto& y : values) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) sum += std::pow(std::abs(y(j)), p);
    const double slack = 1e-9 * (1.0 + rep.mp);
    if (y.cwiseAbs().maxCoeff() > rep.mp + slack || std::pow(sum, 1.0 / p) > rep.lp_radius * (1.0 + 1e-9)) {
      fail(ErrorCode::kPropertyViolation, "sample of X_N^p escapes the outer set used for the net");
    }
  }

  const Metric linf = Metric::linf(n);
  const Matrix dist = distance_matrix(values, linf);

  // Coefficient-lattice bound: a lies in the unit l_2 ball of R^N, and a
  // coefficient error e moves the values by at most L ||e||_inf.
  double L = 0.0;
  for (int x : pts.indices) L = std::max(L, U.row(x).cwiseAbs().sum());
  const BoxBall coeff_ball{sub.dim(), 1.0, 2.0, 1.0};

  std::vector<int> ks = k_list;
  std::sort(ks.begin(), ks.end());
  for (int k : ks) {
    ProfileRow row;
    row.k = k;
    const LatticeNetBound net = best_lattice_net(outer, k);
    row.upper = net.eps;
    row.upper_source = net.eps >= rep.mp ? "trivial" : "sparse-cover";
    for (const auto& y : values) {
      if (linf.distance(y, lattice_center(y, net.eps, net.kind)) > net.eps * (1.0 + 1e-12)) {
        fail(ErrorCode::kPropertyViolation, "lattice net fails to cover a sample");
      }
    }
    const double count = std::ldexp(1.0, k) + 1.0;
    if (count <= static_cast<double>(values.size())) {
      const std::vector<int> idx = farthest_point_indices(dist, static_cast<int>(count), options.seed + k);
      double sep = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) sep = std::min(sep, dist(idx[a], idx[b]));
      }
      row.lower = sep / 2.0;
      row.lower_source = "packing(sampled)";
    } else {
      row.lower = 0.0;
      row.lower_source = "none";
    }
    row.envelope = rep.mp * std::pow(std::log2(2.0 * n / k) / k, 1.0 / p);
    rep.profile.rows.push_back(row);

    const LatticeNetBound cnet = best_lattice_net(coeff_ball, k);
    rep.finite_dim_upper.push_back(std::min(rep.mp, L * cnet.eps));
  }
  enforce_monotone(rep.profile);
  return rep;
}

}  // namespace entnum
