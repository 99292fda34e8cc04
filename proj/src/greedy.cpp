#include "entnum/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "entnum/convex.hpp"
#include "entnum/error.hpp"
#include "entnum/fit.hpp"

namespace entnum {
namespace {

Matrix select_columns(const Matrix& G, const std::vector<int>& support) {
  Matrix S(G.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) S.col(static_cast<Eigen::Index>(k)) = G.col(support[k]);
  return S;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

bool full_column_rank(const Matrix& S) {
  if (S.cols() == 0) return true;
  Eigen::ColPivHouseholderQR<Matrix> qr(S);
  qr.setThreshold(1e-10);
  return qr.rank() == S.cols();
}

}  // namespace

Vector SparseApproximant::approximant(const Dictionary& dict) const {
  Vector out = Vector::Zero(dict.dim());
  for (std::size_t k = 0; k < support.size(); ++k) out += coefficients(static_cast<Eigen::Index>(k)) * dict.atoms().col(support[k]);
  return out;
}

bool in_octahedron(const Vector& f, const Dictionary& dict) { return norm_A(f, dict) <= 1.0 + 1e-9; }

Vector chebyshev_project(const Vector& f, const std::vector<int>& support, const Dictionary& dict, double tol,
                         const Vector* warm_start) {
  const NormedSpace& space = dict.space();
  require(f.size() == space.dim(), ErrorCode::kDimensionMismatch, "chebyshev_project: dimension mismatch");
  for (int j : support) {
    require(j >= 0 && j < dict.size(), ErrorCode::kInvalidArgument,
            "chebyshev_project: atom index " + std::to_string(j) + " out of range");
  }
  const int m = static_cast<int>(support.size());
  if (m == 0) return Vector();

  const Matrix S = select_columns(dict.atoms(), support);
  if (!full_column_rank(S)) {
    fail(ErrorCode::kLinearlyDependent, "chebyshev_project: atoms on the support are linearly dependent");
  }

  // Weighted least squares: exact for q = 2, the starting point otherwise.
  const Vector sw = space.weights().cwiseSqrt();
  const Vector c_ls = (sw.asDiagonal() * S).colPivHouseholderQr().solve(sw.asDiagonal() * f);
  if (space.q() == 2.0) return c_ls;

  const double scale = space.norm(f);
  if (scale == 0.0) return Vector::Zero(m);

  PowerResidualObjective objective(-S, f / scale, space.weights(), space.q());
  Vector x0 = c_ls / scale;
  if (warm_start != nullptr && warm_start->size() == m) {
    const Vector w = *warm_start / scale;
    if (objective.value(w) < objective.value(x0)) x0 = w;
  }
  MinimizeOptions opts;
  opts.grad_tol = tol;
  const MinimizeResult res = minimize(objective, x0, opts);
  if (!res.converged) {
    fail(ErrorCode::kNonConvergence,
         "chebyshev_project did not converge (gradient norm " + std::to_string(res.grad_norm) + ")",
         res.grad_norm);
  }
  return res.x * scale;
}

SparseApproximant best_mterm_bruteforce(const Vector& f, const Dictionary& dict, int m, double max_supports) {
  const int n = dict.size();
  require(m >= 0 && m <= n, ErrorCode::kInvalidArgument, "best_mterm_bruteforce: need 0 <= m <= n");
  require(f.size() == dict.dim(), ErrorCode::kDimensionMismatch, "best_mterm_bruteforce: dimension mismatch");
  const double log_count = log_binomial(n, m);
  if (log_count > std::log(max_supports)) {
    fail(ErrorCode::kBudgetExceeded,
         "C(" + std::to_string(n) + "," + std::to_string(m) +
             ") supports exceed the brute-force budget; use WCGA instead",
         std::exp(log_count));
  }

  SparseApproximant best;
  best.residual_norm = dict.space().norm(f);
  if (m == 0) return best;

  std::vector<int> support(m);
  std::iota(support.begin(), support.end(), 0);
  bool found = false;
  while (true) {
    if (full_column_rank(select_columns(dict.atoms(), support))) {
      const Vector c = chebyshev_project(f, support, dict);
      Vector r = f;
      for (int k = 0; k < m; ++k) r -= c(k) * dict.atoms().col(support[k]);
      const double rn = dict.space().norm(r);
      if (!found || rn < best.residual_norm - 1e-14 * (1.0 + best.residual_norm)) {
        best.support = support;
        best.coefficients = c;
        best.residual_norm = rn;
        found = true;
      }
    }
    // Next combination in lexicographic order.
    int i = m - 1;
    while (i >= 0 && support[i] == n - m + i) --i;
    if (i < 0) break;
    ++support[i];
    for (int k = i + 1; k < m; ++k) support[k] = support[k - 1] + 1;
  }
  require(found, ErrorCode::kLinearlyDependent,
          "best_mterm_bruteforce: every support of size m is linearly dependent");
  best.history = {best.residual_norm};
  return best;
}

SparseApproximant wcga(const Vector& f, const Dictionary& dict, int m, const WcgaOptions& options) {
  const NormedSpace& space = dict.space();
  require(f.size() == dict.dim(), ErrorCode::kDimensionMismatch, "wcga: dimension mismatch");
  require(m >= 0 && m <= dict.size(), ErrorCode::kInvalidArgument, "wcga: need 0 <= m <= n");
  require(options.weakness > 0.0 && options.weakness <= 1.0, ErrorCode::kInvalidArgument,
          "wcga: weakness parameter must lie in (0, 1]");
  const double fnorm = space.norm(f);
  require(fnorm > 0.0, ErrorCode::kZeroVector, "wcga: input vector is zero");

  SparseApproximant out;
  out.coefficients = Vector();
  out.residual_norm = fnorm;
  std::vector<char> chosen(dict.size(), 0);
  Vector residual = f;

  for (int step = 0; step < m; ++step) {
    if (out.residual_norm <= options.tol * fnorm) {
      out.early_exit = true;
      break;
    }
    const DualFunctional F = norming_functional(space, residual);
    const Vector a = dict.pairings(F.coefficients).cwiseAbs();
    double max_pairing = 0.0;
    for (int j = 0; j < dict.size(); ++j) {
      if (!chosen[j]) max_pairing = std::max(max_pairing, a(j));
    }
    if (max_pairing <= 0.0) {
      out.early_exit = true;
      break;
    }
    const double threshold = options.weakness * max_pairing;
    int pick = -1;
    for (int j = 0; j < dict.size(); ++j) {
      if (!chosen[j] && a(j) >= threshold) {
        pick = j;
        break;
      }
    }

    std::vector<int> support = out.support;
    support.push_back(pick);
    Vector warm(static_cast<Eigen::Index>(support.size()));
    warm << out.coefficients, 0.0;
    Vector c;
    try {
      c = chebyshev_project(f, support, dict, options.projection_tol, &warm);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kLinearlyDependent) throw;
      out.early_exit = true;
      break;
    }
    chosen[pick] = 1;
    out.support = std::move(support);
    out.coefficients = std::move(c);
    residual = f - select_columns(dict.atoms(), out.support) * out.coefficients;
    out.residual_norm = space.norm(residual);
    out.history.push_back(out.residual_norm);
    out.coefficient_history.push_back(out.coefficients);
  }
  return out;
}

std::vector<Vector> sample_octahedron(const Dictionary& dict, int count, std::uint64_t seed) {
  require(count >= 0, ErrorCode::kInvalidArgument, "sample_octahedron: negative count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const int n = dict.size();
  std::vector<Vector> out;
  out.reserve(count);
  std::vector<int> idx(n);
  for (int s = 0; s < count; ++s) {
    const int size = std::clamp(static_cast<int>(std::lround(std::pow(static_cast<double>(n), unif(rng)))), 1, n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < size; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<double> w(size);
    double total = 0.0;
    for (auto& x : w) {
      x = expo(rng);
      total += x;
    }
    Vector f = Vector::Zero(dict.dim());
    for (int i = 0; i < size; ++i) {
      const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
      f += sign * (w[i] / total) * dict.atoms().col(idx[i]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

SigmaProfile sigma_profile(const std::vector<Vector>& samples, const Dictionary& dict,
                           const std::vector<int>& m_list, const WcgaOptions& options) {
  require(!samples.empty(), ErrorCode::kInvalidArgument, "sigma_profile: empty sample set");
  require(!m_list.empty(), ErrorCode::kInvalidArgument, "sigma_profile: empty m list");
  for (const auto& f : samples) {
    if (!in_octahedron(f, dict)) {
      fail(ErrorCode::kInvalidArgument, "sigma_profile: sample lies outside the octahedron");
    }
  }
  const int m_max = *std::max_element(m_list.begin(), m_list.end());
  require(m_max <= dict.size() && *std::min_element(m_list.begin(), m_list.end()) >= 0,
          ErrorCode::kInvalidArgument, "sigma_profile: m values must lie in [0, n]");

  std::vector<double> sigma(m_list.size(), 0.0);
  for (const auto& f : samples) {
    const double fnorm = dict.space().norm(f);
    if (fnorm == 0.0) continue;
    const SparseApproximant a = wcga(f, dict, m_max, options);
    for (std::size_t i = 0; i < m_list.size(); ++i) {
      const int m = m_list[i];
      double r = fnorm;
      if (m > 0) r = a.history.empty() ? fnorm : (m <= static_cast<int>(a.history.size()) ? a.history[m - 1] : a.residual_norm);
      sigma[i] = std::max(sigma[i], r);
    }
  }

  SigmaProfile prof;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    prof.rows.push_back({m_list[i], sigma[i]});
    if (m_list[i] > 0) {
      xs.push_back(m_list[i]);
      ys.push_back(sigma[i]);
    }
  }
  try {
    prof.slope = fit_envelope(xs, ys, dict.size(), EnvelopeModel::kPowerM).exponent;
  } catch (const Error&) {
    prof.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return prof;
}

}  // namespace entnum
