#include "entnum/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "entnum/error.hpp"
#include "entnum/greedy.hpp"
#include "entnum/lattice_net.hpp"

namespace entnum {
namespace {

double log2_binomial(int n, int k) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

double min_separation(const Matrix& d, const std::vector<int>& idx) {
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) sep = std::min(sep, d(idx[a], idx[b]));
  }
  return sep;
}

// Half the separation of a farthest-point packing with 2^k + 1 points, or 0
// when the sample is too small.
double sampled_packing_lower(const Matrix& d, int k, std::uint64_t seed) {
  if (k >= 30) return 0.0;
  const long count = (1L << k) + 1;
  if (count > d.rows()) return 0.0;
  return min_separation(d, farthest_point_indices(d, static_cast<int>(count), seed)) / 2.0;
}

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_source;
  std::string upper_source;
};

Bracket bracket_sample(const PointSet& W, const Matrix& d, const Metric& metric, int k, long node_budget,
                       std::uint64_t seed) {
  Bracket b;
  double zero_radius = 0.0;
  for (const Vector& x : W) zero_radius = std::max(zero_radius, metric.size(x));
  b.upper = zero_radius;
  b.upper_source = "trivial(sampled)";
  double r = std::numeric_limits<double>::infinity();
  std::string src;
  if (k <= 4 && W.size() <= 512) {
    try {
      r = exact_entropy_small(d, k, node_budget).radius;
      src = "exact(sampled)";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
    }
  }
  if (!std::isfinite(r)) {
    const long centers = k >= 30 ? std::numeric_limits<int>::max() : (1L << k);
    r = centers >= static_cast<long>(W.size()) ? 0.0 : greedy_cover_radius(d, static_cast<int>(centers));
    src = "greedy-cover(sampled)";
  }
  if (r < b.upper) {
    b.upper = r;
    b.upper_source = src;
  }
  b.lower = sampled_packing_lower(d, k, seed);
  b.lower_source = b.lower > 0.0 ? "packing(sampled)" : "none";
  return b;
}

}  // namespace

PointSet sample_lq_ball(const NormedSpace& space, int count, std::uint64_t seed) {
  require(count >= 0, ErrorCode::kInvalidArgument, "sample_lq_ball: negative count");
  const int n = space.dim();
  const double q = space.q();
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0 / q, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution coin(0.5);
  const Vector scale = space.kind() == NormKind::kSequence
                           ? Vector::Ones(n)
                           : Vector(space.weights().array().pow(-1.0 / q));
  PointSet out;
  out.reserve(count);
  for (int t = 0; t < count; ++t) {
    Vector x(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = gamma(rng);
      x(i) = (coin(rng) ? 1.0 : -1.0) * std::pow(g, 1.0 / q);
      s += g;
    }
    s += expo(rng);
    out.push_back(scale.cwiseProduct(x) / std::pow(s, 1.0 / q));
  }
  return out;
}

BallReport ball_entropy_experiment(double p, int n, const std::vector<int>& k_list, const BallOptions& options) {
  require(p >= 2.0 && std::isfinite(p), ErrorCode::kInvalidArgument,
          "ball_entropy_experiment: needs p >= 2, got " + std::to_string(p));
  require(n >= 1, ErrorCode::kInvalidArgument, "ball_entropy_experiment: n must be positive");
  for (int k : k_list) {
    require(k >= 1 && k <= n, ErrorCode::kInvalidArgument, "ball_entropy_experiment: k values must lie in [1, n]");
  }
  const NormedSpace space = NormedSpace::sequence(n, p);
  PointSet W = sample_lq_ball(space, options.samples, options.seed);
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    W.push_back(e);
    W.push_back(-e);
  }
  for (int s = 1; s <= n; ++s) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    Vector v = Vector::Zero(n);
    for (int i = 0; i < s; ++i) v(idx[i]) = (coin(rng) ? 1.0 : -1.0) * std::pow(s, -1.0 / p);
    W.push_back(v);
  }
  for (const Vector& y : W) {
    if (space.norm(y) > 1.0 + 1e-12) fail(ErrorCode::kPropertyViolation, "ball witness lies outside B^n_p");
  }
  const Metric linf = Metric::linf(n);
  const Matrix d = distance_matrix(W, linf);
  const BoxBall ball{n, 1.0, p, 1.0};

  BallReport rep;
  rep.witnesses = static_cast<int>(W.size());
  std::vector<int> ks = k_list;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks) {
    ProfileRow row;
    row.k = k;
    const LatticeNetBound net = best_lattice_net(ball, k);
    if (net.eps >= 1.0) {
      row.upper = 1.0;
      row.upper_source = "trivial";
    } else {
      row.upper = net.eps;
      row.upper_source = "sparse-cover";
      for (const Vector& y : W) {
        if (linf.distance(y, lattice_center(y, net.eps, net.kind)) > net.eps * (1.0 + 1e-12)) {
          fail(ErrorCode::kPropertyViolation, "lattice net fails to cover a ball witness");
        }
      }
    }
    for (int s = 1; s <= n; ++s) {
      if (log2_binomial(n, s) + s > k) {
        const double v = 0.5 * std::pow(s, -1.0 / p);
        if (v > row.lower) {
          row.lower = v;
          row.lower_source = "packing";
        }
      }
    }
    const double sampled = sampled_packing_lower(d, k, options.seed + k);
    if (sampled > row.lower) {
      row.lower = sampled;
      row.lower_source = "packing(sampled)";
    }
    row.envelope = std::pow(std::log2(2.0 * n / k) / k, 1.0 / p);
    rep.profile.rows.push_back(row);
  }
  enforce_monotone(rep.profile);
  return rep;
}

std::string to_string(DualityStatus status) {
  switch (status) {
    case DualityStatus::kOk: return "ok";
    case DualityStatus::kWarning: return "warning";
    case DualityStatus::kViolation: return "violation";
  }
  return "unknown";
}

DualityReport duality_sum_check(const Dictionary& dict, int m, const DualityOptions& options) {
  const int n = dict.size();
  require(m >= 0, ErrorCode::kInvalidArgument, "duality_sum_check: m must be >= 0");
  require(n <= 12, ErrorCode::kInvalidArgument, "duality_sum_check: needs n <= 12 for the bracketed oracles");
  const NormedSpace& space = dict.space();
  const NormedSpace dual = space.dual_space();
  const int dim = dict.dim();

  PointSet primal = sample_octahedron(dict, options.primal_samples, options.seed);
  for (int j = 0; j < n; ++j) {
    primal.push_back(dict.atom(j));
    primal.push_back(-dict.atom(j));
  }
  PointSet dualpts = sample_lq_ball(dual, options.dual_samples, options.seed + 1);
  for (int j = 0; j < n; ++j) {
    const Vector F = norming_functional(space, dict.atom(j)).coefficients;
    dualpts.push_back(F);
    dualpts.push_back(-F);
  }
  for (int i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    e /= dual.norm(e);
    dualpts.push_back(e);
    dualpts.push_back(-e);
  }

  const Metric amb = Metric::ambient(space);
  const Metric unorm = Metric::u_norm(dict);
  const Matrix dp = distance_matrix(primal, amb);
  const Matrix dd = distance_matrix(dualpts, unorm);

  DualityReport rep;
  rep.power = dual.q() / 2.0;
  EntropyProfile pp, dpf;
  for (int k = 0; k <= m; ++k) {
    const Bracket a = bracket_sample(primal, dp, amb, k, options.node_budget, options.seed + k);
    const Bracket b = bracket_sample(dualpts, dd, unorm, k, options.node_budget, options.seed + k);
    pp.rows.push_back({k, a.lower, a.upper, a.lower_source, a.upper_source, 1.0, 0.0});
    dpf.rows.push_back({k, b.lower, b.upper, b.lower_source, b.upper_source, 1.0, 0.0});
  }
  enforce_monotone(pp);
  enforce_monotone(dpf);
  const double pw = rep.power;
  for (int k = 0; k <= m; ++k) {
    const ProfileRow& a = pp.rows[k];
    const ProfileRow& b = dpf.rows[k];
    rep.rows.push_back({k, a.lower, a.upper, b.lower, b.upper, a.upper_source, b.upper_source});
    rep.primal_sum_lower += std::pow(a.lower, pw);
    rep.primal_sum_upper += std::pow(a.upper, pw);
    rep.dual_sum_lower += std::pow(b.lower, pw);
    rep.dual_sum_upper += std::pow(b.upper, pw);
  }
  const double inf = std::numeric_limits<double>::infinity();
  rep.ratio_lower = rep.primal_sum_upper > 0.0 ? rep.dual_sum_lower / rep.primal_sum_upper : inf;
  rep.ratio_upper = rep.primal_sum_lower > 0.0 ? rep.dual_sum_upper / rep.primal_sum_lower : inf;
  rep.contains_one = rep.ratio_lower <= 1.0 && 1.0 <= rep.ratio_upper;
  if (rep.ratio_upper < 1e-3 || rep.ratio_lower > 1e3) {
    rep.status = DualityStatus::kViolation;
  } else if (!(rep.ratio_upper <= 1e4 * rep.ratio_lower)) {
    rep.status = DualityStatus::kWarning;
  }
  return rep;
}

OctahedronReport octahedron_experiment(const Dictionary& dict, const std::vector<int>& k_list,
                                       const OctahedronOptions& options) {
  const int n = dict.size();
  for (int k : k_list) {
    require(k >= 1 && k <= n, ErrorCode::kInvalidArgument, "octahedron_experiment: k values must lie in [1, n]");
  }
  const NormedSpace& space = dict.space();
  PointSet W = sample_octahedron(dict, options.samples, options.seed);
  for (int j = 0; j < n; ++j) {
    W.push_back(dict.atom(j));
    W.push_back(-dict.atom(j));
  }
  const Metric amb = Metric::ambient(space);
  const Matrix d = distance_matrix(W, amb);
  const double r = 1.0 - 1.0 / space.q();

  OctahedronReport rep;
  std::vector<int> ks = k_list;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks) {
    ProfileRow row;
    row.k = k;
    row.upper = 1.0;
    row.upper_source = "trivial";
    int terms = 0;
    double sp = 0.0, qp = 0.0;
    try {
      const SparseCoverResult c = cover_from_sparse(dict, k, W, options.cover);
      if (!verify_cover(c.certificate, W, amb).ok) {
        fail(ErrorCode::kPropertyViolation, "sparse cover certificate fails re-verification at k=" + std::to_string(k));
      }
      if (c.certificate.radius < row.upper) {
        row.upper = c.certificate.radius;
        row.upper_source = "sparse-cover(sampled)";
      }
      terms = c.m;
      sp = c.sigma_part;
      qp = c.quantization_part;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible) throw;
    }
    row.lower = sampled_packing_lower(d, k, options.seed + k);
    row.lower_source = row.lower > 0.0 ? "packing(sampled)" : "none";
    row.envelope = std::pow(std::log2(2.0 * n / k) / k, r);
    rep.profile.rows.push_back(row);
    rep.terms.push_back(terms);
    rep.sigma_part.push_back(sp);
    rep.quantization_part.push_back(qp);
  }
  enforce_monotone(rep.profile);
  return rep;
}

}  // namespace entnum
