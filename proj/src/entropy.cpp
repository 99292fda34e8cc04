#include "entnum/entropy.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "json.hpp"

#include "entnum/error.hpp"

namespace entnum {
namespace {

constexpr int kMaxExactPoints = 512;
constexpr int kMaxExactCenters = 16;
using Bits = std::bitset<kMaxExactPoints>;

double log2_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

std::vector<double> sorted_distance_values(const Matrix& d) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(d.rows() * (d.rows() + 1) / 2));
  v.push_back(0.0);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) v.push_back(d(i, j));
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Exact decision procedure: can the points be covered by at most `budget`
// balls of radius r centered at points of the set?
class CoverSearch {
 public:
  CoverSearch(const Matrix& d, double r, long node_budget)
      : n_(static_cast<int>(d.rows())), cover_(n_), node_budget_(node_budget) {
    for (int c = 0; c < n_; ++c) {
      for (int p = 0; p < n_; ++p) {
        if (d(c, p) <= r) cover_[c].set(p);
      }
    }
  }

  bool feasible(int budget, std::vector<int>& chosen) {
    Bits all;
    for (int p = 0; p < n_; ++p) all.set(p);
    chosen.clear();
    return search(all, budget, chosen);
  }

 private:
  bool search(const Bits& uncovered, int budget, std::vector<int>& chosen) {
    if (uncovered.none()) return true;
    if (budget == 0) return false;
    if (++nodes_ > node_budget_) {
      fail(ErrorCode::kBudgetExceeded, "exact cover search exceeded its node budget",
           static_cast<double>(node_budget_));
    }

    // Points whose coverer sets are pairwise disjoint each need their own
    // center: a cheap lower bound.
    std::vector<int> order;
    for (int p = 0; p < n_; ++p) {
      if (uncovered.test(p)) order.push_back(p);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto ca = cover_[a].count(), cb = cover_[b].count();
      return ca != cb ? ca < cb : a < b;
    });
    Bits used;
    int independent = 0;
    for (int p : order) {
      if ((cover_[p] & used).none()) {
        used |= cover_[p];
        if (++independent > budget) return false;
      }
    }

    const int pivot = order.front();
    struct Cand {
      int center;
      Bits gain;
      std::size_t count;
    };
    std::vector<Cand> cands;
    for (int c = 0; c < n_; ++c) {
      if (!cover_[pivot].test(c)) continue;
      Bits g = cover_[c] & uncovered;
      cands.push_back({c, g, g.count()});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.count != b.count ? a.count > b.count : a.center < b.center;
    });
    std::vector<Cand> kept;
    for (const auto& c : cands) {
      bool dominated = false;
      for (const auto& k : kept) {
        if ((c.gain & ~k.gain).none()) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(c);
    }
    for (const auto& c : kept) {
      chosen.push_back(c.center);
      if (search(uncovered & ~c.gain, budget - 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  int n_;
  std::vector<Bits> cover_;
  long node_budget_;
  long nodes_ = 0;
};

void check_exact_preconditions(Eigen::Index points, int centers) {
  if (points > kMaxExactPoints || centers > kMaxExactCenters) {
    fail(ErrorCode::kBudgetExceeded, "exact entropy oracle is limited to |W| <= 512 and 2^k <= 16");
  }
}

}  // namespace

CoverCheck verify_cover(const CoverCertificate& cert, const PointSet& witness, const Metric& metric) {
  CoverCheck out;
  out.ok = true;
  if (witness.empty()) return out;
  if (cert.centers.empty()) {
    out.ok = false;
    out.max_distance = std::numeric_limits<double>::infinity();
    out.worst_index = 0;
    return out;
  }
  const double slack = 1e-12 * (1.0 + cert.radius);
  for (std::size_t i = 0; i < witness.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cert.centers) best = std::min(best, metric.distance(witness[i], c));
    if (best > out.max_distance) {
      out.max_distance = best;
      out.worst_index = static_cast<int>(i);
    }
  }
  out.ok = out.max_distance <= cert.radius + slack;
  return out;
}

PackingCheck verify_packing(const PackingCertificate& cert, const Metric& metric) {
  PackingCheck out;
  out.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.points.size(); ++j) {
      out.min_distance = std::min(out.min_distance, metric.distance(cert.points[i], cert.points[j]));
    }
  }
  if (cert.points.size() < 2) out.min_distance = 0.0;
  out.ok = cert.points.size() < 2 || out.min_distance >= cert.separation - 1e-12 * (1.0 + cert.separation);
  return out;
}

ExactEntropy exact_entropy_small(const Matrix& distances, int k, long node_budget) {
  require(k >= 0, ErrorCode::kInvalidArgument, "exact_entropy_small: k must be >= 0");
  const int n = static_cast<int>(distances.rows());
  require(n >= 1, ErrorCode::kInvalidArgument, "exact_entropy_small: empty point set");
  const int centers = k >= 5 ? kMaxExactCenters + 1 : (1 << k);
  check_exact_preconditions(n, centers);

  ExactEntropy out;
  if (centers >= n) {
    for (int i = 0; i < n; ++i) out.centers.push_back(i);
    return out;
  }
  const std::vector<double> values = sorted_distance_values(distances);
  std::size_t lo = 0, hi = values.size() - 1;
  std::vector<int> chosen;
  {
    CoverSearch s(distances, values[hi], node_budget);
    s.feasible(centers, chosen);
    out.centers = chosen;
  }
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    CoverSearch s(distances, values[mid], node_budget);
    if (s.feasible(centers, chosen)) {
      hi = mid;
      out.centers = chosen;
    } else {
      lo = mid + 1;
    }
  }
  out.radius = values[hi];
  return out;
}

ExactEntropy exact_entropy_small(const PointSet& W, int k, const Metric& metric, long node_budget) {
  check_exact_preconditions(static_cast<Eigen::Index>(W.size()), k >= 5 ? kMaxExactCenters + 1 : (1 << std::max(k, 0)));
  return exact_entropy_small(distance_matrix(W, metric), k, node_budget);
}

int exact_min_cover_count(const Matrix& distances, double radius, int max_count, long node_budget) {
  check_exact_preconditions(distances.rows(), std::min(max_count, kMaxExactCenters));
  CoverSearch s(distances, radius, node_budget);
  std::vector<int> chosen;
  for (int count = 1; count <= max_count; ++count) {
    if (s.feasible(count, chosen)) return count;
  }
  fail(ErrorCode::kBudgetExceeded, "exact_min_cover_count: more than max_count centers needed");
}

std::vector<int> greedy_cover_indices(const Matrix& distances, double epsilon) {
  const auto n = distances.rows();
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  std::vector<int> centers;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (covered[i]) continue;
    centers.push_back(static_cast<int>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (distances(i, j) <= epsilon) covered[j] = 1;
    }
  }
  return centers;
}

CoverCertificate greedy_cover(const PointSet& W, double epsilon, const Metric& metric) {
  require(epsilon > 0.0, ErrorCode::kInvalidArgument, "greedy_cover: epsilon must be positive");
  CoverCertificate cert;
  cert.radius = epsilon;
  cert.metric_id = metric.id();
  cert.provenance = "greedy-cover";
  cert.sampled = true;
  std::vector<char> covered(W.size(), 0);
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (covered[i]) continue;
    cert.centers.push_back(W[i]);
    for (std::size_t j = i; j < W.size(); ++j) {
      if (!covered[j] && metric.distance(W[i], W[j]) <= epsilon) covered[j] = 1;
    }
  }
  cert.log2_net_size = cert.centers.empty() ? 0.0 : std::log2(static_cast<double>(cert.centers.size()));
  return cert;
}

double greedy_cover_radius(const Matrix& distances, int max_centers) {
  require(max_centers >= 1, ErrorCode::kInvalidArgument, "greedy_cover_radius: need at least one center");
  const std::vector<double> values = sorted_distance_values(distances);
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (static_cast<int>(greedy_cover_indices(distances, values[mid]).size()) <= max_centers) hi = mid;
    else lo = mid + 1;
  }
  return values[hi];
}

std::vector<int> farthest_point_indices(const Matrix& distances, int count, std::uint64_t seed) {
  const int n = static_cast<int>(distances.rows());
  require(count >= 1 && count <= n, ErrorCode::kInvalidArgument,
          "farthest_point_packing: count must lie in [1, |W|]");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  // The seeded point is only a probe; the traversal starts at the point
  // farthest from it, which lands on the boundary of the set.
  int start = 0;
  distances.row(pick(rng)).maxCoeff(&start);
  std::vector<int> chosen{start};
  std::vector<char> taken(n, 0);
  taken[start] = 1;
  Vector mind = distances.row(start).transpose();
  while (static_cast<int>(chosen.size()) < count) {
    int best = -1;
    double bestd = -1.0;
    for (int i = 0; i < n; ++i) {
      if (!taken[i] && mind(i) > bestd) {
        bestd = mind(i);
        best = i;
      }
    }
    chosen.push_back(best);
    taken[best] = 1;
    mind = mind.cwiseMin(distances.row(best).transpose());
  }
  return chosen;
}

PackingCertificate farthest_point_packing(const PointSet& W, int count, const Metric& metric, std::uint64_t seed) {
  const Matrix d = distance_matrix(W, metric);
  const std::vector<int> idx = farthest_point_indices(d, count, seed);
  PackingCertificate cert;
  cert.metric_id = metric.id();
  cert.seed = seed;
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    cert.points.push_back(W[idx[i]]);
    for (std::size_t j = i + 1; j < idx.size(); ++j) sep = std::min(sep, d(idx[i], idx[j]));
  }
  cert.separation = idx.size() < 2 ? 0.0 : sep;
  return cert;
}

int sparse_cover_terms(int n, int k) {
  if (k <= 0) return 0;
  const double denom = std::ceil(std::log2(2.0 * n / k) + 1.0);
  return std::min(n, static_cast<int>(std::ceil(k / denom)));
}

namespace {

struct QuantizedCenter {
  std::vector<std::pair<int, long>> key;  // (atom, signed half-level code)
  Vector point;
};

QuantizedCenter quantize(const Dictionary& dict, const std::vector<int>& support, Vector coefs, double bound,
                         double delta, long T) {
  const double l1 = coefs.cwiseAbs().sum();
  if (l1 > bound) coefs *= bound / l1;
  const int m = static_cast<int>(support.size());
  std::vector<long> level(m);
  long total = 0;
  for (int j = 0; j < m; ++j) {
    const double a = std::abs(coefs(j));
    level[j] = a > 0.0 ? std::max(0L, static_cast<long>(std::ceil(a / delta)) - 1) : 0;
    total += level[j];
  }
  while (total > T) {
    auto it = std::max_element(level.begin(), level.end());
    --*it;
    --total;
  }
  QuantizedCenter out;
  out.point = Vector::Zero(dict.dim());
  for (int j = 0; j < m; ++j) {
    const double sign = coefs(j) < 0.0 ? -1.0 : 1.0;
    const double value = sign * delta * (static_cast<double>(level[j]) + 0.5);
    out.point += value * dict.atoms().col(support[j]);
    out.key.emplace_back(support[j], static_cast<long>(sign) * (2 * level[j] + 1));
  }
  std::sort(out.key.begin(), out.key.end());
  return out;
}

double sparse_net_log2_size(int n, int m, long T) {
  return log2_binomial(n, m) + m + log2_binomial(static_cast<double>(T + m), m);
}

}  // namespace

SparseCoverResult cover_from_sparse(const Dictionary& dict, int k, const PointSet& witness,
                                    const SparseCoverOptions& options) {
  const int n = dict.size();
  require(k >= 0 && k <= n, ErrorCode::kInvalidArgument, "cover_from_sparse: need 0 <= k <= n");
  require(!witness.empty(), ErrorCode::kInvalidArgument, "cover_from_sparse: empty witness sample");
  const NormedSpace& space = dict.space();
  const double B = options.coefficient_bound;
  const int m0 = sparse_cover_terms(n, k);

  struct Approx {
    std::vector<int> support;
    std::vector<Vector> coefs;  // per step
  };
  std::vector<Approx> approx(witness.size());
  if (m0 > 0) {
    for (std::size_t i = 0; i < witness.size(); ++i) {
      if (space.norm(witness[i]) == 0.0) continue;
      SparseApproximant a = wcga(witness[i], dict, m0, options.wcga);
      approx[i].support = std::move(a.support);
      approx[i].coefs = std::move(a.coefficient_history);
    }
  }

  SparseCoverResult best;
  best.certificate.radius = std::numeric_limits<double>::infinity();
  bool any_positive_m = false;

  auto evaluate = [&](int m, long T, double delta, double log2_size) {
    SparseCoverResult r;
    r.m = m;
    r.delta = delta;
    r.log2_net_size = log2_size;
    std::map<std::vector<std::pair<int, long>>, int> seen;
    double radius = 0.0;
    for (std::size_t i = 0; i < witness.size(); ++i) {
      const Vector& f = witness[i];
      Vector approx_point = Vector::Zero(dict.dim());
      QuantizedCenter qc;
      if (m == 0) {
        qc.point = Vector::Zero(dict.dim());
      } else {
        std::vector<int> support;
        Vector c;
        const auto& ap = approx[i];
        const int h = static_cast<int>(ap.coefs.size());
        if (h >= m) {
          support.assign(ap.support.begin(), ap.support.begin() + m);
          c = ap.coefs[m - 1];
        } else {
          support = ap.support;
          c = h > 0 ? ap.coefs[h - 1] : Vector();
        }
        // Pad with the lowest unused atoms at coefficient zero.
        std::vector<char> used(n, 0);
        for (int s : support) used[s] = 1;
        Vector padded = Vector::Zero(m);
        padded.head(c.size()) = c;
        for (int j = 0; static_cast<int>(support.size()) < m && j < n; ++j) {
          if (!used[j]) support.push_back(j);
        }
        for (int j = 0; j < m; ++j) approx_point += padded(j) * dict.atoms().col(support[j]);
        qc = quantize(dict, support, padded, B, delta, T);
      }
      r.sigma_part = std::max(r.sigma_part, space.norm(f - approx_point));
      r.quantization_part = std::max(r.quantization_part, space.norm(approx_point - qc.point));
      radius = std::max(radius, space.norm(f - qc.point));
      if (seen.emplace(qc.key, 0).second) r.certificate.centers.push_back(qc.point);
    }
    r.certificate.radius = radius;
    if (radius < best.certificate.radius) best = std::move(r);
  };

  for (int m = m0; m >= 1; --m) {
    const double base = sparse_net_log2_size(n, m, 0);
    if (base > k + 1e-12) continue;
    any_positive_m = true;
    long lo = 0, hi = 1;
    while (hi < (1L << 40) && sparse_net_log2_size(n, m, hi) <= k + 1e-12) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (sparse_net_log2_size(n, m, mid) <= k + 1e-12) lo = mid;
      else hi = mid;
    }
    const long T = lo;
    evaluate(m, T, B / static_cast<double>(T + 1), sparse_net_log2_size(n, m, T));
  }
  if (m0 >= 1 && !any_positive_m) {
    fail(ErrorCode::kInfeasible,
         "cover_from_sparse: no m-term net fits 2^" + std::to_string(k) +
             " centers; use k >= log2(2n) = " + std::to_string(std::log2(2.0 * n)));
  }
  evaluate(0, 0, 0.0, 0.0);

  auto& cert = best.certificate;
  cert.metric_id = Metric::ambient(space).id();
  cert.covered_set = "A_1(D_n), n=" + std::to_string(n);
  cert.provenance = "sparse-cover";
  cert.k = k;
  cert.log2_net_size = best.log2_net_size;
  cert.sampled = true;
  return best;
}

void enforce_monotone(EntropyProfile& profile) {
  auto& rows = profile.rows;
  std::sort(rows.begin(), rows.end(), [](const ProfileRow& a, const ProfileRow& b) { return a.k < b.k; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].upper < rows[i].upper) {
      rows[i].upper = rows[i - 1].upper;
      rows[i].upper_source = rows[i - 1].upper_source;
    }
  }
  for (std::size_t i = rows.size(); i-- > 1;) {
    if (rows[i].lower > rows[i - 1].lower) {
      rows[i - 1].lower = rows[i].lower;
      rows[i - 1].lower_source = rows[i].lower_source;
    }
  }
  for (auto& r : rows) r.ratio = r.envelope > 0.0 ? r.upper / r.envelope : 0.0;
}

double ratio_spread(const EntropyProfile& profile, int k_lo, int k_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : profile.rows) {
    if (r.k < k_lo || r.k > k_hi) continue;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  require(hi > 0.0 && lo > 0.0, ErrorCode::kInvalidArgument, "ratio_spread: no positive ratios in range");
  return hi / lo;
}

namespace {

using nlohmann::json;

json vec_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json space_to_json(const NormedSpace& s) {
  return {{"norm_kind", s.kind() == NormKind::kSequence ? "sequence" : "discrete"},
          {"q", s.q()},
          {"weights", vec_to_json(s.weights())}};
}

NormedSpace space_from_json(const json& j) {
  const Vector w = vec_from_json(j.at("weights"));
  if (j.at("norm_kind").get<std::string>() == "sequence") {
    return NormedSpace::sequence(static_cast<int>(w.size()), j.at("q").get<double>());
  }
  return NormedSpace::discrete(w, j.at("q").get<double>());
}

json metric_to_json(const Metric& m) {
  switch (m.kind()) {
    case MetricKind::kAmbient:
      return {{"kind", "ambient"}, {"space", space_to_json(m.space())}};
    case MetricKind::kUNorm: {
      json atoms = json::array();
      for (int j = 0; j < m.dictionary().size(); ++j) atoms.push_back(vec_to_json(m.dictionary().atom(j)));
      return {{"kind", "u_norm"}, {"space", space_to_json(m.dictionary().space())}, {"atoms", atoms}};
    }
    case MetricKind::kLInfSubset:
      return {{"kind", "linf_subset"}, {"coordinates", m.coordinates()}};
  }
  return {};
}

Metric metric_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ambient") return Metric::ambient(space_from_json(j.at("space")));
  if (kind == "u_norm") {
    NormedSpace s = space_from_json(j.at("space"));
    const auto& atoms = j.at("atoms");
    Matrix G(s.dim(), static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t c = 0; c < atoms.size(); ++c) G.col(static_cast<Eigen::Index>(c)) = vec_from_json(atoms[c]);
    return Metric::u_norm(Dictionary(s, G));
  }
  if (kind == "linf_subset") return Metric::linf_subset(j.at("coordinates").get<std::vector<int>>());
  fail(ErrorCode::kInvalidArgument, "unknown metric kind '" + kind + "'");
}

}  // namespace

std::string cover_certificate_to_json(const CoverCertificate& cert, const Metric& metric, const PointSet* witness) {
  json j;
  json centers = json::array();
  for (const auto& c : cert.centers) centers.push_back(vec_to_json(c));
  j["centers"] = centers;
  j["radius"] = cert.radius;
  j["metric_id"] = cert.metric_id.empty() ? metric.id() : cert.metric_id;
  j["metric"] = metric_to_json(metric);
  j["covered_set"] = cert.covered_set;
  j["provenance"] = cert.provenance;
  j["seed"] = cert.seed;
  j["k"] = cert.k;
  j["log2_net_size"] = cert.log2_net_size;
  j["sampled"] = cert.sampled;
  if (witness != nullptr) {
    json w = json::array();
    for (const auto& p : *witness) w.push_back(vec_to_json(p));
    j["witness"] = w;
  }
  return j.dump(2);
}

CoverDocument cover_certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    CoverDocument doc;
    for (const auto& c : j.at("centers")) doc.certificate.centers.push_back(vec_from_json(c));
    doc.certificate.radius = j.at("radius").get<double>();
    doc.certificate.metric_id = j.value("metric_id", "");
    doc.certificate.covered_set = j.value("covered_set", "");
    doc.certificate.provenance = j.value("provenance", "");
    doc.certificate.seed = j.value("seed", std::uint64_t{0});
    doc.certificate.k = j.value("k", -1);
    doc.certificate.log2_net_size = j.value("log2_net_size", 0.0);
    doc.certificate.sampled = j.value("sampled", true);
    doc.metric = metric_from_json(j.at("metric"));
    if (j.contains("witness")) {
      for (const auto& p : j.at("witness")) doc.witness.push_back(vec_from_json(p));
    }
    return doc;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace entnum
