#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entnum/greedy.hpp"
#include "entnum/metric.hpp"

namespace entnum {

// Explicit centers plus a radius. `sampled` marks covers that are certified
// only on a finite witness sample of the set; `log2_net_size` is the size of
// the full net the centers were drawn from (for implicit nets the listed
// centers are the ones the witness actually uses).
struct CoverCertificate {
  PointSet centers;
  double radius = 0.0;
  std::string metric_id;
  std::string covered_set;
  std::string provenance;
  std::uint64_t seed = 0;
  int k = -1;
  double log2_net_size = 0.0;
  bool sampled = true;
};

struct PackingCertificate {
  PointSet points;
  double separation = 0.0;
  std::string metric_id;
  std::uint64_t seed = 0;
};

struct CoverCheck {
  bool ok = false;
  double max_distance = 0.0;
  int worst_index = -1;
};

// Re-verification from the metric alone: every witness point within radius
// (plus 1e-12 relative slack) of some center.
CoverCheck verify_cover(const CoverCertificate& cert, const PointSet& witness, const Metric& metric);

struct PackingCheck {
  bool ok = false;
  double min_distance = 0.0;
};
PackingCheck verify_packing(const PackingCertificate& cert, const Metric& metric);

struct ExactEntropy {
  double radius = 0.0;
  std::vector<int> centers;  // indices into W
};

// Minimal radius achievable with 2^k centers chosen from W (restricted
// centers). Relation to the free-center entropy number: eps_k <= r <= 2 eps_k.
// Preconditions |W| <= 512 and 2^k <= 16; kBudgetExceeded when the search
// exceeds `node_budget` branch-and-bound nodes.
ExactEntropy exact_entropy_small(const PointSet& W, int k, const Metric& metric, long node_budget = 20000000);

// Same engine on a precomputed distance table.
ExactEntropy exact_entropy_small(const Matrix& distances, int k, long node_budget = 20000000);

// Fewest centers from W covering W at the given radius (exact; at most
// max_count, else kBudgetExceeded).
int exact_min_cover_count(const Matrix& distances, double radius, int max_count = 16,
                          long node_budget = 20000000);

// Classical greedy: scan W in order, open a center at every uncovered point.
CoverCertificate greedy_cover(const PointSet& W, double epsilon, const Metric& metric);
std::vector<int> greedy_cover_indices(const Matrix& distances, double epsilon);

// Smallest pairwise-distance value r for which greedy_cover uses at most
// `max_centers` centers (binary search over the sorted distance values).
double greedy_cover_radius(const Matrix& distances, int max_centers);

// Farthest-point traversal starting at the point farthest from a seeded
// probe, lowest index on ties.
PackingCertificate farthest_point_packing(const PointSet& W, int count, const Metric& metric, std::uint64_t seed);
std::vector<int> farthest_point_indices(const Matrix& distances, int count, std::uint64_t seed);

struct SparseCoverOptions {
  double coefficient_bound = 1.0;  // l1 bound imposed on the m-term coefficients
  WcgaOptions wcga;
};

struct SparseCoverResult {
  CoverCertificate certificate;
  int m = 0;               // atoms per center
  double delta = 0.0;      // coefficient grid step
  double log2_net_size = 0.0;
  double sigma_part = 0.0;         // max_f ||f - A_m f|| (WCGA)
  double quantization_part = 0.0;  // max_f ||A_m f - center(f)||
};

// Number of atoms per center suggested by the net-counting argument:
// ceil(k / ceil(log2(2n/k) + 1)), zero for k = 0.
int sparse_cover_terms(int n, int k);

// Cover of a witness sample of A_1(D) by centers sum_{j in L} c_j g_j with
// |L| = m and c on the half-integer grid delta*(Z + 1/2)^m inside an l1 ball.
// The net size C(n,m) * 2^m * C(T+m, m) (T = ceil(B/delta) - 1) is kept
// <= 2^k; among feasible (m, delta) the smallest witness radius wins.
// kInfeasible when no m >= 1 fits the budget for k >= 1.
SparseCoverResult cover_from_sparse(const Dictionary& dict, int k, const PointSet& witness,
                                    const SparseCoverOptions& options = {});

// Bounds on eps_k per k. Sources: exact | greedy-cover | sparse-cover |
// packing | trivial, each optionally suffixed "(sampled)".
struct ProfileRow {
  int k = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_source;
  std::string upper_source;
  double envelope = 0.0;
  double ratio = 0.0;  // upper / envelope
};

struct EntropyProfile {
  std::vector<ProfileRow> rows;
};

// Propagates bounds along k (rows sorted by k): eps_k is nonincreasing, so
// upper_k may take min over k' <= k and lower_k may take max over k' >= k.
void enforce_monotone(EntropyProfile& profile);

// max/min of ratio over rows with k in [k_lo, k_hi].
double ratio_spread(const EntropyProfile& profile, int k_lo, int k_hi);

// JSON document for replaying a cover certificate: centers, radius, metric
// (fully specified), provenance, seed, and optionally the witness sample.
std::string cover_certificate_to_json(const CoverCertificate& cert, const Metric& metric,
                                      const PointSet* witness = nullptr);

struct CoverDocument {
  CoverCertificate certificate;
  Metric metric = Metric::linf(1);
  PointSet witness;
};
CoverDocument cover_certificate_from_json(const std::string& text);

}  // namespace entnum
