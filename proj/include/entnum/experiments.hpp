#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entnum/entropy.hpp"
#include "entnum/spaces.hpp"

namespace entnum {

// Uniform points of the unit ball of a weighted l_q space (generalized
// Gaussian radial construction).
PointSet sample_lq_ball(const NormedSpace& space, int count, std::uint64_t seed);

struct BallOptions {
  int samples = 4000;  // witness points checked against every net
  std::uint64_t seed = 1;
};

struct BallReport {
  EntropyProfile profile;  // envelope (log2(2n/k)/k)^(1/p)
  int witnesses = 0;
};

// Entropy numbers of B^n_p in l^n_inf. Upper bounds are lattice nets of the
// whole ball (capped by the trivial bound 1), re-verified on a witness
// sample. Lower bounds come from sign-pattern packings
// s^(-1/p) * (+-1 on s coordinates) and sampled farthest-point packings.
BallReport ball_entropy_experiment(double p, int n, const std::vector<int>& k_list, const BallOptions& options = {});

struct DualityOptions {
  int primal_samples = 300;  // points of A_1(D) besides the +-atoms
  int dual_samples = 300;    // points of B(X*) besides the structured ones
  std::uint64_t seed = 1;
  long node_budget = 20000;  // per exact-oracle search; greedy cover beyond it
};

struct DualityRow {
  int k = 0;
  double primal_lower = 0.0;  // eps_k(A_1(D), X)
  double primal_upper = 0.0;
  double dual_lower = 0.0;    // eps_k(B(X*), U-norm)
  double dual_upper = 0.0;
  std::string primal_source;
  std::string dual_source;
};

enum class DualityStatus { kOk, kWarning, kViolation };
std::string to_string(DualityStatus status);

struct DualityReport {
  std::vector<DualityRow> rows;
  double power = 1.0;  // p = q'/2
  double primal_sum_lower = 0.0, primal_sum_upper = 0.0;
  double dual_sum_lower = 0.0, dual_sum_upper = 0.0;
  double ratio_lower = 0.0;  // bounds on sum eps_k(J)^p / sum eps_k(J*)^p
  double ratio_upper = 0.0;
  bool contains_one = false;
  DualityStatus status = DualityStatus::kOk;
};

// Bracketed sums over k = 0..m of eps_k^p for J* (A_1(D) in X) and J (the
// dual unit ball in the U-norm), on witness samples. Violation when the
// ratio interval misses [1e-3, 1e3]; warning when it is wider than 1e4.
DualityReport duality_sum_check(const Dictionary& dict, int m, const DualityOptions& options = {});

struct OctahedronOptions {
  int samples = 400;
  std::uint64_t seed = 1;
  SparseCoverOptions cover;
};

struct OctahedronReport {
  EntropyProfile profile;  // envelope (log2(2n/k)/k)^(1-1/q)
  std::vector<int> terms;  // atoms per center
  std::vector<double> sigma_part;
  std::vector<double> quantization_part;
};

// Entropy profile of A_1(D) in X from the sparse-cover construction (upper,
// sampled) and farthest-point packings of the same sample (lower).
OctahedronReport octahedron_experiment(const Dictionary& dict, const std::vector<int>& k_list,
                                       const OctahedronOptions& options = {});

}  // namespace entnum
