#pragma once

#include <memory>
#include <string>
#include <vector>

#include "entnum/spaces.hpp"

namespace entnum {

using PointSet = std::vector<Vector>;

enum class MetricKind { kAmbient, kUNorm, kLInfSubset };

// One distance interface for every covering computation: the ambient
// weighted l_q norm, the U-norm max_j |<F, g_j>| over a dictionary, or the
// sup over a subset of coordinates (the L_inf(Omega_n) semi-norm).
class Metric {
 public:
  static Metric ambient(NormedSpace space);
  static Metric u_norm(Dictionary dict);
  static Metric linf_subset(std::vector<int> coordinates);
  static Metric linf(int dim);

  MetricKind kind() const { return kind_; }
  std::string id() const;

  // Valid only for the matching kind.
  const NormedSpace& space() const { return *space_; }
  const Dictionary& dictionary() const { return *dict_; }
  const std::vector<int>& coordinates() const { return coords_; }

  double size(const Vector& x) const;
  double distance(const Vector& x, const Vector& y) const { return size(x - y); }

 private:
  MetricKind kind_ = MetricKind::kAmbient;
  std::shared_ptr<const NormedSpace> space_;
  std::shared_ptr<const Dictionary> dict_;
  std::vector<int> coords_;
};

// Symmetric |W| x |W| table of pairwise distances.
Matrix distance_matrix(const PointSet& points, const Metric& metric);

}  // namespace entnum
