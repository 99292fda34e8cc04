#include "entnum/metric.hpp"

#include <cmath>

#include "entnum/error.hpp"

namespace entnum {

Metric Metric::ambient(NormedSpace space) {
  Metric m;
  m.kind_ = MetricKind::kAmbient;
  m.space_ = std::make_shared<const NormedSpace>(std::move(space));
  return m;
}

Metric Metric::u_norm(Dictionary dict) {
  Metric m;
  m.kind_ = MetricKind::kUNorm;
  m.dict_ = std::make_shared<const Dictionary>(std::move(dict));
  return m;
}

Metric Metric::linf_subset(std::vector<int> coordinates) {
  require(!coordinates.empty(), ErrorCode::kInvalidArgument, "L_inf subset metric needs coordinates");
  Metric m;
  m.kind_ = MetricKind::kLInfSubset;
  m.coords_ = std::move(coordinates);
  return m;
}

Metric Metric::linf(int dim) {
  std::vector<int> all(dim);
  for (int i = 0; i < dim; ++i) all[i] = i;
  return linf_subset(std::move(all));
}

std::string Metric::id() const {
  switch (kind_) {
    case MetricKind::kAmbient: {
      std::string s = space_->kind() == NormKind::kSequence ? "lq" : "Lq_mu";
      return s + "(q=" + std::to_string(space_->q()) + ",dim=" + std::to_string(space_->dim()) + ")";
    }
    case MetricKind::kUNorm:
      return "U(n=" + std::to_string(dict_->size()) + ",q=" + std::to_string(dict_->space().q()) + ")";
    case MetricKind::kLInfSubset:
      return "Linf(points=" + std::to_string(coords_.size()) + ")";
  }
  return "unknown";
}

double Metric::size(const Vector& x) const {
  switch (kind_) {
    case MetricKind::kAmbient:
      return space_->norm(x);
    case MetricKind::kUNorm:
      return dict_->pairings(x).cwiseAbs().maxCoeff();
    case MetricKind::kLInfSubset: {
      double best = 0.0;
      for (int c : coords_) {
        require(c >= 0 && c < x.size(), ErrorCode::kDimensionMismatch, "L_inf subset index out of range");
        best = std::max(best, std::abs(x(c)));
      }
      return best;
    }
  }
  return 0.0;
}

Matrix distance_matrix(const PointSet& points, const Metric& metric) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = metric.distance(points[i], points[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace entnum
