#include "entnum/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entnum/error.hpp"

namespace entnum {

double log_ratio_envelope(int n, double k, double r) {
  return std::pow(std::log2(2.0 * n / k) / k, r);
}

FitResult fit_envelope(const std::vector<double>& xs, const std::vector<double>& values, int n,
                       EnvelopeModel model) {
  require(xs.size() == values.size(), ErrorCode::kDimensionMismatch, "fit: xs and values differ in length");
  require(xs.size() >= 3, ErrorCode::kInvalidArgument, "fit needs at least 3 points");
  const std::size_t count = xs.size();
  std::vector<double> lx(count), ly(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      fail(ErrorCode::kInvalidArgument,
           "fit: entry " + std::to_string(i) + " is not positive (" + std::to_string(values[i]) + ")",
           values[i]);
    }
    require(xs[i] > 0.0, ErrorCode::kInvalidArgument, "fit: abscissae must be positive");
    double x = xs[i];
    if (model == EnvelopeModel::kLogRatioK) {
      require(xs[i] <= 2.0 * n, ErrorCode::kInvalidArgument, "fit: k must not exceed 2n");
      x = std::log2(2.0 * n / xs[i]) / xs[i];
      require(x > 0.0, ErrorCode::kInvalidArgument, "fit: envelope base must be positive");
    }
    lx[i] = std::log(x);
    ly[i] = std::log(values[i]);
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorCode::kInvalidArgument, "fit: abscissae are all equal");

  FitResult out;
  out.exponent = sxy / sxx;
  const double intercept = my - out.exponent * mx;
  out.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = ly[i] - (intercept + out.exponent * lx[i]);
    ss += e * e;
  }
  out.residual_rms = std::sqrt(ss / static_cast<double>(count));
  out.range_lo = *std::min_element(xs.begin(), xs.end());
  out.range_hi = *std::max_element(xs.begin(), xs.end());
  out.points = static_cast<int>(count);
  return out;
}

}  // namespace entnum
