#pragma once

#include <vector>

namespace entnum {

enum class EnvelopeModel {
  kPowerM,     // value ~ C * m^r
  kLogRatioK,  // value ~ C * (log2(2n/k) / k)^r
};

struct FitResult {
  double exponent = 0.0;   // r
  double constant = 0.0;   // C
  double residual_rms = 0.0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  int points = 0;
};

// (log2(2n/k) / k)^r, the entropy envelope.
double log_ratio_envelope(int n, double k, double r);

// Least squares of log(value) on log(m) or log(log2(2n/k)/k). Needs at least
// three entries, all positive and finite.
FitResult fit_envelope(const std::vector<double>& xs, const std::vector<double>& values, int n,
                       EnvelopeModel model);

}  // namespace entnum
