#include <cmath>

#include "doctest.h"
#include "entnum/error.hpp"
#include "entnum/fit.hpp"

using namespace entnum;

TEST_CASE("exact recovery of the log-ratio envelope") {
  const int n = 64;
  std::vector<double> ks = {4, 8, 16, 32}, vals;
  for (double k : ks) vals.push_back(std::pow(std::log2(2.0 * n / k) / k, 0.5));
  const FitResult f = fit_envelope(ks, vals, n, EnvelopeModel::kLogRatioK);
  CHECK(std::abs(f.exponent - 0.5) <= 1e-9);
  CHECK(std::abs(f.constant - 1.0) <= 1e-9);
  CHECK(f.residual_rms <= 1e-12);
  CHECK(f.points == 4);
  CHECK(f.range_lo == 4);
  CHECK(f.range_hi == 32);
}

TEST_CASE("exact recovery of a power law") {
  std::vector<double> ms = {1, 2, 4, 8, 16}, vals;
  for (double m : ms) vals.push_back(3.0 * std::pow(m, -1.0 / 3.0));
  const FitResult f = fit_envelope(ms, vals, 0, EnvelopeModel::kPowerM);
  CHECK(std::abs(f.exponent + 1.0 / 3.0) <= 1e-9);
  CHECK(std::abs(f.constant - 3.0) <= 1e-9);
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_envelope({1, 2}, {1, 1}, 0, EnvelopeModel::kPowerM), Error);
  CHECK_THROWS_AS(fit_envelope({1, 2, 3}, {1, 0, 1}, 0, EnvelopeModel::kPowerM), Error);
  CHECK_THROWS_AS(fit_envelope({1, 2, 3}, {1, -1, 1}, 0, EnvelopeModel::kPowerM), Error);
  CHECK(log_ratio_envelope(64, 8, 0.5) == doctest::Approx(std::sqrt(4.0 / 8.0)));
}
