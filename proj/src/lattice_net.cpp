#include "entnum/lattice_net.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "entnum/error.hpp"

namespace entnum {
namespace {

struct Level {
  long double mult;
  double cost;  // (lower bound on |y_i|)^p, 0 for the zero level
};

constexpr std::size_t kMaxLevels = 100000;

std::vector<Level> levels(const BoxBall& set, double eps, LatticeKind kind) {
  std::vector<Level> out;
  const double budget = std::isinf(set.radius) ? std::numeric_limits<double>::infinity()
                                               : std::pow(set.radius, set.p);
  if (kind == LatticeKind::kOdd) {
    out.push_back({1.0L, 0.0});
    for (long a = 1;; ++a) {
      const double lower = (2.0 * a - 1.0) * eps;
      if (!(lower < set.cap)) break;
      const double cost = std::pow(lower, set.p);
      if (!(cost < budget)) break;
      out.push_back({2.0L, cost});
      if (out.size() > kMaxLevels) break;
    }
  } else {
    out.push_back({2.0L, 0.0});
    for (long a = 1;; ++a) {
      const double lower = 2.0 * a * eps;
      if (!(lower < set.cap)) break;
      const double cost = std::pow(lower, set.p);
      if (!(cost < budget)) break;
      out.push_back({2.0L, cost});
      if (out.size() > kMaxLevels) break;
    }
  }
  return out;
}

}  // namespace

Vector lattice_center(const Vector& y, double eps, LatticeKind kind) {
  require(eps > 0.0, ErrorCode::kInvalidArgument, "lattice_center: eps must be positive");
  Vector c(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    const double s = y(i) < 0.0 ? -1.0 : 1.0;
    if (kind == LatticeKind::kOdd) {
      const double level = std::max(0.0, std::ceil(a / (2.0 * eps) - 0.5));
      c(i) = s * 2.0 * eps * level;
    } else {
      const double level = std::max(0.0, std::ceil(a / (2.0 * eps)) - 1.0);
      c(i) = s * (2.0 * level + 1.0) * eps;
    }
  }
  return c;
}

double lattice_net_log2_size(const BoxBall& set, double eps, LatticeKind kind, int budget_units) {
  require(set.n >= 1 && set.cap > 0.0 && set.p >= 1.0 && set.radius > 0.0, ErrorCode::kInvalidArgument,
          "lattice net: malformed set");
  require(eps > 0.0, ErrorCode::kInvalidArgument, "lattice net: eps must be positive");
  const std::vector<Level> lv = levels(set, eps, kind);
  // Too fine to count: report an unbounded net rather than a wrong one.
  if (lv.size() > kMaxLevels) return std::numeric_limits<double>::infinity();

  if (std::isinf(set.radius)) {
    long double per = 0.0L;
    for (const auto& l : lv) per += l.mult;
    return static_cast<double>(set.n * std::log2(per));
  }

  const double budget = std::pow(set.radius, set.p);
  // Merge levels by their discretized cost.
  std::map<int, long double> by_units;
  for (const auto& l : lv) {
    const int u = static_cast<int>(std::floor(l.cost / budget * budget_units));
    by_units[u] += l.mult;
  }
  std::vector<long double> dp(budget_units + 1, 0.0L), next(budget_units + 1);
  dp[0] = 1.0L;
  for (int i = 0; i < set.n; ++i) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (int b = 0; b <= budget_units; ++b) {
      if (dp[b] == 0.0L) continue;
      for (const auto& [u, mult] : by_units) {
        if (b + u > budget_units) break;
        next[b + u] += dp[b] * mult;
      }
    }
    dp.swap(next);
  }
  long double total = 0.0L;
  for (long double v : dp) total += v;
  return static_cast<double>(std::log2(total));
}

LatticeNetBound lattice_net_radius(const BoxBall& set, double bits, LatticeKind kind) {
  require(bits >= 0.0, ErrorCode::kInvalidArgument, "lattice net: bits must be >= 0");
  auto fits = [&](double eps) { return lattice_net_log2_size(set, eps, kind) <= bits + 1e-12; };

  double hi = set.cap;
  if (kind == LatticeKind::kShifted && !fits(hi)) {
    // The shifted lattice never drops below 2^n centers.
    return {set.cap, 0.0, LatticeKind::kOdd};
  }
  double lo = hi;
  // Walk down geometrically until the net no longer fits.
  for (int i = 0; i < 40; ++i) {
    lo = hi * 0.5;
    if (!fits(lo)) break;
    hi = lo;
  }
  if (fits(lo)) return {lo, lattice_net_log2_size(set, lo, kind), kind};
  for (int i = 0; i < 100 && (hi - lo) > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (fits(mid)) hi = mid;
    else lo = mid;
  }
  return {hi, lattice_net_log2_size(set, hi, kind), kind};
}

LatticeNetBound best_lattice_net(const BoxBall& set, double bits) {
  const LatticeNetBound odd = lattice_net_radius(set, bits, LatticeKind::kOdd);
  const LatticeNetBound shifted = lattice_net_radius(set, bits, LatticeKind::kShifted);
  return shifted.eps < odd.eps ? shifted : odd;
}

}  // namespace entnum
