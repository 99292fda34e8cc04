#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "entnum/lattice_net.hpp"

using namespace entnum;

namespace {

// Uniform point of {|y_i| <= cap, ||y||_p <= R} by rejection from the box.
Vector sample_box_ball(const BoxBall& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-s.cap, s.cap);
  while (true) {
    Vector y(s.n);
    double sum = 0.0;
    for (int i = 0; i < s.n; ++i) {
      y(i) = u(rng);
      sum += std::pow(std::abs(y(i)), s.p);
    }
    if (!std::isfinite(s.radius) || sum <= std::pow(s.radius, s.p)) return y;
  }
}

}  // namespace

TEST_CASE("lattice centers are within eps") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (LatticeKind kind : {LatticeKind::kOdd, LatticeKind::kShifted}) {
    for (int t = 0; t < 200; ++t) {
      Vector y(4);
      for (int i = 0; i < 4; ++i) y(i) = u(rng);
      const double eps = 0.01 + std::abs(u(rng));
      CHECK((y - lattice_center(y, eps, kind)).cwiseAbs().maxCoeff() <= eps * (1 + 1e-12));
    }
  }
  // Ties round toward zero.
  CHECK(lattice_center(Vector::Constant(1, 0.5), 0.5, LatticeKind::kOdd)(0) == 0.0);
  CHECK(lattice_center(Vector::Constant(1, 1.0), 0.5, LatticeKind::kShifted)(0) == 0.5);
}

TEST_CASE("segment nets are dyadic") {
  const BoxBall seg{1, 1.0, 2.0, INFINITY};
  for (int k = 0; k <= 6; ++k) {
    const LatticeNetBound b = best_lattice_net(seg, k);
    CHECK(b.eps <= std::pow(2.0, -k) * (1 + 1e-9));
    CHECK(b.log2_size <= k + 1e-12);
  }
}

TEST_CASE("counts dominate the centers actually hit by dense samples") {
  std::mt19937_64 rng(2);
  for (const BoxBall s : {BoxBall{3, 1.0, 2.0, 1.0}, BoxBall{4, 0.8, 3.0, 1.2}, BoxBall{2, 1.0, 2.0, INFINITY}}) {
    for (LatticeKind kind : {LatticeKind::kOdd, LatticeKind::kShifted}) {
      for (double eps : {0.15, 0.3, 0.6}) {
        std::set<std::vector<long>> hit;
        for (int t = 0; t < 20000; ++t) {
          const Vector c = lattice_center(sample_box_ball(s, rng), eps, kind);
          std::vector<long> key(c.size());
          for (Eigen::Index i = 0; i < c.size(); ++i) key[i] = std::lround(4 * c(i) / eps);
          hit.insert(key);
        }
        CHECK(std::log2(static_cast<double>(hit.size())) <= lattice_net_log2_size(s, eps, kind) + 1e-12);
      }
    }
  }
}

TEST_CASE("net radius is monotone in the bit budget") {
  const BoxBall s{16, 1.0, 2.0, 1.0};
  double prev = INFINITY;
  for (int k = 0; k <= 16; ++k) {
    const LatticeNetBound b = best_lattice_net(s, k);
    CHECK(b.eps <= prev + 1e-12);
    CHECK(b.eps <= 1.0);
    CHECK(b.log2_size <= k + 1e-9);
    prev = b.eps;
  }
}
