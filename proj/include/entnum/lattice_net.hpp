#pragma once

#include "entnum/spaces.hpp"

namespace entnum {

// The set { y in R^n : |y_i| <= cap, sum_i |y_i|^p <= radius^p }. An infinite
// radius drops the l_p constraint.
struct BoxBall {
  int n = 1;
  double cap = 1.0;
  double p = 2.0;
  double radius = 1.0;
};

// Two cubic lattices of spacing 2*eps. kOdd has centers 2*eps*z (zero is a
// center, so nets are sparse: coordinates with |y_i| <= eps round to zero);
// kShifted has centers 2*eps*(z + 1/2) and is exact for segments.
enum class LatticeKind { kOdd, kShifted };

// Nearest lattice point, ties rounded toward zero. Every y with |y_i| <= cap
// lies within eps (in l_inf) of its center.
Vector lattice_center(const Vector& y, double eps, LatticeKind kind);

// log2 of an upper bound on the number of lattice centers hit by points of
// the set. Counting runs a knapsack over coordinates with the l_p budget
// discretized into `budget_units` (costs rounded down, so the count is an
// overestimate and the net stays valid).
double lattice_net_log2_size(const BoxBall& set, double eps, LatticeKind kind, int budget_units = 2048);

struct LatticeNetBound {
  double eps = 0.0;
  double log2_size = 0.0;
  LatticeKind kind = LatticeKind::kOdd;
};

// Smallest eps (to relative 1e-10) whose net of the given kind has at most
// 2^bits centers. eps = cap always qualifies with one center.
LatticeNetBound lattice_net_radius(const BoxBall& set, double bits, LatticeKind kind);

// Better of the two lattice kinds.
LatticeNetBound best_lattice_net(const BoxBall& set, double bits);

}  // namespace entnum
