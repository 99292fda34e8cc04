#pragma once

#include <cstdint>
#include <vector>

#include "entnum/spaces.hpp"

namespace entnum {

struct SparseApproximant {
  std::vector<int> support;   // 0-based atom indices, in selection order
  Vector coefficients;        // aligned with support
  double residual_norm = 0.0;
  std::vector<double> history;  // residual norm after each greedy step
  bool early_exit = false;      // residual dropped below tolerance before m steps

  // Coefficients after each step (step s has s+1 entries); WCGA only.
  std::vector<Vector> coefficient_history;

  Vector approximant(const Dictionary& dict) const;
};

// Octahedron membership: ||f||_A <= 1 + 1e-9.
bool in_octahedron(const Vector& f, const Dictionary& dict);

// Coefficients minimizing ||f - sum_{j in support} c_j g_j||. Closed-form
// weighted least squares for q = 2; otherwise damped Newton on the q-th power
// of the residual norm, started from `warm_start` when given.
Vector chebyshev_project(const Vector& f, const std::vector<int>& support, const Dictionary& dict,
                         double tol = 1e-10, const Vector* warm_start = nullptr);

// Exact sigma_m witness by enumeration of all supports of size m.
// Throws kBudgetExceeded when C(n, m) > max_supports.
SparseApproximant best_mterm_bruteforce(const Vector& f, const Dictionary& dict, int m,
                                        double max_supports = 1e6);

struct WcgaOptions {
  double weakness = 1.0;   // t in (0, 1]
  double tol = 1e-12;      // early exit when residual <= tol * ||f||
  double projection_tol = 1e-10;
};

// Weak Chebyshev Greedy Algorithm. Each step selects the lowest-index atom j
// with |<F, g_j>| >= t * max_i |<F, g_i>|, F the norming functional of the
// current residual, then re-projects f onto all selected atoms.
SparseApproximant wcga(const Vector& f, const Dictionary& dict, int m, const WcgaOptions& options = {});

// Random points of A_1(D): a support of log-uniform size, random signs, and
// Dirichlet(1) weights summing to one.
std::vector<Vector> sample_octahedron(const Dictionary& dict, int count, std::uint64_t seed);

struct SigmaRow {
  int m = 0;
  double sigma = 0.0;  // max over samples of the WCGA residual after m steps
};

struct SigmaProfile {
  std::vector<SigmaRow> rows;
  double slope = 0.0;  // least-squares slope of log sigma against log m
};

SigmaProfile sigma_profile(const std::vector<Vector>& samples, const Dictionary& dict,
                           const std::vector<int>& m_list, const WcgaOptions& options = {});

}  // namespace entnum
