#pragma once

#include <cstdint>
#include <vector>

#include "entnum/entropy.hpp"
#include "entnum/spaces.hpp"

namespace entnum {

// Probability measure on s abstract points.
class MeasureSpace {
 public:
  explicit MeasureSpace(Vector weights);
  static MeasureSpace uniform(int s);
  // Weights proportional to 1 + U(0, spread) draws, normalized.
  static MeasureSpace random(int s, double spread, std::uint64_t seed);

  int size() const { return static_cast<int>(weights_.size()); }
  const Vector& weights() const { return weights_; }
  NormedSpace lp(double p) const { return NormedSpace::discrete(weights_, p); }

 private:
  Vector weights_;
};

// X_N: N functions on the measure space, orthonormal in <f, g>_mu; stored as
// the columns of an s x N matrix.
class Subspace {
 public:
  Subspace(MeasureSpace measure, Matrix basis);
  // Seeded Gaussian vectors orthonormalized under <.,.>_mu.
  static Subspace random(MeasureSpace measure, int N, std::uint64_t seed);
  static Subspace constants(MeasureSpace measure);

  const MeasureSpace& measure() const { return measure_; }
  const Matrix& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int points() const { return measure_.size(); }

  // Orthonormal basis (columns, s x (s - N)) of the mu-orthogonal complement.
  const Matrix& complement() const { return complement_; }

 private:
  MeasureSpace measure_;
  Matrix basis_;
  Matrix complement_;
};

// Omega_n: n distinct point indices of the measure space.
struct SamplePointSet {
  std::vector<int> indices;

  static SamplePointSet random(int s, int n, std::uint64_t seed);
  void validate(int s) const;
  int size() const { return static_cast<int>(indices.size()); }
};

// D_N(w_i, w_j) = sum_k u_k(w_i) u_k(w_j).
Matrix dirichlet_kernel(const Subspace& sub);

// Largest |f(x)| over f in X_N with ||f||_p <= 1, by point.
struct PointwiseNikolskii {
  Vector per_point;
  double value = 0.0;
  int argmax = 0;
};

// max over f in the L_p unit ball of X_N of f(x), one convex problem per
// point over the basis coefficients (closed form sqrt(D(x,x)) at p = 2).
// `tol` is the gradient-norm tolerance of the inner solves.
PointwiseNikolskii m_p_direct_pointwise(const Subspace& sub, double p, double tol = 1e-11);
double m_p_direct(const Subspace& sub, double p, double tol = 1e-11);

// Coefficients a with ||U a||_p = 1 and (U a)(x) = M_p(x): an extremal element.
Vector extremal_coefficients(const Subspace& sub, int x, double p, double tol = 1e-11);

// min over v orthogonal to X_N of ||D(x,.) - v||_{p'} at one point; returns
// the minimizer w = D(x,.) - v and its norm.
struct KernelSliceMin {
  Vector w;
  double norm = 0.0;
};
KernelSliceMin kernel_slice_min(const Subspace& sub, const Matrix& kernel, int x, double p, double tol = 1e-11);

// sup_x inf_{v perp X_N} ||D(x,.) - v||_{p'}.
PointwiseNikolskii m_p_dual_pointwise(const Subspace& sub, double p, double tol = 1e-11);
double m_p_dual(const Subspace& sub, double p, double tol = 1e-11);

struct DiscretizationDictionary {
  SamplePointSet points;
  double p = 2.0;
  Matrix w;        // s x n, columns w_j = D(x^j,.) - v_j
  Matrix g;        // s x n, columns g_j = w_j / ||w_j||_{p'}
  Vector w_norms;  // ||w_j||_{p'}
  double mp = 0.0;           // M_p(X_N) from the direct route
  double max_w_norm = 0.0;   // certified <= 2 * mp + tol
  double max_reproducing_error = 0.0;

  // D_n = {g_j} as a normalized system of L_{p'}(mu).
  Dictionary as_dictionary(const MeasureSpace& measure) const;
};

// Builds w_j, g_j and certifies the reproducing identity <f, w_j>_mu = f(x^j)
// on the basis (1e-8) and ||w_j||_{p'} <= 2 M_p + tol.
DiscretizationDictionary build_discretization_dictionary(const Subspace& sub, const SamplePointSet& pts, double p,
                                                         double tol = 1e-6);

struct TransferReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;  // max ||f||_{L_inf(Omega_n)} / (M_p ||f||_U), at most 2
  Vector witness;          // first violating coefficient vector, if any
};

// Checks ||f||_{L_inf(Omega_n)} <= 2 M_p ||f||_U + 1e-8 on random f in X_N.
// Throws kPropertyViolation on the first breach.
TransferReport verify_transfer(const Subspace& sub, const DiscretizationDictionary& dict, int trials,
                               std::uint64_t seed);

struct It1Options {
  int samples = 2000;
  std::uint64_t seed = 1;
};

struct It1Report {
  EntropyProfile profile;           // envelope column is M_p * (log2(2n/k)/k)^(1/p)
  double mp = 0.0;
  double lp_radius = 0.0;           // values lie in the l_p ball of this radius
  std::vector<double> finite_dim_upper;  // coefficient-lattice bound (uses N)
  int samples = 0;
};

// Entropy profile of X_N^p in L_inf(Omega_n). Upper bounds come from a
// sparse lattice net of the outer set { |y_j| <= M_p, sum |y_j|^p <= 1/min mu }
// containing all value vectors (f(x^j))_j; every sample is checked to lie in
// that set and within eps of its net center. Lower bounds from farthest-point
// packings of the samples.
It1Report it1_experiment(const Subspace& sub, const SamplePointSet& pts, double p, const std::vector<int>& k_list,
                         const It1Options& options = {});

}  // namespace entnum
