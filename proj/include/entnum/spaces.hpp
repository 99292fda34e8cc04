#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace entnum {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NormKind { kSequence, kDiscreteMeasure };

// A finite-dimensional real space normed by (sum_i w_i |x_i|^q)^(1/q), with
// w = 1 for sequence spaces and w = mu (a probability vector) for discrete
// L_q(mu). The dual pairing is <F, f> = sum_i w_i F_i f_i, under which the
// dual norm is the same weighted norm with exponent q' = q / (q - 1).
class NormedSpace {
 public:
  static NormedSpace sequence(int dim, double q);
  static NormedSpace discrete(Vector weights, double q);

  int dim() const { return static_cast<int>(weights_.size()); }
  double q() const { return q_; }
  double dual_exponent() const { return q_ / (q_ - 1.0); }
  NormKind kind() const { return kind_; }
  const Vector& weights() const { return weights_; }

  double norm(const Vector& x) const;
  double dual_norm(const Vector& F) const;
  double pairing(const Vector& F, const Vector& f) const;

  // Power-type smoothness: rho(u) <= gamma * u^power, with (gamma, power) =
  // (1/q, q) for q <= 2 and ((q-1)/2, 2) for q >= 2.
  double smoothness_power() const;
  double smoothness_gamma() const;
  double modulus_bound(double u) const;

  // The same weights with exponent q' (the space the functionals live in).
  NormedSpace dual_space() const;

 private:
  NormedSpace(NormKind kind, Vector weights, double q);

  NormKind kind_;
  Vector weights_;
  double q_;
};

// Normalized system g_1..g_n, stored as the columns of `atoms`.
class Dictionary {
 public:
  Dictionary(NormedSpace space, Matrix atoms);

  // Rescales every column to unit norm first; zero columns are rejected.
  static Dictionary normalized(NormedSpace space, Matrix raw);
  static Dictionary canonical(NormedSpace space);

  const NormedSpace& space() const { return space_; }
  const Matrix& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.cols()); }
  int dim() const { return static_cast<int>(atoms_.rows()); }
  Vector atom(int j) const { return atoms_.col(j); }

  // (<F, g_j>)_j for all atoms.
  Vector pairings(const Vector& F) const;

 private:
  NormedSpace space_;
  Matrix atoms_;
};

struct DualFunctional {
  Vector coefficients;
};

double norm(const NormedSpace& space, const Vector& x);

// F with <F, f> = ||f|| and ||F||_* = 1: F_i = sign(f_i)|f_i|^(q-1) / ||f||^(q-1).
DualFunctional norming_functional(const NormedSpace& space, const Vector& f);

// Minimal l1 coefficient mass over exact representations f = sum c_j g_j,
// solved as a linear program. Throws kNotInSpan when the least-squares
// relative residual exceeds 1e-8.
double norm_A(const Vector& f, const Dictionary& dict);

struct ARepresentation {
  double value = 0.0;
  Vector coefficients;
};
ARepresentation norm_A_representation(const Vector& f, const Dictionary& dict);

// max_j |<F, g_j>|.
double norm_U(const DualFunctional& F, const Dictionary& dict);

// sup{ |<F, f>| : ||f||_A <= 1 } solved as a linear program over the
// coefficient simplex; independent of norm_U's closed form.
double octahedron_sup_lp(const DualFunctional& F, const Dictionary& dict);

// Lower estimate of rho(X, u) by randomized search with local refinement.
double estimate_modulus(const NormedSpace& space, double u, int trials, std::uint64_t seed);

// Estimates on a grid of u values sharing one pool of candidate pairs, so the
// returned curve is nondecreasing in u.
std::vector<double> estimate_modulus_curve(const NormedSpace& space, const std::vector<double>& us,
                                           int trials, std::uint64_t seed);

}  // namespace entnum
