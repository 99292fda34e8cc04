#include "entnum/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "entnum/error.hpp"
#include "entnum/simplex.hpp"

namespace entnum {
namespace {

constexpr double kNormalizationTol = 1e-10;
constexpr double kWeightSumTol = 1e-12;
constexpr double kSpanTol = 1e-8;

void check_dim(const NormedSpace& space, const Vector& x, const char* what) {
  if (x.size() != space.dim()) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": vector has length " +
                                            std::to_string(x.size()) + ", space has dimension " +
                                            std::to_string(space.dim()));
  }
}

double weighted_power_norm(const Vector& w, const Vector& x, double r) {
  // Scale by the max entry to stay clear of under/overflow in |x|^r.
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += w(i) * std::pow(std::abs(x(i)) / m, r);
  return m * std::pow(s, 1.0 / r);
}

}  // namespace

NormedSpace::NormedSpace(NormKind kind, Vector weights, double q)
    : kind_(kind), weights_(std::move(weights)), q_(q) {
  require(q_ > 1.0 && std::isfinite(q_), ErrorCode::kInvalidArgument,
          "exponent q must lie in (1, inf), got " + std::to_string(q_));
  require(weights_.size() >= 1, ErrorCode::kInvalidArgument, "space dimension must be >= 1");
}

NormedSpace NormedSpace::sequence(int dim, double q) {
  require(dim >= 1, ErrorCode::kInvalidArgument, "space dimension must be >= 1");
  return NormedSpace(NormKind::kSequence, Vector::Ones(dim), q);
}

NormedSpace NormedSpace::discrete(Vector weights, double q) {
  require(weights.size() >= 1, ErrorCode::kInvalidArgument, "measure needs at least one point");
  require((weights.array() > 0.0).all(), ErrorCode::kInvalidArgument,
          "measure weights must be strictly positive");
  require(std::abs(weights.sum() - 1.0) <= kWeightSumTol, ErrorCode::kInvalidArgument,
          "measure weights must sum to 1");
  return NormedSpace(NormKind::kDiscreteMeasure, std::move(weights), q);
}

double NormedSpace::norm(const Vector& x) const {
  check_dim(*this, x, "norm");
  return weighted_power_norm(weights_, x, q_);
}

double NormedSpace::dual_norm(const Vector& F) const {
  check_dim(*this, F, "dual_norm");
  return weighted_power_norm(weights_, F, dual_exponent());
}

double NormedSpace::pairing(const Vector& F, const Vector& f) const {
  check_dim(*this, F, "pairing");
  check_dim(*this, f, "pairing");
  return (weights_.array() * F.array() * f.array()).sum();
}

double NormedSpace::smoothness_power() const { return q_ <= 2.0 ? q_ : 2.0; }

double NormedSpace::smoothness_gamma() const { return q_ <= 2.0 ? 1.0 / q_ : (q_ - 1.0) / 2.0; }

double NormedSpace::modulus_bound(double u) const {
  return smoothness_gamma() * std::pow(u, smoothness_power());
}

NormedSpace NormedSpace::dual_space() const { return NormedSpace(kind_, weights_, dual_exponent()); }

Dictionary::Dictionary(NormedSpace space, Matrix atoms) : space_(std::move(space)), atoms_(std::move(atoms)) {
  require(atoms_.cols() >= 1, ErrorCode::kEmptyDictionary, "dictionary has no atoms");
  if (atoms_.rows() != space_.dim()) {
    fail(ErrorCode::kDimensionMismatch, "dictionary atoms have length " + std::to_string(atoms_.rows()) +
                                            ", space has dimension " + std::to_string(space_.dim()));
  }
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double nj = space_.norm(atoms_.col(j));
    if (std::abs(nj - 1.0) > kNormalizationTol) {
      fail(ErrorCode::kNotNormalized, "atom " + std::to_string(j) + " has norm " + std::to_string(nj), nj);
    }
  }
}

Dictionary Dictionary::normalized(NormedSpace space, Matrix raw) {
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double nj = space.norm(raw.col(j));
    require(nj > 0.0, ErrorCode::kZeroVector, "cannot normalize zero atom " + std::to_string(j));
    raw.col(j) /= nj;
  }
  return Dictionary(std::move(space), std::move(raw));
}

Dictionary Dictionary::canonical(NormedSpace space) {
  // e_j normalized in the ambient norm: weights make ||e_j|| = w_j^(1/q).
  const int d = space.dim();
  return normalized(space, Matrix::Identity(d, d));
}

Vector Dictionary::pairings(const Vector& F) const {
  check_dim(space_, F, "pairings");
  return atoms_.transpose() * (space_.weights().array() * F.array()).matrix();
}

double norm(const NormedSpace& space, const Vector& x) { return space.norm(x); }

DualFunctional norming_functional(const NormedSpace& space, const Vector& f) {
  const double nf = space.norm(f);
  require(nf > 0.0, ErrorCode::kZeroVector, "norming functional of the zero vector is undefined");
  const double q = space.q();
  Vector F(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double a = std::abs(f(i)) / nf;
    F(i) = a == 0.0 ? 0.0 : std::copysign(std::pow(a, q - 1.0), f(i));
  }
  return {F};
}

ARepresentation norm_A_representation(const Vector& f, const Dictionary& dict) {
  check_dim(dict.space(), f, "norm_A");
  const Matrix& G = dict.atoms();
  const int n = dict.size();

  const double fscale = f.norm();
  if (fscale == 0.0) return {0.0, Vector::Zero(n)};

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(G);
  const Vector c_ls = cod.solve(f);
  const double rel = (G * c_ls - f).norm() / fscale;
  if (!(rel < kSpanTol)) {
    fail(ErrorCode::kNotInSpan,
         "vector is not in the span of the dictionary (relative residual " + std::to_string(rel) + ")", rel);
  }

  // Restrict the equality constraints to an orthonormal basis of range(G) so
  // the LP rows are independent.
  Eigen::ColPivHouseholderQR<Matrix> qr(G);
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  const Matrix Q = qr.householderQ() * Matrix::Identity(G.rows(), rank);
  const Matrix Gr = Q.transpose() * G;
  const Vector fr = Q.transpose() * f;

  Matrix A(rank, 2 * n);
  A << Gr, -Gr;
  const Vector cost = Vector::Ones(2 * n);
  const LpResult lp = solve_lp(A, fr, cost);
  require(lp.status == LpStatus::kOptimal, ErrorCode::kNonConvergence, "A-norm linear program did not solve");
  ARepresentation rep;
  rep.coefficients = lp.x.head(n) - lp.x.tail(n);
  rep.value = lp.objective;
  return rep;
}

double norm_A(const Vector& f, const Dictionary& dict) { return norm_A_representation(f, dict).value; }

double norm_U(const DualFunctional& F, const Dictionary& dict) {
  return dict.pairings(F.coefficients).cwiseAbs().maxCoeff();
}

double octahedron_sup_lp(const DualFunctional& F, const Dictionary& dict) {
  const Vector a = dict.pairings(F.coefficients);
  const int n = dict.size();
  // Variables: c+ (n), c- (n), slack. sum(c+) + sum(c-) + slack = 1.
  Matrix A = Matrix::Ones(1, 2 * n + 1);
  Vector b(1);
  b << 1.0;
  Vector cost(2 * n + 1);
  cost << -a, a, 0.0;
  const LpResult lp = solve_lp(A, b, cost);
  require(lp.status == LpStatus::kOptimal, ErrorCode::kNonConvergence, "octahedron LP did not solve");
  return -lp.objective;
}

namespace {

struct UnitPair {
  Vector x;
  Vector y;
};

double modulus_value(const NormedSpace& space, const UnitPair& p, double u) {
  return 0.5 * (space.norm(p.x + u * p.y) + space.norm(p.x - u * p.y)) - 1.0;
}

Vector normalize(const NormedSpace& space, Vector v) {
  const double n = space.norm(v);
  if (n > 0.0) v /= n;
  return v;
}

std::vector<UnitPair> structured_pairs(const NormedSpace& space) {
  std::vector<UnitPair> out;
  const int d = space.dim();
  Vector e1 = Vector::Zero(d);
  e1(0) = 1.0;
  out.push_back({normalize(space, e1), normalize(space, e1)});
  if (d >= 2) {
    Vector e2 = Vector::Zero(d);
    e2(1) = 1.0;
    out.push_back({normalize(space, e1), normalize(space, e2)});
    out.push_back({normalize(space, e1 + e2), normalize(space, e1 - e2)});
    Vector ones = Vector::Ones(d);
    Vector alt(d);
    for (int i = 0; i < d; ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
    out.push_back({normalize(space, ones), normalize(space, alt)});
    out.push_back({normalize(space, e1), normalize(space, ones - e1)});
  }
  return out;
}

UnitPair local_search(const NormedSpace& space, UnitPair p, double u, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = space.dim();
  double best = modulus_value(space, p, u);
  double step = 0.5;
  while (step > 1e-6) {
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Vector dx(d), dy(d);
      for (int i = 0; i < d; ++i) {
        dx(i) = normal(rng);
        dy(i) = normal(rng);
      }
      UnitPair cand{normalize(space, p.x + step * dx), normalize(space, p.y + step * dy)};
      const double v = modulus_value(space, cand, u);
      if (v > best) {
        best = v;
        p = std::move(cand);
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return p;
}

}  // namespace

std::vector<double> estimate_modulus_curve(const NormedSpace& space, const std::vector<double>& us,
                                           int trials, std::uint64_t seed) {
  require(trials >= 1, ErrorCode::kInvalidArgument, "estimate_modulus needs trials >= 1");
  for (double u : us) require(u >= 0.0, ErrorCode::kInvalidArgument, "modulus argument u must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = space.dim();

  std::vector<UnitPair> pool = structured_pairs(space);
  for (double u : us) {
    if (u == 0.0) continue;
    UnitPair best_start = pool.front();
    double best_val = -1.0;
    for (const auto& p : pool) {
      const double v = modulus_value(space, p, u);
      if (v > best_val) {
        best_val = v;
        best_start = p;
      }
    }
    for (int t = 0; t < trials; ++t) {
      UnitPair p;
      if (t == 0) {
        p = best_start;
      } else {
        Vector x(d), y(d);
        for (int i = 0; i < d; ++i) {
          x(i) = normal(rng);
          y(i) = normal(rng);
        }
        p = {normalize(space, x), normalize(space, y)};
      }
      pool.push_back(local_search(space, std::move(p), u, rng));
    }
  }

  std::vector<double> out;
  out.reserve(us.size());
  for (double u : us) {
    double best = 0.0;
    for (const auto& p : pool) best = std::max(best, modulus_value(space, p, u));
    out.push_back(best);
  }
  return out;
}

double estimate_modulus(const NormedSpace& space, double u, int trials, std::uint64_t seed) {
  return estimate_modulus_curve(space, {u}, trials, seed).front();
}

}  // namespace entnum
