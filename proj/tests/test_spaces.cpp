#include <cmath>
#include <random>

#include "doctest.h"
#include "entnum/error.hpp"
#include "entnum/greedy.hpp"
#include "entnum/spaces.hpp"

using namespace entnum;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

Dictionary random_dictionary(int dim, int n, double q, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix raw(dim, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i) raw(i, j) = normal(rng);
  return Dictionary::normalized(NormedSpace::sequence(dim, q), raw);
}

// Minimal l1 mass over representations using only 2 atoms at a time (the LP
// optimum sits at a basic solution, which in R^2 has at most two nonzeros).
double l1_by_pairs(const Vector& f, const Matrix& atoms) {
  double best = INFINITY;
  for (int a = 0; a < atoms.cols(); ++a) {
    for (int b = a + 1; b < atoms.cols(); ++b) {
      Eigen::Matrix2d M;
      M << atoms(0, a), atoms(0, b), atoms(1, a), atoms(1, b);
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d c = M.inverse() * f;
      best = std::min(best, c.cwiseAbs().sum());
    }
  }
  return best;
}

}  // namespace

TEST_CASE("norm examples") {
  CHECK(norm(NormedSpace::sequence(2, 2.0), vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(NormedSpace::sequence(3, 1.7), Vector::Zero(3)) == 0.0);
  const NormedSpace half = NormedSpace::discrete(vec({0.5, 0.5}), 2.0);
  CHECK(norm(half, vec({std::sqrt(2.0), 0})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("norm rejects bad input") {
  const NormedSpace s = NormedSpace::sequence(2, 2.0);
  CHECK_THROWS_AS(norm(s, Vector::Zero(3)), Error);
  try {
    norm(s, Vector::Zero(3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  CHECK_THROWS_AS(NormedSpace::sequence(2, 1.0), Error);
  CHECK_THROWS_AS(NormedSpace::discrete(vec({0.5, 0.6}), 2.0), Error);
  CHECK_THROWS_AS(NormedSpace::discrete(vec({1.0, 0.0}), 2.0), Error);
}

TEST_CASE("norming functional examples") {
  const NormedSpace s2 = NormedSpace::sequence(2, 2.0);
  const DualFunctional F = norming_functional(s2, vec({3, 4}));
  CHECK(F.coefficients(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(F.coefficients(1) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(s2.pairing(F.coefficients, vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-14));

  const NormedSpace s3 = NormedSpace::sequence(3, 3.3);
  const DualFunctional E = norming_functional(s3, vec({1, 0, 0}));
  CHECK((E.coefficients - vec({1, 0, 0})).norm() < 1e-15);

  const NormedSpace s15 = NormedSpace::sequence(2, 1.5);
  const DualFunctional G = norming_functional(s15, vec({1, 1}));
  CHECK(G.coefficients(0) == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-13));
  CHECK(G.coefficients(1) == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-13));
  CHECK(s15.pairing(G.coefficients, vec({1, 1})) == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-13));
  CHECK(s15.dual_norm(G.coefficients) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(norming_functional(s2, Vector::Zero(2)), Error);
}

TEST_CASE("norming functional identities on random vectors, weighted and unweighted") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double q : {1.2, 1.5, 2.0, 3.0, 6.0}) {
    Vector w(7);
    for (int i = 0; i < 7; ++i) w(i) = 1.0 + std::abs(normal(rng));
    w /= w.sum();
    for (const NormedSpace& s : {NormedSpace::sequence(7, q), NormedSpace::discrete(w, q)}) {
      for (int t = 0; t < 20; ++t) {
        Vector f(7);
        for (int i = 0; i < 7; ++i) f(i) = normal(rng);
        const DualFunctional F = norming_functional(s, f);
        CHECK(std::abs(s.pairing(F.coefficients, f) - s.norm(f)) <= 1e-10 * (1 + s.norm(f)));
        CHECK(std::abs(s.dual_norm(F.coefficients) - 1.0) <= 1e-10);
      }
    }
  }
}

TEST_CASE("A-norm examples") {
  const NormedSpace s = NormedSpace::sequence(2, 2.0);
  CHECK(norm_A(vec({3, 4}), Dictionary::canonical(s)) == doctest::Approx(7.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  const Dictionary D = random_dictionary(5, 5, 2.0, rng);
  CHECK(norm_A(D.atom(1), D) == doctest::Approx(1.0).epsilon(1e-10));

  Matrix atoms(2, 3);
  atoms << 1, 0, 1 / std::sqrt(2.0), 0, 1, 1 / std::sqrt(2.0);
  const Dictionary D3(s, atoms);
  const double lp = norm_A(vec({1, 1}), D3);
  CHECK(lp == doctest::Approx(l1_by_pairs(vec({1, 1}), atoms)).epsilon(1e-12));
  CHECK(lp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("A-norm matches the two-atom enumeration on random planar dictionaries") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Dictionary D = random_dictionary(2, 6, 1.7, rng);
    const Vector f = vec({normal(rng), normal(rng)});
    CHECK(norm_A(f, D) == doctest::Approx(l1_by_pairs(f, D.atoms())).epsilon(1e-10));
  }
}

TEST_CASE("A-norm outside the span is a structured error") {
  Matrix atoms(3, 1);
  atoms << 1, 0, 0;
  const Dictionary D(NormedSpace::sequence(3, 2.0), atoms);
  try {
    norm_A(vec({0, 1, 0}), D);
    FAIL("expected kNotInSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotInSpan);
    CHECK(e.value() > 1e-8);
  }
}

TEST_CASE("U-norm examples") {
  const NormedSpace s3 = NormedSpace::sequence(3, 2.0);
  CHECK(norm_U({vec({1, -2, 3})}, Dictionary::canonical(s3)) == doctest::Approx(3.0));
  CHECK(norm_U({Vector::Zero(3)}, Dictionary::canonical(s3)) == 0.0);
  Matrix atoms(2, 2);
  atoms << 1, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  const Dictionary D(NormedSpace::sequence(2, 2.0), atoms);
  CHECK(norm_U({vec({1, 1})}, D) == doctest::Approx(std::max(1.0, std::sqrt(2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(Dictionary(s3, Matrix(3, 0)), Error);
}

TEST_CASE("U-norm is the octahedron supremum, attained at an atom") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const Dictionary D = random_dictionary(4, 9, 1.5, rng);
    Vector F(4);
    for (int i = 0; i < 4; ++i) F(i) = normal(rng);
    const double u = norm_U({F}, D);
    CHECK(octahedron_sup_lp({F}, D) == doctest::Approx(u).epsilon(1e-10));
    const Vector pair = D.pairings(F);
    CHECK(pair.cwiseAbs().maxCoeff() == doctest::Approx(u).epsilon(1e-14));
    for (const Vector& f : sample_octahedron(D, 50, 100 + t)) {
      CHECK(norm_A(f, D) <= 1.0 + 1e-9);
      CHECK(std::abs(D.space().pairing(F, f)) <= u + 1e-12);
    }
    for (int j = 0; j < D.size(); ++j) CHECK(norm_A(D.atom(j), D) <= 1.0 + 1e-9);
  }
}

TEST_CASE("homogeneity and triangle inequality for norm, A-norm, U-norm") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const Dictionary D = random_dictionary(4, 7, 2.5, rng);
    const NormedSpace& s = D.space();
    Vector x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
    }
    const double a = -2.5;
    CHECK(std::abs(s.norm(a * x) - std::abs(a) * s.norm(x)) <= 1e-9);
    CHECK(s.norm(x + y) <= s.norm(x) + s.norm(y) + 1e-9);
    CHECK(std::abs(norm_A(a * x, D) - std::abs(a) * norm_A(x, D)) <= 1e-9 * (1 + norm_A(x, D)));
    CHECK(norm_A(x + y, D) <= norm_A(x, D) + norm_A(y, D) + 1e-9);
    CHECK(std::abs(norm_U({a * x}, D) - std::abs(a) * norm_U({x}, D)) <= 1e-9);
    CHECK(norm_U({x + y}, D) <= norm_U({x}, D) + norm_U({y}, D) + 1e-9);
  }
}

TEST_CASE("modulus of smoothness estimates") {
  const NormedSpace h = NormedSpace::sequence(4, 2.0);
  CHECK(estimate_modulus(h, 1.0, 200, 1) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));
  CHECK(estimate_modulus(h, 0.0, 10, 1) == 0.0);
  const NormedSpace s15 = NormedSpace::sequence(8, 1.5);
  const double r = estimate_modulus(s15, 0.5, 200, 2);
  CHECK(r <= std::pow(0.5, 1.5) / 1.5 + 1e-9);
  CHECK(r > 0.0);
  CHECK(std::pow(0.5, 1.5) / 1.5 == doctest::Approx(0.23570).epsilon(1e-4));
}

TEST_CASE("modulus estimates respect the analytic bounds and grow with u") {
  const std::vector<double> us = {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  for (double q : {1.25, 1.5, 2.0, 3.0, 4.0}) {
    const NormedSpace s = NormedSpace::sequence(6, q);
    const std::vector<double> curve = estimate_modulus_curve(s, us, 60, 9);
    for (std::size_t i = 0; i < us.size(); ++i) {
      CHECK(curve[i] <= s.modulus_bound(us[i]) + 1e-9);
      if (i > 0) CHECK(curve[i] >= curve[i - 1]);
    }
  }
}

TEST_CASE("smoothness constants") {
  const NormedSpace a = NormedSpace::sequence(2, 1.5);
  CHECK(a.smoothness_power() == 1.5);
  CHECK(a.smoothness_gamma() == doctest::Approx(1 / 1.5));
  const NormedSpace b = NormedSpace::sequence(2, 4.0);
  CHECK(b.smoothness_power() == 2.0);
  CHECK(b.smoothness_gamma() == doctest::Approx(1.5));
  CHECK(b.modulus_bound(0.5) == doctest::Approx(1.5 * 0.25));
}
