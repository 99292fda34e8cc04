#include <cmath>
#include <random>

#include "doctest.h"
#include "entnum/error.hpp"
#include "entnum/greedy.hpp"

using namespace entnum;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

Vector gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = normal(rng);
  return x;
}

Dictionary random_orthonormal(int n, std::mt19937_64& rng) {
  Matrix X(n, n);
  for (int j = 0; j < n; ++j) X.col(j) = gaussian(n, rng);
  Eigen::HouseholderQR<Matrix> qr(X);
  Matrix Q = qr.householderQ();
  return Dictionary(NormedSpace::sequence(n, 2.0), Q);
}

// Orthonormal Hilbert oracle: sigma_m is the l2 norm of all but the m largest
// coefficients.
double tail_oracle(const Vector& coeffs, int m) {
  std::vector<double> a(coeffs.data(), coeffs.data() + coeffs.size());
  for (double& x : a) x = x * x;
  std::sort(a.begin(), a.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = m; i < a.size(); ++i) s += a[i];
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("brute force examples") {
  std::mt19937_64 rng(1);
  Matrix raw(3, 4);
  for (int j = 0; j < 4; ++j) raw.col(j) = gaussian(3, rng);
  const Dictionary D = Dictionary::normalized(NormedSpace::sequence(3, 1.5), raw);
  const SparseApproximant a = best_mterm_bruteforce(D.atom(1), D, 1);
  CHECK(a.residual_norm <= 1e-9);
  REQUIRE(a.support.size() == 1);
  CHECK(a.support[0] == 1);

  const Dictionary C = Dictionary::canonical(NormedSpace::sequence(4, 2.0));
  const Vector f = vec({1, 0.5, 0.25, 0.125});
  const SparseApproximant b = best_mterm_bruteforce(f, C, 2);
  CHECK(b.residual_norm == doctest::Approx(std::sqrt(0.25 * 0.25 + 0.125 * 0.125)).epsilon(1e-12));
  CHECK(b.residual_norm == doctest::Approx(0.27951).epsilon(1e-5));
  CHECK(b.support == std::vector<int>{0, 1});

  const SparseApproximant z = best_mterm_bruteforce(f, C, 0);
  CHECK(z.residual_norm == doctest::Approx(f.norm()));
  CHECK(z.support.empty());
}

TEST_CASE("brute force budget guard") {
  const Dictionary C = Dictionary::canonical(NormedSpace::sequence(40, 2.0));
  try {
    best_mterm_bruteforce(Vector::Ones(40), C, 20);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
    CHECK(std::string(e.what()).find("WCGA") != std::string::npos);
  }
}

TEST_CASE("residual norm is recomputable") {
  std::mt19937_64 rng(2);
  Matrix raw(5, 8);
  for (int j = 0; j < 8; ++j) raw.col(j) = gaussian(5, rng);
  for (double q : {1.5, 2.0, 3.0}) {
    const Dictionary D = Dictionary::normalized(NormedSpace::sequence(5, q), raw);
    const Vector f = gaussian(5, rng);
    for (int m = 1; m <= 3; ++m) {
      const SparseApproximant b = best_mterm_bruteforce(f, D, m);
      CHECK(std::abs(D.space().norm(f - b.approximant(D)) - b.residual_norm) <= 1e-9);
      const SparseApproximant w = wcga(f, D, m);
      CHECK(std::abs(D.space().norm(f - w.approximant(D)) - w.residual_norm) <= 1e-9);
      CHECK(b.residual_norm <= w.residual_norm + 1e-9);
    }
  }
}

TEST_CASE("Chebyshev projection examples") {
  std::mt19937_64 rng(4);
  const Dictionary O = random_orthonormal(5, rng);
  const Vector f = gaussian(5, rng);
  const Vector c = chebyshev_project(f, {0, 2, 3}, O);
  CHECK(c(0) == doctest::Approx(O.atom(0).dot(f)).epsilon(1e-12));
  CHECK(c(1) == doctest::Approx(O.atom(2).dot(f)).epsilon(1e-12));
  CHECK(c(2) == doctest::Approx(O.atom(3).dot(f)).epsilon(1e-12));

  for (double q : {1.3, 2.0, 4.0}) {
    Matrix raw(3, 3);
    for (int j = 0; j < 3; ++j) raw.col(j) = gaussian(3, rng);
    const Dictionary B = Dictionary::normalized(NormedSpace::sequence(3, q), raw);
    const Vector g = gaussian(3, rng);
    const Vector cc = chebyshev_project(g, {0, 1, 2}, B);
    CHECK(B.space().norm(g - B.atoms() * cc) <= 1e-8);
  }

  const Dictionary C4 = Dictionary::canonical(NormedSpace::sequence(2, 4.0));
  const Vector c4 = chebyshev_project(vec({1, 1}), {0}, C4);
  CHECK(c4(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(C4.space().norm(vec({1, 1}) - c4(0) * C4.atom(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Chebyshev projection matches a one-dimensional scan") {
  // phi(c) = ||f - c g||_q^q is convex in c; a fine golden-section search is the oracle.
  std::mt19937_64 rng(6);
  for (double q : {1.2, 1.5, 3.0, 5.0}) {
    const NormedSpace s = NormedSpace::sequence(6, q);
    const Dictionary D = Dictionary::normalized(s, gaussian(6, rng));
    const Vector f = gaussian(6, rng);
    auto phi = [&](double c) { return s.norm(f - c * D.atom(0)); };
    double lo = -20, hi = 20;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
      if (phi(a) < phi(b)) hi = b; else lo = a;
    }
    const Vector c = chebyshev_project(f, {0}, D);
    CHECK(phi(c(0)) <= phi(0.5 * (lo + hi)) + 1e-10);
  }
}

TEST_CASE("WCGA examples") {
  std::mt19937_64 rng(8);
  Matrix raw(6, 9);
  for (int j = 0; j < 9; ++j) raw.col(j) = gaussian(6, rng);
  const Dictionary D = Dictionary::normalized(NormedSpace::sequence(6, 1.5), raw);
  const SparseApproximant a = wcga(D.atom(4), D, 3);
  CHECK(a.early_exit);
  REQUIRE(!a.history.empty());
  CHECK(a.history[0] <= 1e-9);
  CHECK(a.support[0] == 4);

  const Dictionary C = Dictionary::canonical(NormedSpace::sequence(4, 2.0));
  const Vector f = Vector::Constant(4, 0.25);
  CHECK(norm_A(f, C) == doctest::Approx(1.0));
  const SparseApproximant b = wcga(f, C, 2);
  CHECK(b.residual_norm == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-12));
  CHECK(b.residual_norm == doctest::Approx(0.35355).epsilon(1e-5));
}

TEST_CASE("WCGA weakness: histories nonincreasing, t = 1 best at step one") {
  std::mt19937_64 rng(9);
  int worse_than_best_atom = 0;
  for (double q : {1.5, 2.0, 3.0}) {
    Matrix raw(8, 20);
    for (int j = 0; j < 20; ++j) raw.col(j) = gaussian(8, rng);
    const Dictionary D = Dictionary::normalized(NormedSpace::sequence(8, q), raw);
    for (int t = 0; t < 10; ++t) {
      const Vector f = gaussian(8, rng);
      WcgaOptions strong, weak;
      weak.weakness = 0.9;
      const SparseApproximant s = wcga(f, D, 6, strong);
      const SparseApproximant w = wcga(f, D, 6, weak);
      for (const auto* h : {&s.history, &w.history})
        for (std::size_t i = 1; i < h->size(); ++i) CHECK((*h)[i] <= (*h)[i - 1] + 1e-12);
      const SparseApproximant b1 = best_mterm_bruteforce(f, D, 1);
      if (q == 2.0) {
        // In a Hilbert space the strongest pairing is the best single atom.
        CHECK(s.history[0] <= w.history[0] + 1e-12);
        for (double r : s.history) CHECK(r <= b1.residual_norm + 1e-9);
      } else {
        worse_than_best_atom += s.history[0] > b1.residual_norm + 1e-9;
      }
      std::vector<int> sorted = s.support;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
  }
  // Outside the Hilbert case the norming-functional choice is not the best
  // single atom in general; this seed exhibits it.
  CHECK(worse_than_best_atom > 0);
}

TEST_CASE("WCGA is optimal for orthonormal dictionaries in the Hilbert case") {
  std::mt19937_64 rng(10);
  for (int n = 2; n <= 10; ++n) {
    const Dictionary O = random_orthonormal(n, rng);
    for (int t = 0; t < 5; ++t) {
      const Vector f = gaussian(n, rng);
      const Vector coeffs = O.atoms().transpose() * f;
      const SparseApproximant w = wcga(f, O, n);
      for (int m = 1; m <= n; ++m) {
        const double greedy = m <= static_cast<int>(w.history.size()) ? w.history[m - 1] : w.residual_norm;
        CHECK(std::abs(greedy - tail_oracle(coeffs, m)) <= 1e-9);
        if (n <= 8) CHECK(std::abs(best_mterm_bruteforce(f, O, m).residual_norm - tail_oracle(coeffs, m)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("WCGA homogeneity and sigma monotonicity") {
  std::mt19937_64 rng(12);
  Matrix raw(5, 10);
  for (int j = 0; j < 10; ++j) raw.col(j) = gaussian(5, rng);
  const Dictionary D = Dictionary::normalized(NormedSpace::sequence(5, 1.5), raw);
  const Vector f = gaussian(5, rng);
  const SparseApproximant a = wcga(f, D, 4);
  const SparseApproximant b = wcga(3.0 * f, D, 4);
  CHECK(a.support == b.support);
  CHECK((3.0 * a.coefficients - b.coefficients).cwiseAbs().maxCoeff() <= 1e-7);
  CHECK(std::abs(3.0 * a.residual_norm - b.residual_norm) <= 1e-9);

  double prev = INFINITY;
  for (int m = 0; m <= 5; ++m) {
    const double s = best_mterm_bruteforce(f, D, m).residual_norm;
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
  CHECK(prev <= 1e-8);
}

TEST_CASE("WCGA precondition errors") {
  const Dictionary C = Dictionary::canonical(NormedSpace::sequence(3, 2.0));
  CHECK_THROWS_AS(wcga(Vector::Zero(3), C, 1), Error);
  CHECK_THROWS_AS(wcga(Vector::Ones(3), C, 4), Error);
  WcgaOptions bad;
  bad.weakness = 0.0;
  CHECK_THROWS_AS(wcga(Vector::Ones(3), C, 1, bad), Error);
}

TEST_CASE("octahedron samples lie in the octahedron") {
  std::mt19937_64 rng(13);
  Matrix raw(6, 12);
  for (int j = 0; j < 12; ++j) raw.col(j) = gaussian(6, rng);
  const Dictionary D = Dictionary::normalized(NormedSpace::sequence(6, 1.5), raw);
  const auto samples = sample_octahedron(D, 100, 4);
  CHECK(samples.size() == 100);
  for (const Vector& f : samples) CHECK(in_octahedron(f, D));
  const auto again = sample_octahedron(D, 100, 4);
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(samples[i] == again[i]);
}

TEST_CASE("sigma profile decays for canonical Hilbert octahedron") {
  const Dictionary C = Dictionary::canonical(NormedSpace::sequence(64, 2.0));
  const auto samples = sample_octahedron(C, 20, 5);
  const SigmaProfile p = sigma_profile(samples, C, {2, 4, 8, 16});
  REQUIRE(p.rows.size() == 4);
  for (std::size_t i = 1; i < p.rows.size(); ++i) CHECK(p.rows[i].sigma <= p.rows[i - 1].sigma);
  CHECK(p.slope < 0.0);
}
