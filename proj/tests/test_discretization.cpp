#include <cmath>
#include <random>

#include "doctest.h"
#include "entnum/discretization.hpp"
#include "entnum/error.hpp"

using namespace entnum;

namespace {

Subspace full_space(const MeasureSpace& mu) {
  const Vector w = mu.weights();
  return Subspace(mu, w.cwiseSqrt().cwiseInverse().asDiagonal() * Matrix::Identity(mu.size(), mu.size()));
}

double lp_norm(const Vector& mu, const Vector& f, double p) {
  return std::pow((mu.array() * f.array().abs().pow(p)).sum(), 1.0 / p);
}

}  // namespace

TEST_CASE("measure and subspace validation") {
  CHECK_THROWS_AS(MeasureSpace(Vector::Constant(3, 0.3)), Error);
  const MeasureSpace mu = MeasureSpace::uniform(4);
  try {
    Subspace(mu, Matrix::Ones(4, 1) * 2.0);
    FAIL("expected kNonOrthonormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonOrthonormal);
    CHECK(e.value() == doctest::Approx(3.0));
  }
  const Subspace r = Subspace::random(MeasureSpace::random(30, 2.0, 3), 5, 4);
  const Matrix gram = r.basis().transpose() * r.measure().weights().asDiagonal() * r.basis();
  CHECK((gram - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  const Matrix cross = r.basis().transpose() * r.measure().weights().asDiagonal() * r.complement();
  CHECK(cross.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(r.complement().cols() == 25);

  CHECK_THROWS_AS((SamplePointSet{{1, 1}}.validate(4)), Error);
  CHECK_THROWS_AS((SamplePointSet{{0, 4}}.validate(4)), Error);
  const SamplePointSet pts = SamplePointSet::random(50, 10, 7);
  CHECK(pts.size() == 10);
  pts.validate(50);
}

TEST_CASE("Dirichlet kernel examples") {
  const MeasureSpace two = MeasureSpace::uniform(2);
  const Matrix K1 = dirichlet_kernel(Subspace::constants(two));
  CHECK((K1 - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

  const MeasureSpace mu = MeasureSpace::random(6, 1.5, 9);
  const Matrix K = dirichlet_kernel(full_space(mu));
  const Matrix expected = mu.weights().cwiseInverse().asDiagonal();
  CHECK((K - expected).cwiseAbs().maxCoeff() <= 1e-10);

  const Subspace r = Subspace::random(MeasureSpace::random(40, 1.0, 2), 6, 3);
  const Matrix Kr = dirichlet_kernel(r);
  CHECK((r.measure().weights().array() * Kr.diagonal().array()).sum() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK((Kr - Kr.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  // Reproducing property on the basis.
  const Matrix repro = Kr * r.measure().weights().asDiagonal() * r.basis();
  CHECK((repro - r.basis()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("M_p direct examples") {
  const MeasureSpace u8 = MeasureSpace::uniform(8);
  for (double p : {2.0, 3.0, 4.0}) {
    CHECK(m_p_direct(Subspace::constants(u8), p) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m_p_direct(full_space(u8), p) == doctest::Approx(std::pow(8.0, 1.0 / p)).epsilon(1e-8));
  }
  const Subspace r = Subspace::random(MeasureSpace::random(50, 1.0, 5), 4, 6);
  const Vector diag = dirichlet_kernel(r).diagonal();
  CHECK(m_p_direct(r, 2.0) == doctest::Approx(std::sqrt(diag.maxCoeff())).epsilon(1e-14));
  CHECK_THROWS_AS(m_p_direct(r, 1.5), Error);
}

TEST_CASE("extremal coefficients realize M_p(x)") {
  const Subspace r = Subspace::random(MeasureSpace::random(40, 1.0, 8), 4, 9);
  for (double p : {2.0, 3.0, 4.0}) {
    const PointwiseNikolskii pw = m_p_direct_pointwise(r, p);
    for (int x : {0, 7, 21}) {
      const Vector a = extremal_coefficients(r, x, p);
      const Vector f = r.basis() * a;
      CHECK(lp_norm(r.measure().weights(), f, p) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(f(x) == doctest::Approx(pw.per_point(x)).epsilon(1e-8));
      // No random unit-norm element exceeds the extremal value at x.
      std::mt19937_64 rng(x);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int t = 0; t < 200; ++t) {
        Vector b(4);
        for (int i = 0; i < 4; ++i) b(i) = normal(rng);
        const Vector g = r.basis() * b;
        CHECK(std::abs(g(x)) / lp_norm(r.measure().weights(), g, p) <= pw.per_point(x) * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("M_p dual examples and duality") {
  const MeasureSpace u8 = MeasureSpace::uniform(8);
  for (double p : {2.0, 3.0, 4.0}) {
    CHECK(m_p_dual(full_space(u8), p) == doctest::Approx(std::pow(8.0, 1.0 / p)).epsilon(1e-10));
    CHECK(m_p_dual(Subspace::constants(u8), p) == doctest::Approx(1.0).epsilon(1e-8));
  }
  const MeasureSpace mu = MeasureSpace::random(5, 2.0, 1);
  double expected = 0.0;
  for (int i = 0; i < 5; ++i) expected = std::max(expected, std::pow(mu.weights()(i), -1.0 / 3.0));
  CHECK(m_p_dual(full_space(mu), 3.0) == doctest::Approx(expected).epsilon(1e-10));

  const Subspace r = Subspace::random(MeasureSpace::random(60, 1.0, 2), 5, 3);
  CHECK(std::abs(m_p_dual(r, 2.0) - m_p_direct(r, 2.0)) <= 1e-12);
  for (double p : {3.0, 4.0}) CHECK(std::abs(m_p_dual(r, p) - m_p_direct(r, p)) <= 1e-6);
}

TEST_CASE("M_p is nonincreasing in p") {
  const Subspace r = Subspace::random(MeasureSpace::random(64, 1.0, 4), 6, 5);
  const double m2 = m_p_direct(r, 2.0), m3 = m_p_direct(r, 3.0), m4 = m_p_direct(r, 4.0);
  // ||f||_p grows with p under a probability measure, so the ratio
  // ||f||_inf / ||f||_p can only shrink.
  CHECK(m3 <= m2 + 1e-9);
  CHECK(m4 <= m3 + 1e-9);
  CHECK(m4 >= 1.0);
}

TEST_CASE("discretization dictionary examples") {
  const MeasureSpace u6 = MeasureSpace::uniform(6);
  const DiscretizationDictionary c =
      build_discretization_dictionary(Subspace::constants(u6), SamplePointSet{{0, 3, 5}}, 3.0);
  CHECK((c.w - Matrix::Ones(6, 3)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((c.w_norms.array() - 1.0).abs().maxCoeff() <= 1e-8);
  CHECK(c.mp == doctest::Approx(1.0));

  const Subspace r = Subspace::random(MeasureSpace::random(48, 1.0, 6), 5, 7);
  const SamplePointSet pts = SamplePointSet::random(48, 12, 8);
  const DiscretizationDictionary h = build_discretization_dictionary(r, pts, 2.0);
  const Matrix K = dirichlet_kernel(r);
  for (int j = 0; j < pts.size(); ++j) {
    const int x = pts.indices[j];
    // Hilbert case: w_j is the kernel slice itself.
    CHECK((h.w.col(j) - K.col(x)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(h.w_norms(j) == doctest::Approx(std::sqrt(K(x, x))).epsilon(1e-10));
    CHECK(h.w_norms(j) <= h.mp + 1e-12);
  }
  CHECK(h.max_reproducing_error <= 1e-10);

  for (double p : {3.0, 4.0}) {
    const DiscretizationDictionary d = build_discretization_dictionary(r, pts, p);
    const Matrix repro = d.w.transpose() * r.measure().weights().asDiagonal() * r.basis();
    for (int j = 0; j < pts.size(); ++j)
      CHECK((repro.row(j) - r.basis().row(pts.indices[j])).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(d.max_w_norm <= 2 * d.mp + 1e-6);
    const Dictionary D = d.as_dictionary(r.measure());
    for (int j = 0; j < D.size(); ++j) CHECK(D.space().norm(D.atom(j)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transfer inequality") {
  const MeasureSpace u6 = MeasureSpace::uniform(6);
  const Subspace c = Subspace::constants(u6);
  const DiscretizationDictionary cd = build_discretization_dictionary(c, SamplePointSet{{1, 2}}, 4.0);
  const TransferReport cr = verify_transfer(c, cd, 50, 1);
  CHECK(cr.violations == 0);
  CHECK(cr.max_ratio <= 1.0 + 1e-9);

  const Subspace r = Subspace::random(MeasureSpace::random(64, 1.0, 10), 6, 11);
  const SamplePointSet pts = SamplePointSet::random(64, 16, 12);
  for (double p : {2.0, 3.0}) {
    const DiscretizationDictionary d = build_discretization_dictionary(r, pts, p);
    const TransferReport rep = verify_transfer(r, d, 200, 13);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio <= 2.0);
    // f = u_1 evaluated directly.
    const Vector f = r.basis().col(0);
    double lhs = 0.0;
    for (int x : pts.indices) lhs = std::max(lhs, std::abs(f(x)));
    const Vector pair = d.g.transpose() * r.measure().weights().asDiagonal() * f;
    CHECK(lhs <= 2 * d.mp * pair.cwiseAbs().maxCoeff() + 1e-8);
  }
}

TEST_CASE("IT1 profile: containment and one-dimensional decay") {
  const Subspace one = Subspace::constants(MeasureSpace::uniform(32));
  const SamplePointSet pts = SamplePointSet::random(32, 8, 1);
  It1Options opt;
  opt.samples = 200;
  const It1Report rep = it1_experiment(one, pts, 2.0, {1, 2, 3, 4, 5, 6, 7, 8}, opt);
  CHECK(rep.mp == doctest::Approx(1.0));
  for (const ProfileRow& row : rep.profile.rows) {
    CHECK(row.upper <= rep.mp + 1e-12);
    CHECK(row.lower <= row.upper);
  }
  // N = 1: the coefficient bound decays like 2^-k, faster than the envelope.
  for (std::size_t i = 1; i < rep.finite_dim_upper.size(); ++i) {
    const double r0 = rep.finite_dim_upper[i - 1] / rep.profile.rows[i - 1].envelope;
    const double r1 = rep.finite_dim_upper[i] / rep.profile.rows[i].envelope;
    CHECK(r1 <= r0 + 1e-12);
  }
  CHECK_THROWS_AS(it1_experiment(one, pts, 1.5, {1}, opt), Error);
  CHECK_THROWS_AS(it1_experiment(one, pts, 2.0, {9}, opt), Error);
}
