import numpy as np
import pytest

import entnum


def test_norms_and_functional():
    space = entnum.NormedSpace.sequence(2, 2.0)
    assert space.norm(np.array([3.0, 4.0])) == pytest.approx(5.0)
    s15 = entnum.NormedSpace.sequence(2, 1.5)
    f = np.array([1.0, 1.0])
    F = s15.norming_functional(f)
    assert s15.pairing(F, f) == pytest.approx(2 ** (2 / 3))
    assert s15.dual_norm(F) == pytest.approx(1.0)


def test_wcga_orthonormal_matches_bruteforce():
    space = entnum.NormedSpace.sequence(6, 2.0)
    d = entnum.Dictionary.canonical(space)
    f = np.array([0.1, -3.0, 0.5, 2.0, 0.0, -1.0])
    greedy = entnum.wcga(f, d, 2)
    brute = entnum.best_mterm_bruteforce(f, d, 2)
    assert sorted(greedy.support) == [1, 3]
    assert greedy.residual_norm == pytest.approx(brute.residual_norm, abs=1e-12)


def test_u_norm_matches_lp():
    rng = np.random.default_rng(3)
    space = entnum.NormedSpace.sequence(4, 3.0)
    d = entnum.Dictionary.normalized(space, rng.standard_normal((4, 7)))
    F = rng.standard_normal(4)
    assert entnum.norm_U(F, d) == pytest.approx(entnum.octahedron_sup_lp(F, d), abs=1e-9)


def test_nikolskii_routes_agree():
    sub = entnum.Subspace.random(entnum.MeasureSpace.uniform(24), 3, 5)
    for p in (2.0, 3.0):
        assert entnum.m_p_direct(sub, p) == pytest.approx(entnum.m_p_dual(sub, p), abs=1e-6)
    const = entnum.Subspace.constants(entnum.MeasureSpace.uniform(10))
    assert entnum.m_p_direct(const, 2.0) == pytest.approx(1.0)


def test_fit_recovers_power_law():
    ms = [1.0, 2.0, 4.0, 8.0]
    fit = entnum.fit_envelope(ms, [3 * m ** (-1 / 3) for m in ms], 0, entnum.EnvelopeModel.POWER_M)
    assert fit.exponent == pytest.approx(-1 / 3, abs=1e-9)
    assert fit.constant == pytest.approx(3.0, abs=1e-9)


def test_run_is_deterministic():
    cfg = {"experiment": "ball-entropy", "seed": 7, "p": 2.0, "n": 8, "samples": 100}
    a = entnum.run(cfg)
    b = entnum.run(cfg)
    assert a["rows"] == b["rows"]
    assert a["columns"] == ["k", "lower", "upper", "envelope", "ratio"]
    assert all(row[1] <= row[2] + 1e-12 for row in a["rows"])
    assert set(entnum.experiment_names()) >= {"it1", "mp-duality"}


def test_validation_errors_surface():
    with pytest.raises(entnum.EntnumError, match="p >= 2"):
        entnum.run({"experiment": "it1", "seed": 1, "p": 1.5, "n": 8, "N": 2, "s": 32})
    with pytest.raises(ValueError):
        entnum.NormedSpace.sequence(3, 2.0).norm(np.zeros(2))
