import math

import numpy as np
import pytest

from pseudoprob.errors import ResolutionTooFine, UnsupportedShape
from pseudoprob.optimizer import (
    GeometrySearchConfig,
    brute_force_geometry,
    detected_anywhere_on_orbit,
    optimize_geometry,
    orbit_best,
    orbit_specs,
    svd_informed_spec,
)
from pseudoprob.states import (
    CorrelationPoint,
    bell_diagonal,
    chsh_max,
    maximally_mixed,
    product_state,
    random_density,
    singlet,
    werner_local,
)
from pseudoprob.witnesses import evaluate

ROOT2 = math.sqrt(2.0)


def random_separable(seed, terms=4):
    rng = np.random.default_rng(seed)
    acc = np.zeros((4, 4), dtype=complex)
    weights = rng.dirichlet(np.ones(terms))
    for w in weights:
        a = rng.standard_normal(3)
        b = rng.standard_normal(3)
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        acc = acc + w * product_state(a, b).matrix
    from pseudoprob.states import DensityMatrix

    return DensityMatrix(acc, (2, 2))


def test_config_validation():
    with pytest.raises(UnsupportedShape):
        GeometrySearchConfig(restarts=0)
    with pytest.raises(UnsupportedShape):
        GeometrySearchConfig(steps=(0.1, 0.3))
    with pytest.raises(UnsupportedShape):
        GeometrySearchConfig(steps=(0.1, -0.1))


def test_svd_informed_spec_hits_singlet_optimum():
    rho = singlet()
    targets = {"W0": 2.0 * ROOT2, "W1": -2.0, "W2": -2.0, "W3": -3.0, "W4": -3.0}
    for kind, target in targets.items():
        report = evaluate(svd_informed_spec(kind, rho), rho)
        got = abs(report.value) if kind == "W0" else report.value
        assert got == pytest.approx(target, abs=1e-10)


def test_optimize_geometry_matches_chsh_oracle():
    cfg = GeometrySearchConfig(seed=0, restarts=1)
    for i in range(8):
        rho = random_density(4, seed=500 + i)
        result = optimize_geometry("W0", rho, cfg)
        assert abs(result.value) == pytest.approx(chsh_max(rho), abs=1e-6)


def test_optimize_geometry_entanglement_kinds():
    rho = werner_local(-0.9, 0.0)
    cfg = GeometrySearchConfig(seed=1, restarts=1)
    expected = {"W1": -1.8, "W2": -1.8, "W3": -2.7, "W4": -2.7}
    for kind, target in expected.items():
        result = optimize_geometry(kind, rho, cfg)
        assert result.value == pytest.approx(target, abs=1e-7)
        assert result.detected


def test_optimize_geometry_rejects_non_two_qubit():
    rho = random_density(9, seed=3, dims=(3, 3))
    with pytest.raises(UnsupportedShape):
        optimize_geometry("W1", rho)


def test_orbit_sizes():
    assert len(orbit_specs("W0")) == 24
    assert len(orbit_specs("W1")) == 24
    assert len(orbit_specs("W2")) == 24
    assert len(orbit_specs("W3")) == 48
    assert len(orbit_specs("W4")) == 48


def test_orbit_best_is_exact_for_diagonal_tensors():
    # canonical orbit: pair sums for W1/W2, full sum for W3/W4
    rho = bell_diagonal(CorrelationPoint(-0.7, 0.5, 0.3))
    expected = {"W1": -1.2, "W2": -1.2, "W3": -1.5, "W4": -1.5}
    for kind, target in expected.items():
        report = orbit_best(kind, rho)
        assert report.value == pytest.approx(target, abs=1e-10)


def test_free_side_beats_aligned_frames_for_w1():
    # unconstrained first-side directions push past the pair-sum value
    rho = bell_diagonal(CorrelationPoint(-0.7, 0.5, 0.3))
    svd_value = evaluate(svd_informed_spec("W1", rho), rho).value
    assert svd_value == pytest.approx(-math.sqrt(2.0 * (0.49 + 0.25)), abs=1e-10)
    assert svd_value < orbit_best("W1", rho).value
    searched = optimize_geometry("W1", rho, GeometrySearchConfig(seed=2, restarts=2))
    assert searched.value == pytest.approx(svd_value, abs=1e-7)
    grid = brute_force_geometry("W1", rho, resolution_deg=5.0)
    assert svd_value - 1e-9 <= grid <= svd_value + 0.01


def test_orbit_detection_flags():
    assert detected_anywhere_on_orbit("W4", singlet())
    assert not detected_anywhere_on_orbit("W4", maximally_mixed())
    sep = random_separable(seed=11)
    for kind in ("W1", "W2", "W3", "W4"):
        assert not detected_anywhere_on_orbit(kind, sep)


def test_brute_force_w0_on_singlet():
    # the 15 degree grid carries an exactly orthogonal direction pair
    result = brute_force_geometry("W0", singlet(), resolution_deg=15.0)
    assert abs(result) == pytest.approx(2.0 * ROOT2, abs=1e-9)


def test_brute_force_w4_on_singlet():
    result = brute_force_geometry("W4", singlet(), resolution_deg=20.0)
    assert result == pytest.approx(-3.0, abs=1e-9)


def test_brute_force_monotone_under_refinement():
    rho = random_density(4, seed=9)
    coarse = brute_force_geometry("W3", rho, resolution_deg=20.0)
    finer = brute_force_geometry("W3", rho, resolution_deg=10.0)
    assert finer <= coarse + 1e-12
    c0 = abs(brute_force_geometry("W0", rho, resolution_deg=30.0))
    f0 = abs(brute_force_geometry("W0", rho, resolution_deg=15.0))
    assert f0 >= c0 - 1e-12


def test_brute_force_budget_guard():
    with pytest.raises(ResolutionTooFine):
        brute_force_geometry("W0", singlet(), resolution_deg=0.5)
    with pytest.raises(ResolutionTooFine):
        brute_force_geometry("W0", singlet(), resolution_deg=2.0, budget=1000)


def test_brute_force_approaches_oracle():
    rho = random_density(4, seed=21)
    got = abs(brute_force_geometry("W0", rho, resolution_deg=5.0))
    target = chsh_max(rho)
    assert got <= target + 1e-9
    assert got >= target - 0.02


def test_search_at_least_matches_coarse_grid():
    rho = random_density(4, seed=33)
    cfg = GeometrySearchConfig(seed=0, restarts=2)
    for kind in ("W0", "W1", "W2", "W3", "W4"):
        searched = optimize_geometry(kind, rho, cfg).value
        grid = brute_force_geometry(kind, rho, resolution_deg=10.0)
        if kind == "W0":
            assert abs(searched) >= abs(grid) - 1e-3
        else:
            assert searched <= grid + 1e-3
