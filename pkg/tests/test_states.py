import math

import numpy as np
import pytest

from pseudoprob.errors import DimensionMismatch, NotUnit, Unphysical
from pseudoprob.states import (
    CorrelationPoint,
    DensityMatrix,
    bell_diagonal,
    bloch_state,
    chsh_max,
    load_state,
    maximally_mixed,
    pauli_form,
    ppt_is_entangled,
    product_state,
    random_density,
    singlet,
    svd_normal_form,
    tetrahedron_slacks,
    werner_local,
)


def test_density_matrix_validation():
    with pytest.raises(Unphysical):
        DensityMatrix(np.diag([0.7, 0.7, -0.2, -0.2]), (2, 2))
    with pytest.raises(Unphysical):
        DensityMatrix(np.eye(4) / 2, (2, 2))
    with pytest.raises(DimensionMismatch):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_maximally_mixed():
    rho = maximally_mixed()
    assert np.allclose(rho.matrix, np.eye(4) / 4)
    form = pauli_form(rho)
    assert np.max(np.abs(form.T)) < 1e-14
    assert np.max(np.abs(form.P)) < 1e-14


def test_bloch_state_bounds():
    rho = bloch_state(np.array([0.0, 0.0, 1.0]))
    assert np.allclose(rho.matrix, np.diag([1.0, 0.0]))
    with pytest.raises(NotUnit):
        bloch_state(np.array([0.0, 0.0, 1.5]))


def test_product_state_pauli_form():
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 0.0, -1.0])
    form = pauli_form(product_state(a, b))
    assert np.max(np.abs(form.P - a)) < 1e-12
    assert np.max(np.abs(form.Q - b)) < 1e-12
    assert np.max(np.abs(form.T - np.outer(a, b))) < 1e-12


def test_singlet_pauli_form():
    form = pauli_form(singlet())
    assert np.max(np.abs(form.T + np.eye(3))) < 1e-12
    assert np.max(np.abs(form.P)) < 1e-14
    assert np.max(np.abs(form.Q)) < 1e-14


def test_pauli_form_reconstructs():
    rho = random_density(4, seed=17)
    form = pauli_form(rho)
    assert np.max(np.abs(form.reconstruct() - rho.matrix)) < 1e-12


def test_werner_local_eigenvalues():
    rho = werner_local(-0.6, 0.0)
    vals = np.sort(np.linalg.eigvalsh(rho.matrix))
    assert np.max(np.abs(vals - np.array([0.1, 0.1, 0.1, 0.7]))) < 1e-12


def test_werner_local_eigenvalue_formula():
    rng = np.random.default_rng(23)
    hits = 0
    while hits < 10:
        alpha = float(rng.uniform(-1.0, 1.0))
        beta = float(rng.uniform(-1.0, 1.0))
        closed = 0.25 * np.array([
            1.0 + alpha + beta,
            1.0 + alpha - beta,
            1.0 - alpha + math.hypot(2.0 * alpha, beta),
            1.0 - alpha - math.hypot(2.0 * alpha, beta),
        ])
        if closed.min() < 1e-6:
            continue
        hits += 1
        rho = werner_local(alpha, beta)
        vals = np.sort(np.linalg.eigvalsh(rho.matrix))
        assert np.max(np.abs(vals - np.sort(closed))) < 1e-10


def test_werner_local_rejects_unphysical():
    with pytest.raises(Unphysical):
        werner_local(-1.0, 0.8)
    with pytest.raises(Unphysical):
        werner_local(1.2, 0.0)


def test_bell_diagonal_matches_tetrahedron():
    good = CorrelationPoint(-0.7, -0.6, -0.5)
    assert np.min(tetrahedron_slacks(good.as_array())) >= 0
    rho = bell_diagonal(good)
    form = pauli_form(rho)
    assert np.max(np.abs(form.T - np.diag(good.as_array()))) < 1e-12
    bad = CorrelationPoint(0.9, 0.9, 0.9)
    assert np.min(tetrahedron_slacks(bad.as_array())) < 0
    with pytest.raises(Unphysical):
        bell_diagonal(bad)


def test_svd_normal_form():
    rho = random_density(4, seed=31)
    form = pauli_form(rho)
    nf = svd_normal_form(rho)
    s = np.asarray(nf.singular_values)
    assert np.all(np.diff(s) <= 1e-14)
    for rot in (nf.rotation_a, nf.rotation_b):
        assert np.max(np.abs(rot.T @ rot - np.eye(3))) < 1e-12
    # rotations diagonalize the correlation tensor
    recovered = nf.rotation_a.T @ form.T @ nf.rotation_b
    assert np.max(np.abs(recovered - np.diag(s))) < 1e-12


def test_ppt_detects_singlet_not_product():
    assert ppt_is_entangled(singlet())
    a = np.array([0.0, 1.0, 0.0])
    assert not ppt_is_entangled(product_state(a, a))
    # the isotropic-correlation boundary sits at -1/3
    assert ppt_is_entangled(werner_local(-0.3334, 0.0))
    assert not ppt_is_entangled(werner_local(-0.3333, 0.0))


def test_chsh_max_values():
    assert chsh_max(singlet()) == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)
    a = np.array([1.0, 0.0, 0.0])
    assert chsh_max(product_state(a, a)) == pytest.approx(2.0, abs=1e-12)
    assert chsh_max(werner_local(-0.5, 0.0)) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_random_density_is_deterministic():
    a = random_density(4, seed=5)
    b = random_density(4, seed=5)
    assert np.array_equal(a.matrix, b.matrix)
    assert np.real(np.trace(a.matrix)) == pytest.approx(1.0, abs=1e-12)
    assert float(np.linalg.eigvalsh(a.matrix)[0]) > -1e-12


def test_load_state_matrix_form():
    rho = random_density(4, seed=41)
    flat = [[float(z.real), float(z.imag)] for z in rho.matrix.reshape(-1)]
    again = load_state({"matrix": flat})
    assert np.max(np.abs(again.matrix - rho.matrix)) < 1e-14


def test_load_state_pauli_form():
    rho = load_state({"pauli": {"T": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]}})
    assert np.max(np.abs(rho.matrix - singlet().matrix)) < 1e-12


def test_load_state_families():
    rho = load_state({"family": "werner_local", "alpha": -0.5, "beta": 0.1})
    assert np.max(np.abs(rho.matrix - werner_local(-0.5, 0.1).matrix)) < 1e-14
    rho = load_state({"family": "bell_diagonal", "t": [-0.5, 0.2, 0.1]})
    expected = bell_diagonal(CorrelationPoint(-0.5, 0.2, 0.1))
    assert np.max(np.abs(rho.matrix - expected.matrix)) < 1e-14
    assert np.max(np.abs(load_state({"family": "singlet"}).matrix
                         - singlet().matrix)) < 1e-14
    with pytest.raises(Unphysical):
        load_state({"family": "mystery"})
