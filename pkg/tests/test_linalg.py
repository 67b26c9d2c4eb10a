import numpy as np
import pytest

from pseudoprob.errors import DimensionMismatch, NotHermitian
from pseudoprob.linalg import (
    as_operator,
    hermitian_eig,
    identity,
    kron,
    min_eigenvalue,
    partial_transpose,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2


def test_as_operator_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        as_operator(np.zeros((2, 3)))


def test_as_operator_rejects_non_finite():
    with pytest.raises(DimensionMismatch):
        as_operator(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_kron_order():
    a = np.diag([1.0, 2.0])
    b = np.diag([1.0, 0.0])
    # first factor indexes the slower (first) subsystem
    assert np.allclose(kron(a, b), np.diag([1.0, 0.0, 2.0, 0.0]))


def test_hermitian_eig_reconstructs():
    m = random_hermitian(5, seed=3)
    spec = hermitian_eig(m)
    assert np.max(np.abs(spec.reconstruct() - m)) < 1e-12
    total = sum(spec.projectors)
    assert np.max(np.abs(total - identity(5))) < 1e-12


def test_hermitian_eig_groups_degenerate_levels():
    spec = hermitian_eig(np.diag([1.0, 1.0, 2.0]))
    assert len(spec.eigenvalues) == 2
    ranks = sorted(round(np.real(np.trace(p))) for p in spec.projectors)
    assert ranks == [1, 2]


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_min_eigenvalue():
    assert min_eigenvalue(np.diag([3.0, -2.0, 5.0])) == pytest.approx(-2.0)


def test_partial_transpose_is_involutive():
    m = random_hermitian(6, seed=9)
    again = partial_transpose(partial_transpose(m, 2, 3), 2, 3)
    assert np.max(np.abs(again - m)) < 1e-14


def test_partial_transpose_singlet_min_eigenvalue():
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    rho = np.outer(psi, psi.conj())
    pt = partial_transpose(rho, 2, 2)
    assert min_eigenvalue(pt) == pytest.approx(-0.5, abs=1e-12)


def test_partial_transpose_keeps_product_states_positive():
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        rho = kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
        assert min_eigenvalue(partial_transpose(rho, 2, 3)) > -1e-12
