import numpy as np
import pytest

from pseudoprob.errors import BadRank, NotHermitian, NotOrthonormal, NotProjector, NotUnit
from pseudoprob.observables import (
    DichotomicObservable,
    bloch_vector_of,
    doublet_with_sum,
    make_frame,
    pauli_observable,
    projector,
    random_dichotomic,
    triplet_with_sum,
)

X = np.array([1.0, 0.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def test_pauli_observable_is_involution():
    v = np.array([1.0, 2.0, 2.0]) / 3.0
    obs = pauli_observable(v, "A1")
    assert obs.label == "A1"
    assert np.max(np.abs(obs.matrix @ obs.matrix - np.eye(2))) < 1e-12


def test_pauli_observable_renormalizes_near_unit():
    obs = pauli_observable(np.array([1.0 + 1e-8, 0.0, 0.0]))
    assert np.max(np.abs(obs.matrix @ obs.matrix - np.eye(2))) < 1e-12


def test_pauli_observable_rejects_far_from_unit():
    with pytest.raises(NotUnit):
        pauli_observable(np.array([0.5, 0.0, 0.0]))


def test_dichotomic_validation():
    with pytest.raises(NotHermitian):
        DichotomicObservable(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotProjector):
        DichotomicObservable(np.diag([1.0, 0.5]))


def test_projector_outcomes():
    obs = pauli_observable(Z)
    plus = projector(obs, +1)
    minus = projector(obs, -1)
    assert np.allclose(plus, np.diag([1.0, 0.0]))
    assert np.allclose(plus + minus, np.eye(2))
    with pytest.raises(ValueError):
        projector(obs, 0)


def test_bloch_vector_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(10):
        v = rng.standard_normal(3)
        v = v / np.linalg.norm(v)
        back = bloch_vector_of(pauli_observable(v).matrix)
        assert back is not None
        assert np.max(np.abs(back - v)) < 1e-12


def test_bloch_vector_of_higher_dim_is_none():
    obs = random_dichotomic(3, rank_plus=1, seed=0)
    assert bloch_vector_of(obs.matrix) is None


def test_random_dichotomic_rank_and_involution():
    for dim, rank in ((2, 1), (3, 2), (4, 1)):
        obs = random_dichotomic(dim, rank_plus=rank, seed=dim + rank)
        m = obs.matrix
        assert np.max(np.abs(m @ m - np.eye(dim))) < 1e-10
        # trace counts +1 eigenvalues against -1 ones
        assert np.real(np.trace(m)) == pytest.approx(2 * rank - dim, abs=1e-10)
    with pytest.raises(BadRank):
        random_dichotomic(2, rank_plus=2, seed=0)


def test_make_frame_sum_direction():
    frame = make_frame([X, Z])
    assert np.allclose(frame.sum_direction, (X + Z) / np.sqrt(2.0))
    assert frame.size == 2
    labels = [o.label for o in frame.observables("B")]
    assert labels == ["B1", "B2"]


def test_make_frame_repairs_small_drift():
    frame = make_frame([X + np.array([0.0, 1e-8, 0.0]), Z])
    g = np.array(frame.directions)
    assert np.max(np.abs(g @ g.T - np.eye(2))) < 1e-12


def test_make_frame_rejects_large_drift():
    tilted = np.array([0.1, 0.0, np.sqrt(1.0 - 0.01)])
    with pytest.raises(NotOrthonormal):
        make_frame([X, tilted, np.array([0.0, 1.0, 0.0])])


@pytest.mark.parametrize("u", [
    np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0),
    -np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0),
    np.array([0.0, 0.0, 1.0]),
    np.array([-0.6, 0.8, 0.0]),
])
def test_triplet_with_sum_hits_target(u):
    frame = triplet_with_sum(u)
    g = np.array(frame.directions)
    assert np.max(np.abs(g @ g.T - np.eye(3))) < 1e-10
    assert np.max(np.abs(frame.sum_direction - u)) < 1e-10


def test_doublet_with_sum_hits_target():
    u = np.array([0.0, 1.0, 0.0])
    frame = doublet_with_sum(u)
    assert frame.size == 2
    assert np.max(np.abs(frame.sum_direction - u)) < 1e-10
