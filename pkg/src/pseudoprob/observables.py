"""Dichotomic observables, their eigenprojectors, and orthonormal detector
frames with normalized-sum directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadRank, NotHermitian, NotOrthonormal, NotProjector, NotUnit
from .linalg import as_operator, identity, is_hermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# hard invariant is 1e-12; inputs off by up to 1e-6 are assumed to be
# user-entered rounded vectors and get repaired silently
UNIT_TOL = 1e-12
UNIT_REPAIR_TOL = 1e-6
ORTHO_TOL = 1e-10
ORTHO_REPAIR_TOL = 1e-6
INVOLUTION_TOL = 1e-10


def as_bloch(v) -> np.ndarray:
    """Validate a Bloch vector: 3 real components, unit norm.

    Norm deviations up to 1e-6 are renormalized; larger ones raise NotUnit.
    """
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise NotUnit(f"expected 3 real components, got shape {a.shape}")
    n = float(np.linalg.norm(a))
    if abs(n - 1.0) <= UNIT_TOL:
        return a
    if abs(n - 1.0) <= UNIT_REPAIR_TOL:
        return a / n
    raise NotUnit(f"vector norm {n} too far from 1")


@dataclass(frozen=True)
class DichotomicObservable:
    """Hermitian observable with spectrum contained in {+1, -1}."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = as_operator(self.matrix)
        object.__setattr__(self, "matrix", m)
        if not is_hermitian(m):
            raise NotHermitian(f"observable {self.label!r} is not Hermitian")
        dev = float(np.max(np.abs(m @ m - identity(m.shape[0]))))
        if dev > INVOLUTION_TOL:
            raise NotProjector(
                f"observable {self.label!r} is not an involution (|A^2 - 1| = {dev:.3e})"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def pauli_observable(v, label: str = "") -> DichotomicObservable:
    """sigma . v for a unit Bloch vector v."""
    a = as_bloch(v)
    m = a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z
    return DichotomicObservable(m, label)


def bloch_vector_of(m: np.ndarray) -> np.ndarray | None:
    """Unit Bloch vector v with m = sigma . v, or None if m is not of that
    form (wrong shape, trace, or norm)."""
    if m.shape != (2, 2):
        return None
    v = np.array([
        float(np.real(m[0, 1] + m[1, 0])) / 2.0,
        float(np.imag(m[1, 0] - m[0, 1])) / 2.0,
        float(np.real(m[0, 0] - m[1, 1])) / 2.0,
    ])
    if abs(float(np.linalg.norm(v)) - 1.0) > UNIT_REPAIR_TOL:
        return None
    rebuilt = v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z
    if float(np.max(np.abs(rebuilt - m))) > 1e-9:
        return None
    return v


def projector(obs: DichotomicObservable, outcome: int) -> np.ndarray:
    """Eigenprojector (1 + outcome*A)/2 onto the +-1 eigenspace."""
    if outcome not in (+1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    return (identity(obs.dim) + outcome * obs.matrix) / 2.0


def random_dichotomic(dim: int, rank_plus: int, seed: int) -> DichotomicObservable:
    """Random dichotomic observable with a rank-``rank_plus`` +1 eigenspace.

    Built as A = 2 pi_+ - 1 from a Haar-random projector; deterministic
    per seed.
    """
    if not 1 <= rank_plus < dim:
        raise BadRank(f"need 1 <= rank_plus < dim, got rank_plus={rank_plus}, dim={dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    basis = q[:, :rank_plus]
    pi_plus = basis @ basis.conj().T
    return DichotomicObservable(2.0 * pi_plus - identity(dim), f"R{dim}.{rank_plus}.{seed}")


@dataclass(frozen=True)
class ObservableFrame:
    """2 or 3 pairwise-orthogonal unit Bloch vectors plus their normalized sum.

    Orthonormal sets only; handedness is NOT required, reflected triples
    are accepted.
    """

    directions: tuple[np.ndarray, ...]
    sum_direction: np.ndarray = field(init=False)

    def __post_init__(self):
        dirs = [as_bloch(v) for v in self.directions]
        k = len(dirs)
        if k not in (2, 3):
            raise NotOrthonormal(f"frame needs 2 or 3 directions, got {k}")
        worst = max(
            abs(float(np.dot(dirs[i], dirs[j])))
            for i in range(k)
            for j in range(i + 1, k)
        )
        if worst > ORTHO_REPAIR_TOL:
            raise NotOrthonormal(f"directions not orthogonal (max dot {worst:.3e})")
        if worst > ORTHO_TOL:
            dirs = _gram_schmidt(dirs)
        object.__setattr__(self, "directions", tuple(dirs))
        s = np.sum(dirs, axis=0)
        object.__setattr__(self, "sum_direction", s / np.sqrt(k))

    @property
    def size(self) -> int:
        return len(self.directions)

    def observables(self, prefix: str = "") -> tuple[DichotomicObservable, ...]:
        return tuple(
            pauli_observable(v, f"{prefix}{i + 1}")
            for i, v in enumerate(self.directions)
        )


def _gram_schmidt(dirs: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for v in dirs:
        w = v.copy()
        for u in out:
            w = w - np.dot(u, w) * u
        n = float(np.linalg.norm(w))
        if n < 0.5:
            raise NotOrthonormal("directions are linearly dependent")
        out.append(w / n)
    return out


def make_frame(directions) -> ObservableFrame:
    """Orthonormal frame of 2 or 3 Bloch vectors with its normalized sum."""
    return ObservableFrame(tuple(directions))


def doublet_with_sum(u) -> ObservableFrame:
    """Orthonormal pair whose normalized sum is the unit vector u."""
    u = as_bloch(u)
    p = _any_perpendicular(u)
    return make_frame([(u + p) / np.sqrt(2.0), (u - p) / np.sqrt(2.0)])


def triplet_with_sum(u) -> ObservableFrame:
    """Orthonormal triple whose normalized sum is the unit vector u.

    Rotates the canonical axes so that (1,1,1)/sqrt(3) lands on u.
    """
    u = as_bloch(u)
    r = _rotation_between(np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0), u)
    return make_frame([r @ e for e in np.eye(3)])


def _any_perpendicular(u: np.ndarray) -> np.ndarray:
    pick = np.zeros(3)
    pick[int(np.argmin(np.abs(u)))] = 1.0
    p = pick - np.dot(pick, u) * u
    return p / float(np.linalg.norm(p))


def _rotation_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Proper rotation sending unit vector a to unit vector b (Rodrigues)."""
    c = float(np.dot(a, b))
    if c > 1.0 - 1e-14:
        return np.eye(3)
    if c < -1.0 + 1e-14:
        p = _any_perpendicular(a)
        return 2.0 * np.outer(p, p) - np.eye(3)
    v = np.cross(a, b)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)
