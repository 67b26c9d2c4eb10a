"""Density matrices, two-qubit state families, Pauli correlation-tensor
extraction, and independent entanglement/nonlocality oracles.

The partial-transpose test and the closed-form CHSH maximum are deliberately
computed outside the pseudo-probability machinery so they can serve as
ground truth for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotUnit, Unphysical
from .linalg import as_operator, identity, is_hermitian, kron, partial_transpose
from .observables import PAULI, SIGMA_Z

PSD_TOL = -1e-10
TRACE_TOL = 1e-10
ENTANGLED_TOL = -1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Positive unit-trace operator with declared subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = as_operator(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if math.prod(self.dims) != m.shape[0]:
            raise DimensionMismatch(
                f"subsystem dims {self.dims} do not multiply to {m.shape[0]}"
            )
        if not is_hermitian(m):
            raise Unphysical("density matrix is not Hermitian")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise Unphysical(f"trace {tr} != 1")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < PSD_TOL:
            raise Unphysical(f"negative eigenvalue {lo}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CorrelationPoint:
    """Diagonal (t1, t2, t3) of a two-qubit correlation tensor."""

    t1: float
    t2: float
    t3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.t2, self.t3], dtype=float)


@dataclass(frozen=True)
class TwoQubitPauliForm:
    """Bloch vectors P, Q and 3x3 correlation tensor T of a two-qubit
    operator rho = (1 + P.sigma x 1 + 1 x Q.sigma + sum t_ij sigma_i x sigma_j)/4."""

    P: np.ndarray
    Q: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", np.asarray(self.P, dtype=float).reshape(3))
        object.__setattr__(self, "Q", np.asarray(self.Q, dtype=float).reshape(3))
        object.__setattr__(self, "T", np.asarray(self.T, dtype=float).reshape(3, 3))

    def reconstruct(self) -> np.ndarray:
        m = identity(4)
        for i in range(3):
            m = m + self.P[i] * kron(PAULI[i], identity(2))
            m = m + self.Q[i] * kron(identity(2), PAULI[i])
            for j in range(3):
                m = m + self.T[i, j] * kron(PAULI[i], PAULI[j])
        return m / 4.0


def _require_two_qubits(rho: DensityMatrix) -> np.ndarray:
    if rho.dim != 4 or rho.dims not in ((2, 2), (4,)):
        raise DimensionMismatch(f"expected a two-qubit state, got dims {rho.dims}")
    return rho.matrix


def maximally_mixed(dims=(2, 2)) -> DensityMatrix:
    dims = tuple(dims)
    n = math.prod(dims)
    return DensityMatrix(identity(n) / n, dims)


def bloch_state(v) -> DensityMatrix:
    """Single-qubit state (1 + v.sigma)/2 for |v| <= 1."""
    a = np.asarray(v, dtype=float).reshape(3)
    n = float(np.linalg.norm(a))
    if n > 1.0 + 1e-10:
        raise NotUnit(f"Bloch vector norm {n} exceeds 1")
    m = identity(2)
    for i in range(3):
        m = m + a[i] * PAULI[i]
    return DensityMatrix(m / 2.0, (2,))


def product_state(va, vb) -> DensityMatrix:
    a = bloch_state(va)
    b = bloch_state(vb)
    return DensityMatrix(kron(a.matrix, b.matrix), (2, 2))


def singlet() -> DensityMatrix:
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    return DensityMatrix(np.outer(psi, psi.conj()), (2, 2))


def werner_local(alpha: float, beta: float) -> DensityMatrix:
    """Werner state with an added local z term on the first qubit.

    rho = (1 + alpha sum_i sigma_i x sigma_i + beta sigma_z x 1)/4 with
    eigenvalues (1 + alpha +- beta)/4 and (1 - alpha +- sqrt(4 alpha^2 +
    beta^2))/4; any negative eigenvalue raises Unphysical.
    """
    eigs = [
        (1.0 + alpha + beta) / 4.0,
        (1.0 + alpha - beta) / 4.0,
        (1.0 - alpha + math.sqrt(4.0 * alpha**2 + beta**2)) / 4.0,
        (1.0 - alpha - math.sqrt(4.0 * alpha**2 + beta**2)) / 4.0,
    ]
    lo = min(eigs)
    if lo < PSD_TOL:
        raise Unphysical(
            f"werner_local({alpha}, {beta}) has eigenvalue {lo:.6g} < 0"
        )
    m = identity(4)
    for i in range(3):
        m = m + alpha * kron(PAULI[i], PAULI[i])
    m = m + beta * kron(SIGMA_Z, identity(2))
    return DensityMatrix(m / 4.0, (2, 2))


# positivity of (1 + sum t_i sigma_i x sigma_i)/4 reads off its four
# eigenvalues; each row is the sign pattern of (t1, t2, t3) in one of them
_TETRA_SIGNS = np.array(
    [[-1, -1, -1], [-1, +1, +1], [+1, -1, +1], [+1, +1, -1]], dtype=float
)


def tetrahedron_slacks(t) -> np.ndarray:
    """Values of 1 + s.t for the four sign patterns; all >= 0 iff physical."""
    arr = t.as_array() if isinstance(t, CorrelationPoint) else np.asarray(t, dtype=float)
    return 1.0 + _TETRA_SIGNS @ arr


def bell_diagonal(t: CorrelationPoint) -> DensityMatrix:
    """State with P = Q = 0 and diagonal correlation tensor t."""
    slacks = tetrahedron_slacks(t)
    worst = int(np.argmin(slacks))
    if slacks[worst] < 4.0 * PSD_TOL:
        raise Unphysical(
            f"correlation point ({t.t1}, {t.t2}, {t.t3}) outside the physical "
            f"tetrahedron (facet {worst}, slack {slacks[worst]:.6g})"
        )
    m = identity(4)
    for i, ti in enumerate((t.t1, t.t2, t.t3)):
        m = m + ti * kron(PAULI[i], PAULI[i])
    return DensityMatrix(m / 4.0, (2, 2))


def pauli_form(rho: DensityMatrix) -> TwoQubitPauliForm:
    """Extract P_i = <sigma_i x 1>, Q_j = <1 x sigma_j>, t_ij = <sigma_i x sigma_j>."""
    m = _require_two_qubits(rho)
    p = np.array([np.real(np.trace(m @ kron(PAULI[i], identity(2)))) for i in range(3)])
    q = np.array([np.real(np.trace(m @ kron(identity(2), PAULI[j]))) for j in range(3)])
    t = np.array(
        [
            [np.real(np.trace(m @ kron(PAULI[i], PAULI[j]))) for j in range(3)]
            for i in range(3)
        ]
    )
    return TwoQubitPauliForm(P=p, Q=q, T=t)


@dataclass(frozen=True)
class SvdNormalForm:
    """Correlation tensor diagonalized by one orthogonal transformation per
    side; the rotated form need not be a physical state on its own."""

    singular_values: np.ndarray
    rotation_a: np.ndarray
    rotation_b: np.ndarray
    form: TwoQubitPauliForm


def svd_normal_form(rho: DensityMatrix) -> SvdNormalForm:
    f = pauli_form(rho)
    u, s, vh = np.linalg.svd(f.T)
    o_a = u
    o_b = vh.T
    rotated = TwoQubitPauliForm(P=o_a.T @ f.P, Q=o_b.T @ f.Q, T=np.diag(s))
    return SvdNormalForm(
        singular_values=s, rotation_a=o_a, rotation_b=o_b, form=rotated
    )


def ppt_is_entangled(rho: DensityMatrix) -> bool:
    """Partial-transpose test; exact for two qubits."""
    m = _require_two_qubits(rho)
    lo = float(np.linalg.eigvalsh(partial_transpose(m, 2, 2))[0])
    return lo < ENTANGLED_TOL


def chsh_max(rho: DensityMatrix) -> float:
    """Largest attainable CHSH value, 2 sqrt(u1 + u2) with u1, u2 the top
    two eigenvalues of T^t T."""
    f = pauli_form(rho)
    u = np.linalg.eigvalsh(f.T.T @ f.T)
    return 2.0 * math.sqrt(max(u[-1] + u[-2], 0.0))


def random_density(dim: int, seed: int, dims=None) -> DensityMatrix:
    """Ginibre-ensemble state, deterministic per seed.

    dim 4 defaults to two-qubit subsystem dims.
    """
    if dim < 2:
        raise DimensionMismatch(f"need dim >= 2, got {dim}")
    if dims is None:
        dims = (2, 2) if dim == 4 else (dim,)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.real(np.trace(m)), tuple(dims))


def load_state(obj: dict) -> DensityMatrix:
    """Build a state from the JSON file formats the command line accepts."""
    if "matrix" in obj:
        pairs = obj["matrix"]
        n = int(round(math.isqrt(len(pairs))))
        if n * n != len(pairs):
            raise DimensionMismatch(f"{len(pairs)} entries is not a square matrix")
        flat = np.array([complex(re, im) for re, im in pairs])
        dims = tuple(obj.get("dims", (2, 2) if n == 4 else (n,)))
        return DensityMatrix(flat.reshape(n, n), dims)
    if "pauli" in obj:
        spec = obj["pauli"]
        form = TwoQubitPauliForm(
            P=spec.get("P", [0, 0, 0]), Q=spec.get("Q", [0, 0, 0]), T=spec["T"]
        )
        return DensityMatrix(form.reconstruct(), (2, 2))
    if "family" in obj:
        family = obj["family"]
        if family == "werner_local":
            return werner_local(float(obj["alpha"]), float(obj.get("beta", 0.0)))
        if family == "bell_diagonal":
            t = obj["t"]
            return bell_diagonal(CorrelationPoint(float(t[0]), float(t[1]), float(t[2])))
        if family == "singlet":
            return singlet()
        if family == "maximally_mixed":
            return maximally_mixed(tuple(obj.get("dims", (2, 2))))
        raise Unphysical(f"unknown state family {family!r}")
    raise DimensionMismatch("state object needs 'matrix', 'pauli', or 'family'")
