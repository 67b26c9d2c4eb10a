"""Dense complex matrix kernel: Hermitian eigendecompositions, tensor
products and partial transposes for operators of dimension <= 16.

All operators in this package are plain ``numpy.ndarray`` of complex dtype;
:func:`as_operator` is the validating entry point used at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian

# Every operator handled here is an exact rational/algebraic combination of
# projectors; only eigensolver noise enters, so fixed tolerances are safe.
HERMITICITY_TOL = 1e-10
EIGENVALUE_GROUP_TOL = 1e-8


def as_operator(m) -> np.ndarray:
    """Validate and coerce input to a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise DimensionMismatch("matrix entries must be finite")
    return a


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_operator(m).conj().T


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    a = as_operator(m)
    return float(np.max(np.abs(a - a.conj().T))) <= tol


def kron(a, b) -> np.ndarray:
    """Tensor product; the first factor is the first subsystem."""
    return np.kron(as_operator(a), as_operator(b))


def trace(m) -> complex:
    return complex(np.trace(as_operator(m)))


@dataclass(frozen=True)
class Spectrum:
    """Grouped spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are the distinct eigenvalues in ascending order and
    ``projectors[i]`` the orthogonal projector onto the corresponding
    (possibly degenerate) eigenspace, so that m = sum_i lam_i P_i.
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projectors[0])
        for lam, proj in zip(self.eigenvalues, self.projectors):
            out = out + lam * proj
        return out


def hermitian_eig(m) -> Spectrum:
    """Spectral decomposition with degenerate eigenvalues merged.

    Eigenvalues closer than ``EIGENVALUE_GROUP_TOL`` are treated as one
    degenerate level; dichotomic observables in dim > 2 rely on this.
    """
    a = as_operator(m)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > HERMITICITY_TOL:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    vals, vecs = np.linalg.eigh(a)
    groups: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[groups[-1][0]] < EIGENVALUE_GROUP_TOL:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues = []
    projectors = []
    for idx in groups:
        block = vecs[:, idx]
        eigenvalues.append(float(np.mean(vals[idx])))
        projectors.append(block @ block.conj().T)
    return Spectrum(tuple(eigenvalues), tuple(projectors))


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    a = as_operator(m)
    if not is_hermitian(a):
        raise NotHermitian("min_eigenvalue expects a Hermitian matrix")
    return float(np.linalg.eigvalsh(a)[0])


def partial_transpose(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of an operator on C^dim_a x C^dim_b."""
    a = as_operator(m)
    if dim_a * dim_b != a.shape[0]:
        raise DimensionMismatch(
            f"subsystem dims {dim_a}x{dim_b} do not match matrix dim {a.shape[0]}"
        )
    blocks = a.reshape(dim_a, dim_b, dim_a, dim_b)
    return blocks.transpose(0, 3, 2, 1).reshape(dim_a * dim_b, dim_a * dim_b)
