"""Quantum representatives of joint outcomes of noncommuting dichotomic
observables.

A unit pseudo projection is half the sum of a product of eigenprojectors and
its reverse; the completely symmetric pseudo projection averages over all
orderings, and a convex pseudo projection interpolates between orderings with
explicit weights.  A Scheme tabulates the symmetric representatives of every
joint outcome of a set of observables grouped by subsystem and resolves the
identity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadWeights,
    DimensionMismatch,
    NotProjector,
    UnknownLabel,
    UnsupportedShape,
)
from .linalg import as_operator, identity, is_hermitian
from .observables import DichotomicObservable, projector

PROJECTOR_TOL = 1e-10
HERMITIAN_TOL = 1e-12
SCHEME_SUM_TOL = 1e-10
WEIGHT_TOL = 1e-12
# orderings are enumerated explicitly; 4!/2 = 12 is the largest set we allow
MAX_SYMMETRIZED = 4


def _check_projectors(projectors_in) -> list[np.ndarray]:
    mats = [as_operator(p) for p in projectors_in]
    if not mats:
        raise NotProjector("need at least one projector")
    dim = mats[0].shape[0]
    for p in mats:
        if p.shape[0] != dim:
            raise DimensionMismatch("projectors must share one dimension")
        if not is_hermitian(p, PROJECTOR_TOL):
            raise NotProjector("input is not Hermitian")
        if float(np.max(np.abs(p @ p - p))) > PROJECTOR_TOL:
            raise NotProjector("input is not idempotent")
    return mats


def canonical_orderings(n: int) -> list[tuple[int, ...]]:
    """All orderings of n items, keeping one representative per reversal pair.

    The representative is the lexicographically smaller of the pair, so the
    list has n!/2 entries for n >= 2 and is stable across runs.
    """
    if n > MAX_SYMMETRIZED:
        raise UnsupportedShape(
            f"symmetrized products support at most {MAX_SYMMETRIZED} factors, got {n}"
        )
    if n == 1:
        return [(0,)]
    out = []
    for perm in itertools.permutations(range(n)):
        if perm <= perm[::-1]:
            out.append(perm)
    return out


def _ordered_product(mats: list[np.ndarray], ordering: tuple[int, ...]) -> np.ndarray:
    acc = mats[ordering[0]]
    for i in ordering[1:]:
        acc = acc @ mats[i]
    return acc


def _unit_pp(mats: list[np.ndarray], ordering: tuple[int, ...]) -> np.ndarray:
    return (_ordered_product(mats, ordering) + _ordered_product(mats, ordering[::-1])) / 2.0


def unit_pseudo_projection(projectors_in) -> np.ndarray:
    """(P1...PN + PN...P1)/2 in the order given.  Hermitian by construction."""
    mats = _check_projectors(projectors_in)
    return _unit_pp(mats, tuple(range(len(mats))))


def symmetric_pseudo_projection(projectors_in) -> np.ndarray:
    """Average of the ordered products over all N! orderings.

    Equals the equal-weight convex combination of the N!/2 unit pseudo
    projections; for N = 2 it coincides with unit_pseudo_projection.
    """
    mats = _check_projectors(projectors_in)
    orderings = canonical_orderings(len(mats))
    acc = np.zeros_like(mats[0])
    for ordering in orderings:
        acc = acc + _unit_pp(mats, ordering)
    return acc / len(orderings)


@dataclass(frozen=True)
class PseudoProjection:
    """A representative operator together with the outcome it stands for.

    ``weights`` lists (ordering, weight) pairs of the convex combination;
    None marks the completely symmetric combination without spelling out
    the uniform weights.
    """

    operator: np.ndarray
    observables: tuple[str, ...]
    outcome: tuple[int, ...]
    weights: tuple[tuple[tuple[int, ...], float], ...] | None = None

    def __post_init__(self):
        op = as_operator(self.operator)
        object.__setattr__(self, "operator", op)
        if not is_hermitian(op, HERMITIAN_TOL):
            raise NotProjector("pseudo projection operator must be Hermitian")
        if len(self.observables) != len(self.outcome):
            raise DimensionMismatch("one outcome per observable required")
        if any(o not in (+1, -1) for o in self.outcome):
            raise BadWeights(f"outcomes must be +-1, got {self.outcome}")
        if self.weights is not None:
            total = 0.0
            seen = set()
            for ordering, lam in self.weights:
                key = min(tuple(ordering), tuple(ordering)[::-1])
                if key in seen:
                    raise BadWeights(f"ordering {ordering} repeated up to reversal")
                seen.add(key)
                if not -WEIGHT_TOL <= lam <= 1.0 + WEIGHT_TOL:
                    raise BadWeights(f"weight {lam} outside [0, 1]")
                total += lam
            if abs(total - 1.0) > 1e-9:
                raise BadWeights(f"weights sum to {total}, expected 1")

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.operator)[0])


def min_eigenvalue(pp) -> float:
    """Smallest eigenvalue of a pseudo projection (or raw operator)."""
    op = pp.operator if isinstance(pp, PseudoProjection) else as_operator(pp)
    return float(np.linalg.eigvalsh(op)[0])


def convex_pseudo_projection(projectors_in, weights) -> PseudoProjection:
    """Weighted sum of unit pseudo projections over explicit orderings."""
    mats = _check_projectors(projectors_in)
    n = len(mats)
    wlist = []
    for ordering, lam in weights:
        ordering = tuple(int(i) for i in ordering)
        if sorted(ordering) != list(range(n)):
            raise BadWeights(f"{ordering} is not an ordering of {n} projectors")
        wlist.append((ordering, float(lam)))
    canonical_orderings(n)  # enforces the size cap
    acc = np.zeros_like(mats[0])
    for ordering, lam in wlist:
        acc = acc + lam * _unit_pp(mats, ordering)
    return PseudoProjection(
        operator=acc,
        observables=tuple(f"P{i + 1}" for i in range(n)),
        outcome=(+1,) * n,
        weights=tuple(wlist),
    )


def outcome_key(outcomes: tuple[int, ...], group_sizes: tuple[int, ...]) -> str:
    """Serialize an outcome tuple, one '+'/'-' per observable, ';' between
    subsystems."""
    parts = []
    pos = 0
    for size in group_sizes:
        parts.append("".join("+" if o > 0 else "-" for o in outcomes[pos:pos + size]))
        pos += size
    return ";".join(parts)


@dataclass(frozen=True)
class Scheme:
    """Table of symmetric pseudo projections over all joint outcomes.

    groups holds the observables per subsystem (a group may be empty after
    marginalization); dims the subsystem dimensions.  The table always sums
    to the identity.
    """

    groups: tuple[tuple[DichotomicObservable, ...], ...]
    dims: tuple[int, ...]
    table: dict[str, PseudoProjection]

    def __post_init__(self):
        total = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for pp in self.table.values():
            total = total + pp.operator
        dev = float(np.max(np.abs(total - identity(self.total_dim))))
        if dev > SCHEME_SUM_TOL:
            raise DimensionMismatch(f"scheme entries sum off identity by {dev:.3e}")

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(obs.label for group in self.groups for obs in group)

    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    def sum_residual(self) -> float:
        total = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for pp in self.table.values():
            total = total + pp.operator
        return float(np.max(np.abs(total - identity(self.total_dim))))

    def pseudo_probabilities(self, rho) -> dict[str, float]:
        m = as_operator(getattr(rho, "matrix", rho))
        if m.shape[0] != self.total_dim:
            raise DimensionMismatch(
                f"state dim {m.shape[0]} vs scheme dim {self.total_dim}"
            )
        return {
            key: float(np.real(np.trace(m @ pp.operator)))
            for key, pp in self.table.items()
        }


def build_scheme(groups_in) -> Scheme:
    """Build the full outcome table for observables grouped by subsystem.

    Operators on different subsystems commute, so the symmetrization
    factorizes: each entry is the tensor product of per-subsystem symmetric
    pseudo projections.
    """
    groups = tuple(tuple(g) for g in groups_in)
    if not groups or any(len(g) == 0 for g in groups):
        raise DimensionMismatch("each subsystem needs at least one observable")
    for g in groups:
        if len(g) > MAX_SYMMETRIZED:
            raise UnsupportedShape(
                f"at most {MAX_SYMMETRIZED} observables per subsystem, got {len(g)}"
            )
        if any(obs.dim != g[0].dim for obs in g):
            raise DimensionMismatch("observables within a subsystem must share dim")
    dims = tuple(g[0].dim for g in groups)
    sizes = tuple(len(g) for g in groups)
    labels = tuple(obs.label for g in groups for obs in g)
    table: dict[str, PseudoProjection] = {}
    for outcomes in itertools.product((+1, -1), repeat=sum(sizes)):
        factors = []
        pos = 0
        for g, size in zip(groups, sizes):
            projs = [projector(obs, outcomes[pos + j]) for j, obs in enumerate(g)]
            factors.append(symmetric_pseudo_projection(projs))
            pos += size
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        table[outcome_key(outcomes, sizes)] = PseudoProjection(
            operator=op, observables=labels, outcome=outcomes, weights=None
        )
    return Scheme(groups=groups, dims=dims, table=table)


def marginalize(scheme: Scheme, drop: str) -> Scheme:
    """Sum the table over one observable's outcomes.

    The result is the scheme of the remaining observables; repeated labels
    drop their first occurrence.
    """
    where = None
    for gi, group in enumerate(scheme.groups):
        for oi, obs in enumerate(group):
            if obs.label == drop:
                where = (gi, oi)
                break
        if where:
            break
    if where is None:
        raise UnknownLabel(f"no observable labeled {drop!r} in scheme")
    gi, oi = where
    flat_drop = sum(len(g) for g in scheme.groups[:gi]) + oi

    new_groups = tuple(
        tuple(obs for oi2, obs in enumerate(group) if not (gi2 == gi and oi2 == oi))
        for gi2, group in enumerate(scheme.groups)
    )
    new_sizes = tuple(len(g) for g in new_groups)
    old_sizes = scheme.group_sizes()
    new_labels = tuple(
        lab for i, lab in enumerate(scheme.labels) if i != flat_drop
    )

    table: dict[str, PseudoProjection] = {}
    n_new = sum(new_sizes)
    for outcomes in itertools.product((+1, -1), repeat=n_new):
        acc = np.zeros((scheme.total_dim, scheme.total_dim), dtype=complex)
        for dropped in (+1, -1):
            parent = outcomes[:flat_drop] + (dropped,) + outcomes[flat_drop:]
            acc = acc + scheme.table[outcome_key(parent, old_sizes)].operator
        table[outcome_key(outcomes, new_sizes)] = PseudoProjection(
            operator=acc, observables=new_labels, outcome=outcomes, weights=None
        )
    return Scheme(groups=new_groups, dims=scheme.dims, table=table)
