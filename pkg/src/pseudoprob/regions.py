"""Correlation-space polytopes: which diagonal correlation points are
physical, and which witness detects them at its best sign/permutation
geometry.

Each witness has an undetected polytope (closed region including its
boundary); a physical point is detected exactly when it falls outside.  The
W4 and W3 regions are octahedra cut out of the physical tetrahedron by four
reflected facets at scale 1 and sqrt(3/2); W1 and W2 are dodecahedra of the
12 pairwise bounds c +- t_i +- t_j >= 0 at c = 2/sqrt(3) and 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import CorrelationPoint, werner_local
from .witnesses import default_spec, evaluate

BOUNDARY_TOL = 1e-12

_EVEN_SIGNS = np.array(
    [[+1, +1, +1], [+1, -1, -1], [-1, +1, -1], [-1, -1, +1]], dtype=float
)
_ODD_SIGNS = -_EVEN_SIGNS


def _pair_rows() -> np.ndarray:
    rows = []
    for i in range(3):
        for j in range(i + 1, 3):
            for si in (+1.0, -1.0):
                for sj in (+1.0, -1.0):
                    row = [0.0, 0.0, 0.0]
                    row[i] = si
                    row[j] = sj
                    rows.append(row)
    return np.array(rows)


@dataclass(frozen=True)
class PolytopeSpec:
    """Inequalities c0 + c . t >= 0; membership is their conjunction."""

    name: str
    constants: np.ndarray
    coefficients: np.ndarray

    def slacks(self, t: CorrelationPoint) -> np.ndarray:
        return self.constants + self.coefficients @ t.as_array()

    def contains(self, t: CorrelationPoint, tol: float = BOUNDARY_TOL) -> bool:
        return bool(np.all(self.slacks(t) >= -tol))


def _polytope(name: str, constant: float, rows: np.ndarray) -> PolytopeSpec:
    return PolytopeSpec(
        name=name,
        constants=np.full(len(rows), constant),
        coefficients=np.asarray(rows, dtype=float),
    )


PHYSICAL = _polytope("physical_tetrahedron", 1.0, _ODD_SIGNS)
UNDETECTED = {
    "W1": _polytope("W1_dodecahedron", 2.0 / math.sqrt(3.0), _pair_rows()),
    "W2": _polytope("W2_dodecahedron", 1.0, _pair_rows()),
    "W3": _polytope("W3_octahedron", math.sqrt(1.5), _EVEN_SIGNS),
    "W4": _polytope("W4_octahedron", 1.0, _EVEN_SIGNS),
}


@dataclass(frozen=True)
class RegionClassification:
    point: CorrelationPoint
    physical: bool
    detected_by: frozenset[str]


def classify(t: CorrelationPoint) -> RegionClassification:
    """Physicality plus the set of witnesses whose undetected polytope the
    point escapes.  Boundary points count as not detected."""
    physical = PHYSICAL.contains(t)
    if not physical:
        return RegionClassification(point=t, physical=False, detected_by=frozenset())
    detected = frozenset(
        kind for kind, poly in UNDETECTED.items() if not poly.contains(t)
    )
    return RegionClassification(point=t, physical=True, detected_by=detected)


def werner_thresholds(precision: float = 1e-9) -> dict[str, float]:
    """Detection onset alpha per witness on the beta = 0 Werner line.

    Bisection on evaluate() with the canonical geometry, which is optimal
    for this family; returns the alpha below which the state is detected.
    """
    out: dict[str, float] = {}
    for kind in ("W0", "W1", "W2", "W3", "W4"):
        spec = default_spec(kind)

        def detected(alpha: float) -> bool:
            return evaluate(spec, werner_local(alpha, 0.0)).detected

        lo, hi = -1.0, 0.0
        if not detected(lo):
            out[kind] = math.nan
            continue
        while hi - lo > precision:
            mid = (lo + hi) / 2.0
            if detected(mid):
                lo = mid
            else:
                hi = mid
        out[kind] = (lo + hi) / 2.0
    return out


@dataclass(frozen=True)
class SliceScan:
    t3: float
    step: float
    rows: tuple[RegionClassification, ...]
    counts: dict[str, int]


def _grid_values(step: float) -> np.ndarray:
    n = int(round(2.0 / step))
    return np.round(-1.0 + step * np.arange(n + 1), 12)


def slice_scan(t3: float, step: float = 0.01) -> SliceScan:
    """Classify the (t1, t2) grid at fixed t3 and count the W2/W3 overlap
    categories."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    counts = {"only_W2": 0, "only_W3": 0, "both": 0, "none": 0, "unphysical": 0}
    rows = []
    values = _grid_values(step)
    for t1 in values:
        for t2 in values:
            c = classify(CorrelationPoint(float(t1), float(t2), float(t3)))
            rows.append(c)
            if not c.physical:
                counts["unphysical"] += 1
            else:
                w2 = "W2" in c.detected_by
                w3 = "W3" in c.detected_by
                if w2 and w3:
                    counts["both"] += 1
                elif w2:
                    counts["only_W2"] += 1
                elif w3:
                    counts["only_W3"] += 1
                else:
                    counts["none"] += 1
    return SliceScan(t3=t3, step=step, rows=tuple(rows), counts=counts)
