"""The five nonclassicality conditions W0..W4.

Each condition exists in two forms that this module ties together: a logical
proposition (or sum of scheme marginals) whose pseudo probability dips below
zero or above one, and a closed-form correlation expression with a bound.
The operator identity linking the two is checked on every evaluation and is
independently verifiable over random geometries via identity_residuals.

W0 is the Bell-CHSH condition and works for dichotomic observables in any
M x N dimension; W1..W4 are two-qubit entanglement witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadFrames, BadGeometry, DimensionMismatch, SubsystemMismatch
from .linalg import identity, kron
from .observables import (
    DichotomicObservable,
    ObservableFrame,
    doublet_with_sum,
    make_frame,
    pauli_observable,
    projector,
    random_dichotomic,
    triplet_with_sum,
)
from .propositions import (
    And,
    Literal,
    Or,
    compile_proposition,
    make_context,
)
from .pseudoprojection import symmetric_pseudo_projection
from .states import DensityMatrix

KINDS = ("W0", "W1", "W2", "W3", "W4")

BOUNDS = {
    "W0": 2.0,
    "W1": -2.0 / math.sqrt(3.0),
    "W2": -1.0,
    "W3": -math.sqrt(1.5),
    "W4": -1.0,
}
DIRECTIONS = {"W0": "absolute", "W1": "lower", "W2": "lower", "W3": "lower", "W4": "lower"}

# compiled proposition / scheme-sum operator = a*identity + b*(correlation op)
IDENTITY_COEFFS = {
    "W0": (0.5, 0.25),
    "W2": (0.25, 0.25),
    "W4": (0.125, 0.125),
    "S1": (0.25, math.sqrt(3.0) / 8.0),
    "S2": (3.0 / 16.0, math.sqrt(6.0) / 16.0),
    "S3": (3.0 / 32.0, 3.0 / 32.0),
}

DETECT_TOL = 1e-12
GEOMETRY_TOL = 1e-10
CROSS_CHECK_TOL = 1e-8
TWO_TERM_BOUND = math.sqrt(2.0)


@dataclass(frozen=True)
class WitnessSpec:
    """One of W0..W4 with its detector geometry and violation bound."""

    kind: str
    geometry: tuple
    bound: float
    direction: str


@dataclass(frozen=True)
class WitnessReport:
    kind: str
    value: float
    bound: float
    direction: str
    detected: bool
    scheme_sum: float
    geometry: tuple


# ---------------------------------------------------------------------------
# spec factories


def chsh_spec(a1, a2, b1, b2) -> WitnessSpec:
    """W0 from four dichotomic observables, the first two on subsystem one."""
    obs = []
    for matrix_or_obs, label in ((a1, "A1"), (a2, "A2"), (b1, "B1"), (b2, "B2")):
        src = matrix_or_obs.matrix if isinstance(matrix_or_obs, DichotomicObservable) else matrix_or_obs
        obs.append(DichotomicObservable(src, label))
    a1, a2, b1, b2 = obs
    if a1.dim != a2.dim or b1.dim != b2.dim:
        raise SubsystemMismatch("observables on one subsystem must share dimension")
    return WitnessSpec("W0", (a1, a2, b1, b2), BOUNDS["W0"], "absolute")


def chsh_spec_from_bloch(va1, va2, vb1, vb2) -> WitnessSpec:
    return chsh_spec(
        pauli_observable(va1), pauli_observable(va2),
        pauli_observable(vb1), pauli_observable(vb2),
    )


def w1_spec(a1_dir, a2_dir, phi: ObservableFrame, theta: ObservableFrame) -> WitnessSpec:
    """Two directions on the first qubit, two triplets on the second whose
    normalized sums are orthogonal."""
    if phi.size != 3 or theta.size != 3:
        raise BadGeometry("W1 needs triplet frames on the second qubit")
    dot = float(np.dot(phi.sum_direction, theta.sum_direction))
    if abs(dot) > GEOMETRY_TOL:
        raise BadGeometry(f"triplet sum directions must be orthogonal, dot = {dot:.3e}")
    a1 = pauli_observable(a1_dir, "A1")
    a2 = pauli_observable(a2_dir, "A2")
    return WitnessSpec("W1", (a1, a2, phi, theta), BOUNDS["W1"], "lower")


def w2_spec(a_frame: ObservableFrame, b_frame: ObservableFrame) -> WitnessSpec:
    if a_frame.size != 2 or b_frame.size != 2:
        raise BadGeometry("W2 needs orthonormal doublets on both qubits")
    return WitnessSpec("W2", (a_frame, b_frame), BOUNDS["W2"], "lower")


def w3_spec(a_doublets, b_triplets) -> WitnessSpec:
    """Three doublets and three triplets; each side's normalized sums form
    an orthonormal set."""
    a_doublets = tuple(a_doublets)
    b_triplets = tuple(b_triplets)
    if len(a_doublets) != 3 or any(f.size != 2 for f in a_doublets):
        raise BadGeometry("W3 needs three doublet frames on the first qubit")
    if len(b_triplets) != 3 or any(f.size != 3 for f in b_triplets):
        raise BadGeometry("W3 needs three triplet frames on the second qubit")
    _require_orthonormal_sums(a_doublets)
    _require_orthonormal_sums(b_triplets)
    return WitnessSpec("W3", (a_doublets, b_triplets), BOUNDS["W3"], "lower")


def w4_spec(a_frame: ObservableFrame, b_frame: ObservableFrame) -> WitnessSpec:
    if a_frame.size != 3 or b_frame.size != 3:
        raise BadGeometry("W4 needs orthonormal triplets on both qubits")
    return WitnessSpec("W4", (a_frame, b_frame), BOUNDS["W4"], "lower")


def _require_orthonormal_sums(frames) -> None:
    sums = [f.sum_direction for f in frames]
    for i in range(len(sums)):
        for j in range(i + 1, len(sums)):
            dot = float(np.dot(sums[i], sums[j]))
            if abs(dot) > GEOMETRY_TOL:
                raise BadGeometry(
                    f"normalized sums must be orthonormal, dot({i},{j}) = {dot:.3e}"
                )


_X = np.array([1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])
_Z = np.array([0.0, 0.0, 1.0])
_DIAG = (np.array([1.0, 0.0, 1.0]) / math.sqrt(2.0), np.array([1.0, 0.0, -1.0]) / math.sqrt(2.0))


def default_spec(kind: str) -> WitnessSpec:
    """Canonical aligned geometry for each kind."""
    if kind == "W0":
        return chsh_spec_from_bloch(_X, _Z, _DIAG[0], _DIAG[1])
    if kind == "W1":
        return w1_spec(_X, _Z, triplet_with_sum(_X), triplet_with_sum(_Z))
    if kind == "W2":
        return w2_spec(make_frame([_X, _Y]), make_frame([_X, _Y]))
    if kind == "W3":
        return w3_spec(
            [doublet_with_sum(u) for u in (_X, _Y, _Z)],
            [triplet_with_sum(u) for u in (_X, _Y, _Z)],
        )
    if kind == "W4":
        return w4_spec(make_frame([_X, _Y, _Z]), make_frame([_X, _Y, _Z]))
    raise BadGeometry(f"unknown witness kind {kind!r}")


# ---------------------------------------------------------------------------
# correlation operators


def correlation_operator(spec: WitnessSpec) -> np.ndarray:
    """The operator whose expectation is compared against the bound."""
    if spec.kind == "W0":
        a1, a2, b1, b2 = spec.geometry
        return (
            kron(a1.matrix, b1.matrix)
            + kron(a1.matrix, b2.matrix)
            + kron(a2.matrix, b1.matrix)
            - kron(a2.matrix, b2.matrix)
        )
    if spec.kind == "W1":
        a1, a2, phi, theta = spec.geometry
        return kron(a1.matrix, pauli_observable(phi.sum_direction).matrix) + kron(
            a2.matrix, pauli_observable(theta.sum_direction).matrix
        )
    if spec.kind in ("W2", "W4"):
        a_frame, b_frame = spec.geometry
        acc = np.zeros((4, 4), dtype=complex)
        for va, vb in zip(a_frame.directions, b_frame.directions):
            acc = acc + kron(pauli_observable(va).matrix, pauli_observable(vb).matrix)
        return acc
    if spec.kind == "W3":
        a_doublets, b_triplets = spec.geometry
        acc = np.zeros((4, 4), dtype=complex)
        for fa, fb in zip(a_doublets, b_triplets):
            acc = acc + kron(
                pauli_observable(fa.sum_direction).matrix,
                pauli_observable(fb.sum_direction).matrix,
            )
        return acc
    raise BadGeometry(f"unknown witness kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# propositions and scheme sums


def chsh_proposition(a1=None, a2=None, b1=None, b2=None):
    """Four-disjunct proposition whose representative reproduces the CHSH
    operator: agreement of A1 with both B outcomes equal, or of A2 with the
    B outcomes split."""
    return Or((
        And((Literal("A1", +1), Literal("B1", +1), Literal("B2", +1))),
        And((Literal("A1", -1), Literal("B1", -1), Literal("B2", -1))),
        And((Literal("A2", +1), Literal("B1", +1), Literal("B2", -1))),
        And((Literal("A2", -1), Literal("B1", -1), Literal("B2", +1))),
    ))


def chsh_context(spec: WitnessSpec):
    a1, a2, b1, b2 = spec.geometry
    return make_context([[a1, a2], [b1, b2]])


def agreement_proposition(k: int):
    """Disjunction over all 2^k sign patterns of {A_i = s_i and F_i = s_i}."""
    if k not in (2, 3):
        raise BadFrames(f"agreement proposition defined for k in (2, 3), got {k}")
    disjuncts = []
    for bits in np.ndindex(*(2,) * k):
        signs = [+1 if b == 0 else -1 for b in bits]
        lits = [Literal(f"A{i + 1}", s) for i, s in enumerate(signs)]
        lits += [Literal(f"F{i + 1}", s) for i, s in enumerate(signs)]
        disjuncts.append(And(tuple(lits)))
    return Or(tuple(disjuncts))


def agreement_context(a_frame: ObservableFrame, b_frame: ObservableFrame):
    if a_frame.size != b_frame.size:
        raise BadFrames("agreement proposition needs equally sized frames")
    return make_context([a_frame.observables("A"), b_frame.observables("F")])


def _all_same_outcome_pp(frame: ObservableFrame, outcome: int) -> np.ndarray:
    obs = frame.observables()
    return symmetric_pseudo_projection([projector(o, outcome) for o in obs])


@dataclass(frozen=True)
class SchemeSum:
    operator: np.ndarray
    value: float | None


def _expect(rho, operator) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if m.shape[0] != operator.shape[0]:
        raise DimensionMismatch("state and operator dimensions differ")
    return float(np.real(np.trace(m @ operator)))


def scheme_sum_s1(a1_dir, a2_dir, phi: ObservableFrame, theta: ObservableFrame,
                  rho: DensityMatrix | None = None) -> SchemeSum:
    """Marginal sum of the four pseudo probabilities pairing each first-qubit
    outcome with the all-agree outcome of one second-qubit triplet."""
    spec = w1_spec(a1_dir, a2_dir, phi, theta)
    a1, a2, phi, theta = spec.geometry
    acc = np.zeros((4, 4), dtype=complex)
    for a_obs, frame in ((a1, phi), (a2, theta)):
        for s in (+1, -1):
            acc = acc + kron(projector(a_obs, s), _all_same_outcome_pp(frame, s))
    return SchemeSum(acc, None if rho is None else _expect(rho, acc))


def scheme_sum_s2(a_doublets, b_triplets, rho: DensityMatrix | None = None) -> SchemeSum:
    """Marginal sum over three doublet/triplet pairs of the two all-agree
    pseudo probabilities each."""
    spec = w3_spec(a_doublets, b_triplets)
    a_doublets, b_triplets = spec.geometry
    acc = np.zeros((4, 4), dtype=complex)
    for fa, fb in zip(a_doublets, b_triplets):
        for s in (+1, -1):
            acc = acc + kron(_all_same_outcome_pp(fa, s), _all_same_outcome_pp(fb, s))
    return SchemeSum(acc, None if rho is None else _expect(rho, acc))


def scheme_sum_s3(a_triplets, b_triplets, rho: DensityMatrix | None = None) -> SchemeSum:
    """Like scheme_sum_s2 with triplets on both sides; same bound as the
    agreement proposition for k = 3."""
    a_triplets = tuple(a_triplets)
    b_triplets = tuple(b_triplets)
    if len(a_triplets) != 3 or any(f.size != 3 for f in a_triplets):
        raise BadGeometry("need three triplet frames on the first qubit")
    if len(b_triplets) != 3 or any(f.size != 3 for f in b_triplets):
        raise BadGeometry("need three triplet frames on the second qubit")
    _require_orthonormal_sums(a_triplets)
    _require_orthonormal_sums(b_triplets)
    acc = np.zeros((4, 4), dtype=complex)
    for fa, fb in zip(a_triplets, b_triplets):
        for s in (+1, -1):
            acc = acc + kron(_all_same_outcome_pp(fa, s), _all_same_outcome_pp(fb, s))
    return SchemeSum(acc, None if rho is None else _expect(rho, acc))


def _scheme_sum_operator(spec: WitnessSpec) -> np.ndarray:
    """Pseudo-probability-side operator for the spec's kind."""
    if spec.kind == "W0":
        return compile_proposition(chsh_proposition(), chsh_context(spec)).operator
    if spec.kind == "W1":
        a1, a2, phi, theta = spec.geometry
        acc = np.zeros((4, 4), dtype=complex)
        for a_obs, frame in ((a1, phi), (a2, theta)):
            for s in (+1, -1):
                acc = acc + kron(projector(a_obs, s), _all_same_outcome_pp(frame, s))
        return acc
    if spec.kind == "W2":
        a_frame, b_frame = spec.geometry
        ctx = agreement_context(a_frame, b_frame)
        return compile_proposition(agreement_proposition(2), ctx).operator
    if spec.kind == "W3":
        a_doublets, b_triplets = spec.geometry
        acc = np.zeros((4, 4), dtype=complex)
        for fa, fb in zip(a_doublets, b_triplets):
            for s in (+1, -1):
                acc = acc + kron(_all_same_outcome_pp(fa, s), _all_same_outcome_pp(fb, s))
        return acc
    if spec.kind == "W4":
        a_frame, b_frame = spec.geometry
        a_triplets = [triplet_with_sum(v) for v in a_frame.directions]
        b_triplets = [triplet_with_sum(v) for v in b_frame.directions]
        return scheme_sum_s3(a_triplets, b_triplets).operator
    raise BadGeometry(f"unknown witness kind {spec.kind!r}")


_SCHEME_COEFF_KEY = {"W0": "W0", "W1": "S1", "W2": "W2", "W3": "S2", "W4": "S3"}


def evaluate(spec: WitnessSpec, rho: DensityMatrix, scheme_check: bool = True) -> WitnessReport:
    """Correlation value, bound comparison, and the pseudo-probability sum.

    With scheme_check the sum is rebuilt from actual pseudo projections and
    cross-checked against the correlation value through the operator
    identity; without it the sum is derived from the identity (bulk scans).
    """
    corr = correlation_operator(spec)
    value = _expect(rho, corr)
    if spec.direction == "absolute":
        detected = abs(value) > spec.bound + DETECT_TOL
    else:
        detected = value < spec.bound - DETECT_TOL
    a, b = IDENTITY_COEFFS[_SCHEME_COEFF_KEY[spec.kind]]
    if scheme_check:
        scheme_op = _scheme_sum_operator(spec)
        scheme_sum = _expect(rho, scheme_op)
        if abs(scheme_sum - (a + b * value)) > CROSS_CHECK_TOL:
            raise BadGeometry(
                f"internal identity violated for {spec.kind}: "
                f"{scheme_sum} vs {a} + {b}*{value}"
            )
    else:
        scheme_sum = a + b * value
    return WitnessReport(
        kind=spec.kind,
        value=value,
        bound=spec.bound,
        direction=spec.direction,
        detected=bool(detected),
        scheme_sum=scheme_sum,
        geometry=spec.geometry,
    )


def two_term_value(spec: WitnessSpec, rho: DensityMatrix) -> float:
    """CHSH in the rotated two-term form with bound sqrt(2).

    Requires qubit sides with Tr(A1 A2) = Tr(B1 B2) = 0; the merged
    observables (B1 +- B2)/sqrt(2) are then dichotomic and the value is
    1/sqrt(2) times the four-term one.
    """
    if spec.kind != "W0":
        raise BadGeometry("two-term form only applies to W0")
    a1, a2, b1, b2 = spec.geometry
    for x, y in ((a1, a2), (b1, b2)):
        if abs(np.trace(x.matrix @ y.matrix)) > GEOMETRY_TOL:
            raise BadGeometry("two-term form needs Tr(A1 A2) = Tr(B1 B2) = 0")
    b_plus = (b1.matrix + b2.matrix) / math.sqrt(2.0)
    b_minus = (b1.matrix - b2.matrix) / math.sqrt(2.0)
    op = kron(a1.matrix, b_plus) + kron(a2.matrix, b_minus)
    return _expect(rho, op)


# ---------------------------------------------------------------------------
# operator-identity verification


def _random_frame(rng: np.random.Generator, k: int) -> ObservableFrame:
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    cols = [q[:, i] * (1.0 if rng.random() < 0.5 else -1.0) for i in range(k)]
    return make_frame(cols)


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / float(np.linalg.norm(v))


def random_spec(kind: str, seed: int) -> WitnessSpec:
    """Random valid geometry for a kind; deterministic per seed."""
    rng = np.random.default_rng(seed)
    if kind == "W0":
        return chsh_spec_from_bloch(
            _random_unit(rng), _random_unit(rng), _random_unit(rng), _random_unit(rng)
        )
    if kind == "W1":
        sums = _random_frame(rng, 2)
        return w1_spec(
            _random_unit(rng),
            _random_unit(rng),
            triplet_with_sum(sums.directions[0]),
            triplet_with_sum(sums.directions[1]),
        )
    if kind == "W2":
        return w2_spec(_random_frame(rng, 2), _random_frame(rng, 2))
    if kind == "W3":
        a_sums = _random_frame(rng, 3)
        b_sums = _random_frame(rng, 3)
        return w3_spec(
            [doublet_with_sum(u) for u in a_sums.directions],
            [triplet_with_sum(u) for u in b_sums.directions],
        )
    if kind == "W4":
        return w4_spec(_random_frame(rng, 3), _random_frame(rng, 3))
    raise BadGeometry(f"unknown witness kind {kind!r}")


def random_chsh_spec_any_dim(seed: int) -> WitnessSpec:
    """W0 geometry over random dichotomic observables in dims 2..4 per side."""
    rng = np.random.default_rng(seed)
    dim_a = int(rng.integers(2, 5))
    dim_b = int(rng.integers(2, 5))
    def pick(dim, offset):
        return random_dichotomic(dim, int(rng.integers(1, dim)), seed + offset)
    return chsh_spec(pick(dim_a, 1), pick(dim_a, 2), pick(dim_b, 3), pick(dim_b, 4))


def identity_residual(key: str, seed: int, corrupt: bool = False) -> float:
    """Max deviation between the pseudo-probability operator and
    a*identity + b*correlation for one random geometry.

    corrupt=True perturbs the b coefficient; used as a negative control.
    W0 alternates between qubit pairs and higher-dimensional observables.
    """
    rng = np.random.default_rng(seed)
    a, b = IDENTITY_COEFFS[key]
    if corrupt:
        b *= 1.001
    if key == "W0":
        if seed % 2 == 1:
            spec = random_chsh_spec_any_dim(seed)
        else:
            spec = random_spec("W0", seed)
        lhs = _scheme_sum_operator(spec)
        corr = correlation_operator(spec)
        dim = lhs.shape[0]
        return float(np.max(np.abs(lhs - (a * identity(dim) + b * corr))))
    if key in ("W2", "W4"):
        # full agreement disjunction over all sign patterns of the two frames
        spec = random_spec(key, seed)
        a_frame, b_frame = spec.geometry
        ctx = agreement_context(a_frame, b_frame)
        lhs = compile_proposition(agreement_proposition(a_frame.size), ctx).operator
        corr = correlation_operator(spec)
        return float(np.max(np.abs(lhs - (a * identity(4) + b * corr))))
    if key == "S1":
        spec = random_spec("W1", seed)
        lhs = _scheme_sum_operator(spec)
        corr = correlation_operator(spec)
        return float(np.max(np.abs(lhs - (a * identity(4) + b * corr))))
    if key == "S2":
        spec = random_spec("W3", seed)
        lhs = _scheme_sum_operator(spec)
        corr = correlation_operator(spec)
        return float(np.max(np.abs(lhs - (a * identity(4) + b * corr))))
    if key == "S3":
        sums_a = _random_frame(rng, 3)
        sums_b = _random_frame(rng, 3)
        a_triplets = [triplet_with_sum(u) for u in sums_a.directions]
        b_triplets = [triplet_with_sum(u) for u in sums_b.directions]
        lhs = scheme_sum_s3(a_triplets, b_triplets).operator
        corr = np.zeros((4, 4), dtype=complex)
        for fa, fb in zip(a_triplets, b_triplets):
            corr = corr + kron(
                pauli_observable(fa.sum_direction).matrix,
                pauli_observable(fb.sum_direction).matrix,
            )
        return float(np.max(np.abs(lhs - (a * identity(4) + b * corr))))
    raise BadGeometry(f"unknown identity key {key!r}")


def identity_residuals(seed: int, trials: int, corrupt: str | None = None) -> dict[str, float]:
    """Max residual per identity over `trials` random geometries."""
    out: dict[str, float] = {}
    for key in IDENTITY_COEFFS:
        worst = 0.0
        for t in range(trials):
            worst = max(
                worst,
                identity_residual(key, seed + 1000 * t, corrupt=(corrupt == key)),
            )
        out[key] = worst
    return out
