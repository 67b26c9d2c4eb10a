"""Classical logical propositions over dichotomic observables and their
compilation to representative operators.

Only the two disjunction rules with a defined meaning are implemented: a sum
over classically disjoint conjunctions, and the binary rule
compile(a or b) = compile(a) + compile(b) - compile(a and b).  Everything
else is rejected rather than guessed at.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    SubsystemMismatch,
    UnknownLabel,
    UnsupportedShape,
)
from .linalg import as_operator, identity
from .observables import DichotomicObservable, projector
from .pseudoprojection import symmetric_pseudo_projection

CLASSICAL_TOL = 1e-12


@dataclass(frozen=True)
class Literal:
    """One observable pinned to one outcome."""

    label: str
    outcome: int

    def __post_init__(self):
        if self.outcome not in (+1, -1):
            raise UnsupportedShape(f"literal outcome must be +-1, got {self.outcome}")

    def negate(self) -> "Literal":
        return Literal(self.label, -self.outcome)


@dataclass(frozen=True)
class And:
    """Conjunction; children normalize to a flat tuple of literals."""

    children: tuple

    def __post_init__(self):
        flat: list[Literal] = []
        stack = list(self.children)
        while stack:
            node = stack.pop(0)
            if isinstance(node, Literal):
                flat.append(node)
            elif isinstance(node, And):
                stack = list(node.children) + stack
            elif isinstance(node, Not) and isinstance(node.child, Literal):
                flat.append(node.child.negate())
            else:
                raise UnsupportedShape(
                    f"conjunction children must be literals, got {type(node).__name__}"
                )
        if not flat:
            raise UnsupportedShape("empty conjunction")
        object.__setattr__(self, "children", tuple(flat))


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise UnsupportedShape("disjunction needs at least two children")
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Not:
    child: object


Proposition = Literal | And | Or | Not


@dataclass(frozen=True)
class ObservableContext:
    """Observables grouped by subsystem; grouping is declared, not inferred
    from label spelling."""

    groups: tuple[tuple[DichotomicObservable, ...], ...]

    def __post_init__(self):
        seen: dict[str, int] = {}
        for gi, group in enumerate(self.groups):
            for obs in group:
                if obs.label in seen:
                    raise SubsystemMismatch(f"label {obs.label!r} declared twice")
                seen[obs.label] = gi
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g[0].dim for g in self.groups)

    @property
    def total_dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def find(self, label: str) -> tuple[int, DichotomicObservable]:
        for gi, group in enumerate(self.groups):
            for obs in group:
                if obs.label == label:
                    return gi, obs
        raise UnknownLabel(f"no observable labeled {label!r}")


def make_context(groups) -> ObservableContext:
    return ObservableContext(tuple(tuple(g) for g in groups))


@dataclass(frozen=True)
class CompiledProposition:
    operator: np.ndarray
    proposition: object
    rules: tuple[str, ...]


def _as_literals(p) -> tuple[Literal, ...] | None:
    """View p as a conjunction of literals, or None if it is not one."""
    if isinstance(p, Literal):
        return (p,)
    if isinstance(p, And):
        return p.children
    if isinstance(p, Not) and isinstance(p.child, Literal):
        return (p.child.negate(),)
    return None


def _disjoint(a: tuple[Literal, ...], b: tuple[Literal, ...]) -> bool:
    """Classically exclusive: some shared observable is pinned to opposite
    outcomes."""
    outcomes = {lit.label: lit.outcome for lit in a}
    return any(lit.label in outcomes and outcomes[lit.label] != lit.outcome for lit in b)


def _compile_conjunction(lits: tuple[Literal, ...], ctx: ObservableContext) -> np.ndarray:
    by_group: dict[int, list[np.ndarray]] = {}
    for lit in lits:
        gi, obs = ctx.find(lit.label)
        by_group.setdefault(gi, []).append(projector(obs, lit.outcome))
    factors = []
    for gi, dim in enumerate(ctx.dims):
        if gi in by_group:
            factors.append(symmetric_pseudo_projection(by_group[gi]))
        else:
            factors.append(identity(dim))
    op = factors[0]
    for f in factors[1:]:
        op = np.kron(op, f)
    return op


def compile_proposition(p, ctx: ObservableContext) -> CompiledProposition:
    """Map a proposition to its representative operator.

    Literal -> eigenprojector; conjunction -> per-subsystem symmetric pseudo
    projection, tensored; negation -> identity minus the child; disjunction
    -> disjoint sum when the disjuncts exclude each other pairwise, the
    binary add-and-subtract-the-joint rule otherwise.
    """
    rules: list[str] = []
    op = _compile_node(p, ctx, rules)
    return CompiledProposition(operator=op, proposition=p, rules=tuple(rules))


def _compile_node(p, ctx: ObservableContext, rules: list[str]) -> np.ndarray:
    lits = _as_literals(p)
    if lits is not None:
        rules.append("conjunction" if len(lits) > 1 else "literal")
        return _compile_conjunction(lits, ctx)
    if isinstance(p, Not):
        rules.append("negation")
        return identity(ctx.total_dim) - _compile_node(p.child, ctx, rules)
    if isinstance(p, Or):
        as_conj = [_as_literals(c) for c in p.children]
        if all(c is not None for c in as_conj):
            pairs_disjoint = all(
                _disjoint(as_conj[i], as_conj[j])
                for i in range(len(as_conj))
                for j in range(i + 1, len(as_conj))
            )
            if pairs_disjoint:
                rules.append(f"or:disjoint-sum[{len(as_conj)}]")
                acc = np.zeros((ctx.total_dim, ctx.total_dim), dtype=complex)
                for c in as_conj:
                    acc = acc + _compile_conjunction(c, ctx)
                return acc
        if len(p.children) == 2 and all(c is not None for c in as_conj):
            rules.append("or:binary-overlap")
            a, b = as_conj
            joint = _compile_conjunction(And((*a, *b)).children, ctx)
            return (
                _compile_conjunction(a, ctx)
                + _compile_conjunction(b, ctx)
                - joint
            )
        raise UnsupportedShape(
            "disjunction must be pairwise exclusive conjunctions, or exactly "
            "two overlapping conjunctions"
        )
    raise UnsupportedShape(f"cannot compile node of type {type(p).__name__}")


def _state_matrix(rho, ctx: ObservableContext) -> np.ndarray:
    m = as_operator(getattr(rho, "matrix", rho))
    if m.shape[0] != ctx.total_dim:
        raise DimensionMismatch(
            f"state dim {m.shape[0]} does not match context dim {ctx.total_dim}"
        )
    return m


def pseudo_probability(rho, p, ctx: ObservableContext) -> float:
    """Tr(rho x representative).  May fall outside [0, 1]."""
    compiled = compile_proposition(p, ctx)
    m = _state_matrix(rho, ctx)
    return float(np.real(np.trace(m @ compiled.operator)))


@dataclass(frozen=True)
class ClassicalityResult:
    value: float
    classical: bool


def classicality_check(rho, p, ctx: ObservableContext) -> ClassicalityResult:
    """A state is classical with respect to p when the pseudo probability
    stays inside [0, 1] (up to 1e-12 slack)."""
    value = pseudo_probability(rho, p, ctx)
    classical = -CLASSICAL_TOL <= value <= 1.0 + CLASSICAL_TOL
    return ClassicalityResult(value=value, classical=classical)


# ---------------------------------------------------------------------------
# text syntax:  (A1=+ & B1=+ & B2=-) | (A1=- & B1=- & B2=-)
# precedence: ! > & > | ; labels are [A-Za-z_][A-Za-z0-9_]*

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*=[+-]|[()&|!])")


def parse_proposition(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise UnsupportedShape(f"cannot tokenize proposition at: {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    node, rest = _parse_or(tokens, 0)
    if rest != len(tokens):
        raise UnsupportedShape(f"trailing tokens in proposition: {tokens[rest:]}")
    return node


def _parse_or(tokens, i):
    node, i = _parse_and(tokens, i)
    children = [node]
    while i < len(tokens) and tokens[i] == "|":
        node, i = _parse_and(tokens, i + 1)
        children.append(node)
    return (Or(tuple(children)) if len(children) > 1 else children[0]), i


def _parse_and(tokens, i):
    node, i = _parse_factor(tokens, i)
    children = [node]
    while i < len(tokens) and tokens[i] == "&":
        node, i = _parse_factor(tokens, i + 1)
        children.append(node)
    return (And(tuple(children)) if len(children) > 1 else children[0]), i


def _parse_factor(tokens, i):
    if i >= len(tokens):
        raise UnsupportedShape("proposition ended unexpectedly")
    tok = tokens[i]
    if tok == "!":
        node, i = _parse_factor(tokens, i + 1)
        if isinstance(node, Literal):
            return node.negate(), i
        return Not(node), i
    if tok == "(":
        node, i = _parse_or(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != ")":
            raise UnsupportedShape("unbalanced parenthesis in proposition")
        return node, i + 1
    if "=" in tok:
        label, sign = tok.split("=")
        return Literal(label, +1 if sign == "+" else -1), i + 1
    raise UnsupportedShape(f"unexpected token {tok!r}")
