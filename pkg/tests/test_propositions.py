import math

import numpy as np
import pytest

from pseudoprob.errors import SubsystemMismatch, UnknownLabel, UnsupportedShape
from pseudoprob.observables import pauli_observable, projector
from pseudoprob.propositions import (
    And,
    Literal,
    Not,
    Or,
    classicality_check,
    compile_proposition,
    make_context,
    parse_proposition,
    pseudo_probability,
)
from pseudoprob.states import maximally_mixed, singlet

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def two_qubit_context():
    return make_context([
        [pauli_observable(X, "A1"), pauli_observable(Z, "A2")],
        [pauli_observable(X, "B1"), pauli_observable(Z, "B2")],
    ])


# ---------------------------------------------------------------------------
# tree construction


def test_and_flattens_nested_children():
    p = And((Literal("A1", 1), And((Literal("A2", -1), Not(Literal("B1", 1))))))
    labels = [(lit.label, lit.outcome) for lit in p.children]
    assert labels == [("A1", 1), ("A2", -1), ("B1", -1)]


def test_and_rejects_disjunction_child():
    with pytest.raises(UnsupportedShape):
        And((Literal("A1", 1), Or((Literal("B1", 1), Literal("B1", -1)))))


def test_or_needs_two_children():
    with pytest.raises(UnsupportedShape):
        Or((Literal("A1", 1),))


def test_literal_outcome_validation():
    with pytest.raises(UnsupportedShape):
        Literal("A1", 0)


# ---------------------------------------------------------------------------
# parsing


def test_parse_single_literal():
    p = parse_proposition("A1=+")
    assert isinstance(p, Literal)
    assert (p.label, p.outcome) == ("A1", 1)


def test_parse_precedence():
    p = parse_proposition("A1=+ & B1=- | A2=+ & B2=+")
    assert isinstance(p, Or)
    assert all(isinstance(c, And) for c in p.children)


def test_parse_negation_and_parens():
    p = parse_proposition("!(A1=+ & B1=+)")
    assert isinstance(p, Not)
    q = parse_proposition("!A1=+")
    assert isinstance(q, Literal)
    assert q.outcome == -1


def test_parse_rejects_garbage():
    with pytest.raises(UnsupportedShape):
        parse_proposition("A1=+ @ B1=-")
    with pytest.raises(UnsupportedShape):
        parse_proposition("A1=+ B1=-")


# ---------------------------------------------------------------------------
# contexts


def test_context_duplicate_label():
    with pytest.raises(SubsystemMismatch):
        make_context([
            [pauli_observable(X, "A1")],
            [pauli_observable(Z, "A1")],
        ])


def test_context_unknown_label():
    ctx = two_qubit_context()
    with pytest.raises(UnknownLabel):
        compile_proposition(Literal("C9", 1), ctx)


# ---------------------------------------------------------------------------
# compilation


def test_compile_literal_embeds_projector():
    ctx = two_qubit_context()
    out = compile_proposition(Literal("B2", -1), ctx)
    oracle = np.kron(np.eye(2), projector(pauli_observable(Z), -1))
    assert np.max(np.abs(out.operator - oracle)) < 1e-14
    assert out.rules == ("literal",)


def test_compile_cross_subsystem_conjunction():
    ctx = two_qubit_context()
    out = compile_proposition(parse_proposition("A1=+ & B2=-"), ctx)
    oracle = np.kron(projector(pauli_observable(X), +1),
                     projector(pauli_observable(Z), -1))
    assert np.max(np.abs(out.operator - oracle)) < 1e-14


def test_compile_same_subsystem_conjunction_is_symmetrized():
    ctx = two_qubit_context()
    out = compile_proposition(parse_proposition("A1=+ & A2=+"), ctx)
    p1 = projector(pauli_observable(X), +1)
    p2 = projector(pauli_observable(Z), +1)
    oracle = np.kron((p1 @ p2 + p2 @ p1) / 2, np.eye(2))
    assert np.max(np.abs(out.operator - oracle)) < 1e-14
    lo = float(np.linalg.eigvalsh(out.operator)[0])
    assert lo == pytest.approx((1.0 - math.sqrt(2.0)) / 4.0, abs=1e-13)


def test_compile_negation_is_complement():
    ctx = two_qubit_context()
    inner = parse_proposition("A1=+ & B1=+")
    out = compile_proposition(Not(inner), ctx)
    oracle = np.eye(4) - compile_proposition(inner, ctx).operator
    assert np.max(np.abs(out.operator - oracle)) < 1e-14


def test_compile_disjoint_or_adds_terms():
    ctx = two_qubit_context()
    p = parse_proposition("(A1=+ & B1=+) | (A1=- & B1=+)")
    out = compile_proposition(p, ctx)
    a = compile_proposition(parse_proposition("A1=+ & B1=+"), ctx).operator
    b = compile_proposition(parse_proposition("A1=- & B1=+"), ctx).operator
    assert np.max(np.abs(out.operator - (a + b))) < 1e-14
    assert any(rule.startswith("or:disjoint-sum") for rule in out.rules)


def test_compile_overlapping_pair_uses_binary_rule():
    ctx = two_qubit_context()
    p = parse_proposition("A1=+ | B1=+")
    out = compile_proposition(p, ctx)
    pa = np.kron(projector(pauli_observable(X), +1), np.eye(2))
    pb = np.kron(np.eye(2), projector(pauli_observable(X), +1))
    joint = compile_proposition(parse_proposition("A1=+ & B1=+"), ctx).operator
    oracle = pa + pb - joint
    assert np.max(np.abs(out.operator - oracle)) < 1e-14
    assert "or:binary-overlap" in out.rules
    assert np.real(np.trace(out.operator)) == pytest.approx(3.0)


def test_compile_rejects_three_overlapping_disjuncts():
    ctx = two_qubit_context()
    p = parse_proposition("A1=+ | B1=+ | A2=+")
    with pytest.raises(UnsupportedShape):
        compile_proposition(p, ctx)


# ---------------------------------------------------------------------------
# pseudo probabilities and classicality


def test_exclusive_exhaustive_disjunction_has_unit_probability():
    ctx = two_qubit_context()
    p = parse_proposition("(A1=+ & B1=+) | (A1=+ & B1=-) | "
                          "(A1=- & B1=+) | (A1=- & B1=-)")
    rho = maximally_mixed()
    assert pseudo_probability(rho, p, ctx) == pytest.approx(1.0, abs=1e-12)


def test_singlet_equal_axis_agreement_is_zero():
    ctx = make_context([
        [pauli_observable(Z, "A1")],
        [pauli_observable(Z, "B1")],
    ])
    p = parse_proposition("(A1=+ & B1=+) | (A1=- & B1=-)")
    result = classicality_check(singlet(), p, ctx)
    assert result.value == pytest.approx(0.0, abs=1e-12)
    assert result.classical


def test_nonclassical_value_flags_state():
    # joint x-and-z proposition on the state anti-aligned with x + z
    ctx = make_context([
        [pauli_observable(X, "A1"), pauli_observable(Z, "A2")],
    ])
    n = (X + Z) / math.sqrt(2.0)
    sigma_n = np.array([[n[2], n[0]], [n[0], -n[2]]])
    rho = (np.eye(2) - sigma_n) / 2
    result = classicality_check(rho, parse_proposition("A1=+ & A2=+"), ctx)
    assert result.value == pytest.approx((1.0 - math.sqrt(2.0)) / 4.0, abs=1e-13)
    assert not result.classical
