"""The Bell-CHSH condition as a pseudo-probability statement.

The four-way disjunction pairing each first-wing setting with a sign
pattern of the second wing compiles to (1/2) 1 + (1/4) C, so its pseudo
probability dips below zero exactly when the CHSH combination passes 2.
"""

import math

import numpy as np

from pseudoprob import (
    chsh_spec_from_bloch,
    classicality_check,
    evaluate,
    make_context,
    parse_proposition,
    pauli_observable,
    product_state,
    singlet,
    two_term_value,
)

r = 1.0 / math.sqrt(2.0)
X = np.array([1.0, 0.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])
B1 = (X + Z) * r
B2 = (X - Z) * r

text = ("(A1=+ & B1=+ & B2=+) | (A1=- & B1=- & B2=-) | "
        "(A2=+ & B1=+ & B2=-) | (A2=- & B1=- & B2=+)")
prop = parse_proposition(text)
ctx = make_context([
    [pauli_observable(X, "A1"), pauli_observable(Z, "A2")],
    [pauli_observable(B1, "B1"), pauli_observable(B2, "B2")],
])

spec = chsh_spec_from_bloch(X, Z, B1, B2)

for name, rho in (("singlet", singlet()),
                  ("product x(x)x", product_state(X, X))):
    rep = evaluate(spec, rho)
    check = classicality_check(rho, prop, ctx)
    print(f"{name}:")
    print(f"  CHSH value        = {rep.value:+.6f}  (bound {rep.bound}, "
          f"detected={rep.detected})")
    print(f"  disjunction P     = {check.value:+.6f}  "
          f"(classical={check.classical})")
    print(f"  identity check    : 1/2 + value/4 = {0.5 + rep.value / 4:+.6f}")
    # rotated two-setting form carries the sqrt(2) bound instead
    print(f"  two-term form     = {two_term_value(spec, rho):+.6f}  "
          f"(bound sqrt(2) = {math.sqrt(2):.6f})")
    print()
