"""Joint pseudo probabilities for incompatible measurements.

Builds the outcome table for x and z readings on a single qubit, shows
that every table sums to one while individual entries may leave [0, 1],
and checks that marginalizing one observable reproduces the smaller table.
"""

import numpy as np

from pseudoprob import (
    bloch_state,
    build_scheme,
    marginalize,
    maximally_mixed,
    pauli_observable,
)

X = np.array([1.0, 0.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])

scheme = build_scheme([[pauli_observable(X, "A1"), pauli_observable(Z, "A2")]])
print("scheme over A1 = x, A2 = z")
print("sum-to-identity residual:", scheme.sum_residual())

# the -(x+z)/sqrt(2) state pushes the (+,+) entry negative
n = (X + Z) / np.sqrt(2.0)
state = bloch_state(-n)
probs = scheme.pseudo_probabilities(state)
print("\nstate anti-aligned with x+z:")
for key, p in sorted(probs.items()):
    tag = "  <-- negative" if p < 0 else ""
    print(f"  P({key}) = {p:+.6f}{tag}")
print("total:", sum(probs.values()))

mixed = maximally_mixed((2,))
print("\nmaximally mixed qubit:")
for key, p in sorted(scheme.pseudo_probabilities(mixed).items()):
    print(f"  P({key}) = {p:+.6f}")

# dropping A2 recovers the plain Born probabilities of A1
reduced = marginalize(scheme, "A2")
print("\nafter summing out A2:")
for key, pp in sorted(reduced.table.items()):
    value = float(np.real(np.trace(state.matrix @ pp.operator)))
    print(f"  P(A1={key[0]}) = {value:+.6f}")
