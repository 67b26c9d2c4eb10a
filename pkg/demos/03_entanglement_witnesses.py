"""Four entanglement witnesses along the isotropic Werner line.

Each witness is the expectation of a fixed correlation combination; the
state is flagged once the value drops below the witness bound.  The same
numbers come out of summing actual pseudo probabilities, which evaluate()
cross-checks on every call.
"""

from pseudoprob import BOUNDS, KINDS, default_spec, evaluate, ppt_is_entangled, werner_local

print("alpha   " + "".join(f"{kind:>10}" for kind in KINDS) + "   detected        PPT")
for alpha in (-1.0, -0.8, -0.6, -0.5, -0.45, -0.4, -0.35, -0.3, 0.0):
    rho = werner_local(alpha, 0.0)
    reports = [evaluate(default_spec(kind), rho) for kind in KINDS]
    hits = ",".join(r.kind for r in reports if r.detected) or "-"
    ppt = "entangled" if ppt_is_entangled(rho) else "separable"
    row = "".join(f"{r.value:>10.4f}" for r in reports)
    print(f"{alpha:5.2f} {row}   {hits:<14} {ppt}")

print("\nbounds: " + ", ".join(f"{kind} {BOUNDS[kind]:+.4f}" for kind in KINDS))
print("W0 uses |value| > 2; the others flag value < bound.")
