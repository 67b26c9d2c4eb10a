"""Witness detection regions inside the Bell-diagonal tetrahedron.

For states with diagonal correlation tensor the four witnesses reduce to
polytope membership: a point is detected when it leaves the undetected
polytope of that witness.  The slice at t3 = 0.5 shows that the doublet
and triplet witnesses each see points the other misses.
"""

from pseudoprob import CorrelationPoint, classify, slice_scan, werner_thresholds

for t in [(0.0, 0.0, 0.0), (-1.0, -1.0, -1.0), (-0.8, 0.1, 0.1),
          (-0.9, 0.6, 0.5), (1.0, 1.0, 1.0)]:
    c = classify(CorrelationPoint(*t))
    if not c.physical:
        print(f"{t}: unphysical")
        continue
    hits = ", ".join(sorted(c.detected_by)) or "none"
    print(f"{t}: detected by {hits}")

scan = slice_scan(0.5, step=0.05)
print("\nslice t3 = 0.5, step 0.05:")
for key, count in scan.counts.items():
    print(f"  {key:<11} {count}")

print("\ndetection onset along the Werner line (alpha below which each fires):")
for kind, alpha in werner_thresholds(precision=1e-9).items():
    print(f"  {kind}: {alpha:+.6f}")
