"""Why the straight line from T to -T fails, and a rotation that works.

For the projector P onto span(e1) along span(e2), the straight family
(1 - 2 lam) P + (1 - lam) alpha P passes through alpha P / 2 at lam = 1/2,
whose range has collapsed into span(e2).  Rotating by pi through a spare
direction orthogonal to the range keeps the rank constant instead.
"""

import numpy as np

from opstrata import (
    OperatorPath,
    StratumSpec,
    canonical_straight_line_flip,
    certify,
    numerical_rank,
    seg_sign_flip,
)

np.set_printoptions(precision=3, suppress=True)
spec = StratumSpec.rank_stratum(1, (2, 2))

line = canonical_straight_line_flip()
print("straight line at lam = 0, 1/2, 1:")
for lam in (0.0, 0.5, 1.0):
    print(f"  lam={lam}:", line(lam).tolist())
cert = certify(OperatorPath((line,)), spec)
print("certificate:", cert.verdict, "|", cert.first_failure)

T = np.diag([1.0, 0.0])
flip = seg_sign_flip(T)
print("\nrotation flip from", flip.start().tolist(), "to", flip.end().tolist())
print("ranks:", sorted({numerical_rank(M).rank for M in flip.sample(np.linspace(0, 1, 101))}))
print("certificate:", certify(OperatorPath((flip,)), spec).verdict)

try:
    seg_sign_flip(np.eye(2))
except Exception as exc:
    print(f"\nfull-rank square input: {type(exc).__name__}: {exc}")
