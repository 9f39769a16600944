"""Oblique projectors and how they move when the range is tilted.

A splitting R^n = E* (+) R determines the projector P onto E* along R.  Any
other complement E1 of R is the graph {x + alpha x} of a unique map
alpha: E* -> R, and the projector onto E1 along R is simply P + alpha P.
"""

import numpy as np

from opstrata import GraphOperator, Subspace, graph_operator, graph_subspace, oblique_projector, projector_update

np.set_printoptions(precision=4, suppress=True)

Estar = Subspace.coordinate(2, 0)
R = Subspace.span(np.array([[1.0], [1.0]]))
P = oblique_projector(Estar, R)
print("projector onto span(e1) along span(e1 + e2):")
print(P.matrix)
print("idempotency defect:", P.idempotency_defect())

# tilt the range: alpha sends e1 to half the unit vector spanning R
alpha = GraphOperator(Estar, R, np.array([[0.5]]))
E1 = graph_subspace(alpha)
print("\nnew range E1 spanned by", E1.basis.ravel())
print("P + alpha P:")
print(projector_update(P, alpha).matrix)
print("direct construction:")
print(oblique_projector(E1, R).matrix)

# and back: recover alpha from E1
print("\nrecovered alpha coefficient:", graph_operator(E1, Estar, R).coeffs.ravel())

# larger random check
rng = np.random.default_rng(0)
n, k = 6, 2
Estar = Subspace(np.linalg.qr(rng.standard_normal((n, k)))[0])
R = Subspace(np.linalg.qr(rng.standard_normal((n, n - k)))[0])
alpha = GraphOperator(Estar, R, rng.standard_normal((n - k, k)))
diff = projector_update(oblique_projector(Estar, R), alpha).matrix - oblique_projector(graph_subspace(alpha), R).matrix
print(f"\nrandom 6-dim instance, update vs direct: {np.linalg.norm(diff):.2e}")
