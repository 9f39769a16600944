"""A single subspace complementing two others of equal dimension.

The construction splits off the shared part D = E1 & E2, pairs the remaining
directions of E1 and E2 through principal vectors, and adds the orthogonal
complement of E1 + E2.  Nearly touching inputs still get a well-conditioned
answer because each paired direction u - v sits at least 45 degrees from both.
"""

import numpy as np

from opstrata import Subspace, common_complement_parts, complementarity

np.set_printoptions(precision=4, suppress=True)


def show(e1, e2, label):
    parts = common_complement_parts(e1, e2)
    R = parts.complement
    print(f"{label}:")
    print(f"  dim E1 & E2 = {parts.intersection.dim}, dim E1 + E2 = {parts.sum_dim}, dim R = {R.dim}")
    print(f"  sigma_min [E1 | R] = {complementarity(e1, R):.3e}, [E2 | R] = {complementarity(e2, R):.3e}")
    return R


R = show(Subspace.coordinate(2, 0), Subspace.coordinate(2, 1), "two axes in R^2")
print("  R spanned by", R.basis.ravel())

show(Subspace.coordinate(4, 0, 1), Subspace.coordinate(4, 1, 2), "overlapping planes in R^4")

eps = 1e-6
e2 = Subspace.span(np.array([[1.0], [eps], [0.0]]))
show(Subspace.coordinate(3, 0), e2, f"lines {eps:g} radians apart in R^3")

rng = np.random.default_rng(1)
worst = np.inf
for _ in range(200):
    n = int(rng.integers(1, 13))
    k = int(rng.integers(0, n + 1))
    a = Subspace(np.linalg.qr(rng.standard_normal((n, k)))[0]) if k else Subspace.zero(n)
    b = Subspace(np.linalg.qr(rng.standard_normal((n, k)))[0]) if k else Subspace.zero(n)
    R = common_complement_parts(a, b).complement
    worst = min(worst, complementarity(a, R), complementarity(b, R))
print(f"\n200 random pairs, worst certificate {worst:.3f}")
