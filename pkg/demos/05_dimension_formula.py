"""Counting the dimension of the rank-k matrices by brute force.

At a rank-k point X the tangent directions are the T with T N(X) in R(X).
Writing that condition as a linear system on the entries of T and taking
its nullity gives the dimension without any formula; it matches (m+n-k)k
for every shape up to 10 x 10.
"""

import time

from opstrata import random_stratum_point, stratification_report, stratum_dim, tangent_space_dim

for m, n in [(2, 2), (3, 2), (4, 3)]:
    dims = [d for _, d, _ in stratification_report(m, n)]
    print(f"maps R^{m} -> R^{n}: stratum dimensions by rank {dims}")

start = time.perf_counter()
checked = mismatches = 0
for m in range(1, 11):
    for n in range(1, 11):
        for k in range(min(m, n) + 1):
            r = tangent_space_dim(random_stratum_point(m, n, k, seed=m * 100 + n * 10 + k))
            checked += 1
            mismatches += r.tangent_dim != stratum_dim(m, n, k)
print(f"\n{checked} (m, n, k) triples, {mismatches} mismatches, {time.perf_counter() - start:.2f}s")
