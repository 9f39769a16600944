"""Walking between two operators through prescribed kernels and ranges.

Given intermediate kernels N_1..N_a and ranges F_1..F_b, every adjacent pair
gets a common complement as witness.  The path then changes the kernel one
hop at a time with the range held fixed, changes the range hop by hop with
the kernel held fixed, and finishes with the invertible bridge.
"""

import numpy as np

from opstrata import (
    StratumSpec,
    build_chain,
    certify,
    column_space,
    connect_equiv_class,
    largest_angle,
    null_space,
    random_stratum_point,
    random_subspace,
)

rng = np.random.default_rng(3)
T0 = random_stratum_point(4, 5, 2, seed=1)
Ts = random_stratum_point(4, 5, 2, seed=2)
kernel_hops = [random_subspace(5, 3, rng) for _ in range(2)]
range_hops = [random_subspace(4, 2, rng) for _ in range(2)]

chain = build_chain(T0, Ts, kernel_hops, range_hops)
path = connect_equiv_class(T0, Ts, chain)
print(f"{len(path)} segments")

for i, seg in enumerate(path.segments[:4]):
    mats = seg.sample(np.linspace(0, 1, 50))
    if i < 2:
        drift = max(largest_angle(column_space(M), column_space(T0)) for M in mats)
        print(f"  kernel hop {i}: range drift {drift:.1e}")
    else:
        drift = max(largest_angle(null_space(M), kernel_hops[-1]) for M in mats)
        print(f"  range hop {i - 2}: kernel drift {drift:.1e}")

cert = certify(path, StratumSpec.rank_stratum(2, T0.shape))
print("certificate:", cert.verdict)

back = connect_equiv_class(Ts, T0, chain.reversed()).reversed()
print("reversed chain, read backwards:", certify(back, StratumSpec.rank_stratum(2, T0.shape)).verdict)

try:
    build_chain(T0, Ts, [random_subspace(5, 2, rng)])
except Exception as exc:
    print(f"\nbad hop: {type(exc).__name__}: {exc}")
