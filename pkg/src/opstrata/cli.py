"""Command-line interface.

Exit codes: 0 success (or certificate pass), 1 certificate fail, 2 invalid
input, 3 infeasible request (for example a disconnected stratum).
Diagnostics go to standard error; results go to standard output or files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .certify import DEFAULT_SAMPLES, certify, random_stratum_point
from .connect import StratumSpec, connect_fredholm, connect_rank_stratum
from .errors import Infeasible, StratumError
from .geometry import stratification_report, stratum_dim, tangent_space_dim
from .linalg import DEFAULT_TOL, numerical_rank
from .paths import OperatorPath, canonical_straight_line_flip
from .serialize import matrix_to_dict, read_matrix, read_path, subspace_to_dict, write_json, write_matrix, write_path
from .subspace import Subspace, common_complement_parts, complementarity

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

SEED_ENV = "STRATUM_PATH_SEED"


def _emit(obj):
    print(json.dumps(obj, indent=1))


def _dims(text, count):
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise StratumError(f"expected {count} comma-separated integers, got {text!r}") from None
    if len(values) != count:
        raise StratumError(f"expected {count} comma-separated integers, got {text!r}")
    return values


def cmd_connect(args):
    T1, T2 = (read_matrix(p) for p in args.inputs)
    if T1.shape != T2.shape:
        raise StratumError(f"input shapes differ: {T1.shape} vs {T2.shape}")
    spec = StratumSpec.parse(args.stratum, T1.shape)
    if spec.variant == "rank":
        rank = numerical_rank(T1, args.tol).rank
        if rank != spec.k:
            raise StratumError(f"first input has rank {rank}, stratum requires {spec.k}")
        path = connect_rank_stratum(T1, T2, args.tol)
    else:
        path = connect_fredholm(T1, T2, spec, args.tol)
    write_path(path, args.out)
    print(f"wrote {len(path)} segments to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_certify(args):
    path = read_path(args.path)
    spec = StratumSpec.parse(args.stratum, path.shape)
    cert = certify(path, spec, samples=args.samples, tol=args.tol)
    report = cert.as_dict()
    if args.report:
        write_json(report, args.report)
    print(f"{cert.verdict}: {len(path)} segments, {cert.samples_per_segment} samples each", file=sys.stderr)
    if not cert.passed:
        print(cert.first_failure, file=sys.stderr)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_tangent_dim(args):
    X = read_matrix(args.input)
    r = tangent_space_dim(X, args.tol)
    _emit(
        {
            "base_point_rank": r.base_point_rank,
            "ambient_dim": r.ambient_dim,
            "tangent_dim": r.tangent_dim,
            "complement_dim": r.complement_dim,
            "formula_dim": r.formula_dim,
            "agrees": r.agrees,
            "residual": r.residual,
        }
    )
    return EXIT_OK if r.agrees else EXIT_FAIL


def cmd_stratum_dim(args):
    print(stratum_dim(args.m, args.n, args.k))
    return EXIT_OK


def cmd_stratify(args):
    entries = stratification_report(args.m, args.n)
    _emit([{"k": k, "stratum_dim": d, **cert} for k, d, cert in entries])
    return EXIT_OK if all(c["agrees"] for _, _, c in entries) else EXIT_FAIL


def cmd_common_complement(args):
    first, second = (Subspace.span(read_matrix(p)) for p in args.inputs)
    parts = common_complement_parts(first, second)
    R = parts.complement
    _emit(
        {
            "complement": subspace_to_dict(R),
            "sigma_min_first": complementarity(first, R),
            "sigma_min_second": complementarity(second, R),
            "intersection_dim": parts.intersection.dim,
            "sum_dim": parts.sum_dim,
        }
    )
    return EXIT_OK


def cmd_flip_defect(args):
    seg = canonical_straight_line_flip()
    mid = seg(0.5)
    R = Subspace.coordinate(2, 1)
    range_mid = Subspace.span(mid)
    spec = StratumSpec.rank_stratum(1, (2, 2))
    cert = certify(OperatorPath((seg,)), spec, samples=args.samples)
    _emit(
        {
            "start": matrix_to_dict(seg.start()),
            "end": matrix_to_dict(seg.end()),
            "midpoint": matrix_to_dict(mid),
            "midpoint_range_inside_R": bool(range_mid.dim == 1 and R.contains(range_mid.basis)),
            "certificate_verdict": cert.verdict,
            "first_failure": cert.first_failure,
        }
    )
    return EXIT_OK


def cmd_gen(args):
    rows, cols = _dims(args.dims, 2)
    seed = args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise StratumError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    T = random_stratum_point(rows, cols, args.rank, seed=seed)
    write_matrix(T, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opstrata", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("connect", help="build a path between two matrices")
    c.add_argument("--in", dest="inputs", action="append", required=True, metavar="FILE")
    c.add_argument("--stratum", required=True, help="rank:k or fredholm:m,n")
    c.add_argument("--out", required=True)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_connect, n_inputs=2)

    c = sub.add_parser("certify", help="certify a stored path")
    c.add_argument("--path", required=True)
    c.add_argument("--stratum", required=True)
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    c.add_argument("--report")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("tangent-dim", help="tangent space dimension at a matrix")
    c.add_argument("--in", dest="input", required=True, metavar="FILE")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_tangent_dim)

    c = sub.add_parser("stratum-dim", help="dimension of the rank-k matrices of size m x n")
    for name in ("m", "n", "k"):
        c.add_argument(name, type=int)
    c.set_defaults(func=cmd_stratum_dim)

    c = sub.add_parser("stratify", help="per-rank dimension report for maps R^m -> R^n")
    c.add_argument("m", type=int)
    c.add_argument("n", type=int)
    c.set_defaults(func=cmd_stratify)

    c = sub.add_parser("common-complement", help="common complement of two equal-dimension subspaces")
    c.add_argument("--in", dest="inputs", action="append", required=True, metavar="FILE")
    c.set_defaults(func=cmd_common_complement, n_inputs=2)

    c = sub.add_parser(
        "flip-defect",
        aliases=["counterexample-thm22"],
        help="evaluate the straight-line sign-flip family at its degenerate midpoint",
    )
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    c.set_defaults(func=cmd_flip_defect)

    c = sub.add_parser("gen", help="seeded random matrix of a given rank")
    c.add_argument("--dims", required=True, help="rows,cols")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    n_inputs = getattr(args, "n_inputs", None)
    if n_inputs is not None and len(args.inputs) != n_inputs:
        print(f"error: expected exactly {n_inputs} --in files", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (StratumError, ValueError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
