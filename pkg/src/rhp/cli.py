"""``rhp`` command line: enumerate the signed sets, run the bijection, verify identities.

Exit status is 0 on success, 1 when a verification fails and 2 for usage,
parse or precondition errors.  Streams are JSON lines with sorted keys so a
fixed seed gives byte-identical output.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path
from typing import Callable, TextIO

from .enumeration import (
    DEFAULT_CAP,
    all_permutations,
    check_size,
    enumerate_R_sigma,
    enumerate_set,
    forbidden_breakdown,
    set_monomial_sum,
)
from .errors import RHPError
from .forest import ForestTuple
from .involutions import garsia_milne_backward, garsia_milne_forward, step_bound_from_env
from .linalg import (
    SquareMatrix,
    cancellation_check,
    dodgson_muir_sides,
    gendodgson_numeric,
    gendodgson_sides,
    matrix_tree_check,
    random_integer_matrix,
    reduced_laplacian,
)
from .suites import bijection_suite, involution_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _scalar(x):
    return x if isinstance(x, int) else str(x)


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- verify-dm ---------------------------------------------------------------------


def _dm_record(M: SquareMatrix, k: int, label: str) -> tuple[dict, bool]:
    sides = dodgson_muir_sides(M, k)
    rec = {
        "matrix": label,
        "k": k,
        "lhs": _scalar(sides.lhs),
        "rhs": _scalar(sides.rhs),
        "per_sigma": {str(s): _scalar(v) for s, v in sides.per_sigma},
        "result": _verdict(sides.holds),
    }
    return rec, sides.holds


def cmd_verify_dm(args, out: TextIO) -> int:
    if args.matrix_file is None and args.n is None:
        raise UsageError("verify-dm needs a matrix file or --n")
    if args.matrix_file is not None:
        try:
            M = SquareMatrix.from_json(Path(args.matrix_file).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read matrix: {exc}") from exc
        label = str(args.matrix_file)
    else:
        M, label = reduced_laplacian(args.n), f"laplacian({args.n})"
    ks = [args.k] if args.k is not None else list(range(1, M.dim + 1))
    if any(not 1 <= k <= M.dim for k in ks):
        raise UsageError(f"k must lie in 1..{M.dim}")

    ok = True
    if args.mode == "exact":
        for k in ks:
            rec, good = _dm_record(M, k, label)
            ok &= good
            print(_dumps(rec), file=out)
    elif args.matrix_file is None:
        for k in ks:
            good = gendodgson_numeric(args.n, k, trials=args.trials, seed=args.seed)
            ok &= good
            print(_dumps({"matrix": label, "k": k, "mode": "random-trials",
                          "trials": max(args.trials, 3), "seed": args.seed,
                          "result": _verdict(good)}), file=out)
    else:
        rng = random.Random(args.seed)
        matrices = [(label, M)] + [
            (f"random[{i}]", random_integer_matrix(M.dim, rng)) for i in range(max(args.trials, 3))
        ]
        for name, A in matrices:
            for k in ks:
                rec, good = _dm_record(A, k, name)
                ok &= good
                print(_dumps(rec), file=out)
    print(_verdict(ok), file=out)
    return EXIT_OK if ok else EXIT_FAIL


# -- bijection ---------------------------------------------------------------------


def cmd_bijection(args, out: TextIO) -> int:
    try:
        t = ForestTuple.from_json(Path(args.tuple_file).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read tuple: {exc}") from exc
    if args.trace and args.out is None:
        raise UsageError("--trace needs --out DIR")
    drive = garsia_milne_forward if args.direction == "forward" else garsia_milne_backward
    result, log = drive(t, step_bound_from_env())
    text = _dumps(result.to_dict())
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "result.json").write_text(text + "\n")
        if args.trace:
            log.write(out_dir)
    print(text, file=out)
    return EXIT_OK


# -- enumerate ---------------------------------------------------------------------


def cmd_enumerate(args, out: TextIO) -> int:
    n, k = args.n, args.k
    check_size(n, k, args.cap)
    if args.set == "forbidden":
        if args.count_only:
            per = forbidden_breakdown(n, k)
            rec = {
                "n": n, "k": k, "set": "forbidden",
                "count": sum(per.values()),
                "per_sigma": per,
                "identity_total": len(enumerate_R_sigma(n, k, all_permutations(k)[0])),
            }
            print(_dumps(rec), file=out)
        else:
            for sigma in all_permutations(k):
                if sigma.is_identity():
                    continue
                for t in enumerate_R_sigma(n, k, sigma):
                    print(_dumps({"sigma": str(sigma), "tuple": t.to_dict()}), file=out)
        return EXIT_OK

    stream = enumerate_set(n, k, args.set, cap=args.cap)
    if args.count_only:
        count = sum(1 for _ in stream)
        print(_dumps({"n": n, "k": k, "set": args.set, "count": count}), file=out)
    else:
        for t in stream:
            print(_dumps(t.to_dict()), file=out)
    return EXIT_OK


# -- verify-all --------------------------------------------------------------------


def verify_all_checks(n: int, k: int, cap: int = DEFAULT_CAP) -> list[tuple[str, Callable[[], bool]]]:
    def tree():
        return all(
            matrix_tree_check(n, roots)
            for r in range(1, n + 2)
            for roots in itertools.combinations(range(n + 1), r)
        )

    def gendodgson():
        sides = gendodgson_sides(n, k)
        return sides.holds and sides.lhs == set_monomial_sum(n, k, "S0", cap)

    return [
        ("matrix-tree", tree),
        ("cancellation", lambda: cancellation_check(n, k, cap)),
        ("gendodgson", gendodgson),
        ("bijection", lambda: bijection_suite(n, k, cap).ok),
        ("involutions", lambda: involution_suite(n, k, cap).ok),
    ]


def cmd_verify_all(args, out: TextIO) -> int:
    if not 1 <= args.k <= args.n:
        raise UsageError("need 1 <= k <= n")
    ok = True
    width = 14
    print(f"{'check':<{width}} result", file=out)
    for name, run in verify_all_checks(args.n, args.k, args.cap):
        good = run()
        ok &= good
        print(f"{name:<{width}} {_verdict(good)}", file=out)
    print(f"{'overall':<{width}} {_verdict(ok)}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    dm = sub.add_parser("verify-dm", help="check the Dodgson/Muir identity on a matrix")
    dm.add_argument("matrix_file", nargs="?", help='JSON {"dim": d, "entries": [[...], ...]}')
    dm.add_argument("--n", type=int, help="use the reduced Laplacian on {0..n} instead of a file")
    dm.add_argument("--k", type=int, help="block size; every k when omitted")
    dm.add_argument("--mode", choices=["exact", "random-trials"], default="exact")
    dm.add_argument("--trials", type=int, default=3)
    dm.add_argument("--seed", type=int, default=0)
    dm.set_defaults(func=cmd_verify_dm)

    bj = sub.add_parser("bijection", help="map S0 to S3 (or back) and optionally trace")
    bj.add_argument("tuple_file")
    bj.add_argument("--direction", choices=["forward", "backward"], default="forward")
    bj.add_argument("--trace", action="store_true")
    bj.add_argument("--out", metavar="DIR")
    bj.set_defaults(func=cmd_bijection)

    en = sub.add_parser("enumerate", help="stream or count S0..S3 or the forbidden tuples")
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--k", type=int, required=True)
    en.add_argument("--set", choices=["S0", "S1", "S2", "S3", "forbidden"], required=True)
    en.add_argument("--count-only", action="store_true")
    en.add_argument("--cap", type=int, default=DEFAULT_CAP)
    en.set_defaults(func=cmd_enumerate)

    va = sub.add_parser("verify-all", help="run every check at one (n, k)")
    va.add_argument("--n", type=int, required=True)
    va.add_argument("--k", type=int, required=True)
    va.add_argument("--cap", type=int, default=DEFAULT_CAP)
    va.set_defaults(func=cmd_verify_all)
    return p


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"rhp: error: {exc}", file=sys.stderr)
    except RHPError as exc:
        print(f"rhp: {type(exc).__name__}: {exc}", file=sys.stderr)
    except ValueError as exc:
        # a malformed RHP_STEP_BOUND lands here
        print(f"rhp: error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
