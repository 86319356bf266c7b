"""Command-line entry point: ``involucomp <command> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import egf
from .asymptotics import SPermutationFamily, exact_s_log_probability, hayman_log_estimate
from .config import EXPERIMENTS, ExperimentConfig
from .factorization import count_factorizations, count_fpf_factorizations, enumerate_involution_factorizations
from .patterns import growth_report
from .perm import Permutation, cycle_type
from .samplers import (
    SeededStream,
    sample_boltzmann_s_permutation,
    sample_fpf_involution,
    sample_involution,
    sample_pstar_cycle_type,
    sample_uniform_permutation,
)


def _int_set(text: str) -> list[int]:
    try:
        values = sorted({int(x) for x in text.replace(" ", "").split(",") if x})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or values[0] < 1:
        raise argparse.ArgumentTypeError("set must contain positive integers")
    return values


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_count(args) -> int:
    if args.gf == "pairs":
        _emit([str(c) for c in egf.pair_counts(args.n)])
    elif args.gf == "spermutations":
        if not args.set:
            raise SystemExit("--set is required for --gf spermutations")
        _emit([str(c) for c in egf.s_permutation_counts(args.set, args.n)])
    else:
        table = egf.path_cycle_table(args.n)
        _emit([[str(p), str(c), str(v)] for (p, c), v in sorted(table.items())])
    return 0


def cmd_factorize(args) -> int:
    pi = Permutation.parse(args.perm, args.size)
    ct = cycle_type(pi)
    if args.fpf:
        value = count_fpf_factorizations(ct)
        out = {"count": str(value), "log_count": math.log(value) if value else None}
    else:
        fc = count_factorizations(ct)
        out = {"count": None if fc.value is None else str(fc.value), "log_count": fc.log_value}
    if pi.n <= 10:
        out["factors"] = [[str(s), str(t)] for s, t in enumerate_involution_factorizations(pi, args.fpf)]
    _emit(out)
    return 0


def cmd_sample(args) -> int:
    for t in range(args.trials):
        stream = SeededStream(args.seed, t)
        if args.cls == "inv":
            obj = str(sample_involution(args.n, stream))
        elif args.cls == "fpf":
            obj = str(sample_fpf_involution(args.n, stream))
        elif args.cls == "uniform":
            obj = str(sample_uniform_permutation(args.n, stream))
        elif args.cls == "boltzmann":
            if not args.set:
                raise SystemExit("--set is required for --class boltzmann")
            obj = str(sample_boltzmann_s_permutation(args.set, args.n, stream))
        else:
            obj = {str(k): c for k, c in sample_pstar_cycle_type(args.n, stream).items()}
        _emit({"trial": t, "sample": obj})
    return 0


def cmd_asympt(args) -> int:
    fam = SPermutationFamily(args.set)
    log_est = hayman_log_estimate(fam, args.n)
    out = {"set": list(fam.S), "n": args.n, "log_estimate": log_est, "estimate": math.exp(log_est)}
    if args.compare_exact:
        log_exact = exact_s_log_probability(fam, args.n)
        out.update(log_exact=log_exact, exact=math.exp(log_exact), rel_error=math.expm1(log_est - log_exact))
    _emit(out)
    return 0


def cmd_patterns(args) -> int:
    s_max = 0 if args.cls == "inv" else None
    sys.stdout.write(growth_report(args.pat, args.max_n, s_max=s_max).to_csv())
    return 0


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        args.name, args.n, args.trials, args.seed,
        k=args.k, l=args.l, gamma=args.gamma, delta=args.delta, r_max=args.r_max,
    )
    rep = config.run()
    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.pmf_csv())
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="involucomp", description="Compositions of random involutions")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="exact coefficient sequences")
    c.add_argument("--gf", choices=["pairs", "spermutations", "table"], required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--set", type=_int_set)
    c.set_defaults(func=cmd_count)

    f = sub.add_parser("factorize", help="factorizations into two involutions")
    f.add_argument("--perm", required=True, help='cycle notation such as "(1 2 3 4)" or one-line "2341"')
    f.add_argument("--size", type=int, help="ground set size when trailing fixed points are omitted")
    f.add_argument("--fpf", action="store_true", help="only fixed-point-free factors")
    f.set_defaults(func=cmd_factorize)

    s = sub.add_parser("sample", help="draw random objects as JSON lines")
    s.add_argument("--class", dest="cls", choices=["inv", "fpf", "boltzmann", "pstar", "uniform"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--set", type=_int_set)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    a = sub.add_parser("asympt", help="saddle-point estimate for S-permutations")
    a.add_argument("--set", type=_int_set, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--compare-exact", action="store_true")
    a.set_defaults(func=cmd_asympt)

    pt = sub.add_parser("patterns", help="avoider counts and growth roots as CSV")
    pt.add_argument("--pat", required=True)
    pt.add_argument("--max-n", type=int, required=True)
    pt.add_argument("--class", dest="cls", choices=["both", "inv"], default="both")
    pt.set_defaults(func=cmd_patterns)

    e = sub.add_parser("experiment", help="Monte Carlo experiment; exit status 0 iff all checks pass")
    e.add_argument("name", choices=EXPERIMENTS)
    e.add_argument("--n", type=int, required=True, help="size (the even ground-set size for fpf and lengthlaw)")
    e.add_argument("--trials", type=int, required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--k", type=int)
    e.add_argument("--l", type=int)
    e.add_argument("--gamma", type=float, default=0.125)
    e.add_argument("--delta", type=float, default=0.375)
    e.add_argument("--r-max", type=int, default=10)
    e.add_argument("--out")
    e.add_argument("--csv", help="write the pmf table here")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
