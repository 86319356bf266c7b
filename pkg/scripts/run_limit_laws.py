"""Run every Monte Carlo limit-law experiment and write one JSON report each.

    python3 scripts/run_limit_laws.py --out reports/ [--seed 2024] [--scale 0.1] [--only fpf kcycles]

``--scale`` multiplies the default trial counts (use a small value for a
quick smoke run). Exit status is 0 iff every declared check passes.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from involucomp.config import EXPERIMENTS, LimitLawSuite

log = logging.getLogger("limit_laws")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("reports"))
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--only", nargs="*", choices=EXPERIMENTS)
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    suite = LimitLawSuite.default(seed=args.seed, scale=args.scale)
    args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for i, cfg in enumerate(c for c in suite.runs if not args.only or c.name in args.only):
        rep = cfg.run()
        stem = f"{i:02d}_{cfg.name}_n{cfg.n}" + (f"_k{cfg.k}" if cfg.k is not None else "")
        (args.out / f"{stem}.json").write_text(rep.to_json() + "\n")
        if "pmf" in rep.summaries:
            (args.out / f"{stem}.csv").write_text(rep.pmf_csv())
        failed = [name for name, c in rep.checks.items() if not c["passed"]]
        log.info("%-34s %s  %.1fs%s", stem, "PASS" if not failed else "FAIL", rep.wall_time,
                 f"  failed: {', '.join(failed)}" if failed else "")
        ok &= rep.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
