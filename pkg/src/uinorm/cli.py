"""Command-line front end: ``verify``, ``sharpness`` and ``calculus-check``."""
import argparse
import json
import logging
import sys

from . import _backend
from .errors import UsageError
from .harness import RunConfig, calculus_check, sharpness, verify, write_quarantine
from .inequalities import STATEMENTS

log = logging.getLogger("uinorm")


def _parser():
    p = argparse.ArgumentParser(prog="uinorm", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run seeded trials of one inequality and write a report")
    v.add_argument("--theorem", required=True, help="one of: " + ", ".join(STATEMENTS))
    v.add_argument("--dim", type=int, required=True)
    v.add_argument("--trials", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--min-gap", type=float, default=0.05)
    v.add_argument("--norms", default="all", help='"all" or a comma list such as operator,kyfan:2,schatten:3')
    v.add_argument("--format", choices=("json-lines", "csv"), default="json-lines")
    v.add_argument("--out", required=True)
    v.add_argument("--dump-instances", action="store_true", help="also write <out>.instances.jsonl")
    v.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("sharpness", help="hill-climb the ratio lhs/rhs")
    s.add_argument("--theorem", required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--min-gap", type=float, default=0.05)
    s.add_argument("--out", help="write the full result as JSON")
    s.add_argument("--quarantine", default="sharpness-anomaly.json", help="where anomalies are dumped")

    c = sub.add_parser("calculus-check", help="contour quadrature against the spectral calculus")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--trials", type=int, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--nodes", type=int, default=256)
    c.add_argument("--min-gap", type=float, default=0.2)
    return p


def _run(args):
    if args.command == "verify":
        cfg = RunConfig(
            theorem_id=args.theorem, dim=args.dim, trials=args.trials, seed=args.seed,
            output_path=args.out, min_gap=args.min_gap, norms=args.norms, format=args.format,
            dump_instances=args.dump_instances, workers=args.workers,
        )
        summary = verify(cfg)
        print(json.dumps({
            "theorem_id": summary.theorem_id,
            "trials": summary.trials,
            "records": summary.records,
            "passed": summary.passed,
            "failed": summary.failed,
            "max_ratio": summary.max_ratio,
            "report": summary.report_path,
        }))
        return 0 if summary.ok else 1

    if args.command == "sharpness":
        result = sharpness(args.theorem, args.dim, args.budget, args.seed, args.min_gap)
        out = result.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(out, fh, indent=1)
                fh.write("\n")
        brief = {k: out[k] for k in ("theorem_id", "dim", "seed", "best_ratio", "best_norm", "evaluations_used", "anomaly")}
        print(json.dumps(brief))
        if result.anomaly:
            write_quarantine(result, args.quarantine)
            log.error("ratio %.17g exceeds 1: instance written to %s", result.best_ratio, args.quarantine)
            return 1
        return 0

    summary = calculus_check(args.dim, args.trials, args.seed, args.nodes, args.min_gap)
    print(json.dumps(summary.to_json()))
    return 0 if summary.ok else 1


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    log.debug("kernel backend: %s", _backend.NAME)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"uinorm: usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"uinorm: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
