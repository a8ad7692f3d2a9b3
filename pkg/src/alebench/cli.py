"""
Command-line front end.

    alebench list-experiments
    alebench sweep --experiment ber_vs_snr_awgn [--config c.json] [--seed 7] [--output out.csv]
    alebench run --algorithm pso --snr-db 0 [--config c.json] [--seed 7]

Flags override values from the config file. CSV goes to stdout (``run``) or
to ``--output``; everything else goes to stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from .config import ConfigError, load_json, spec_from_dict, spec_to_json
from .harness import ALGORITHMS, KINDS, GridPoint, resolve_point, run_single, run_sweep, write_csv
from .optimizers import DivergenceError

logger = logging.getLogger("alebench")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alebench", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True, metavar="{run,sweep,list-experiments}")

    sub.add_parser("list-experiments", help="print the experiment kinds")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=_u64, help="master seed (sweep) or run seed (run)")
    common.add_argument("--trials", type=_positive)
    common.add_argument("--dry-run", action="store_true", help="print the resolved spec as JSON and exit")
    common.add_argument("-v", "--verbose", action="store_true")

    sw = sub.add_parser("sweep", parents=[common], help="run an experiment sweep and write CSV")
    sw.add_argument("--experiment", choices=KINDS, required=True)
    sw.add_argument("--output", help="CSV path (default: config output_path or <experiment>.csv)")
    sw.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)

    run = sub.add_parser("run", parents=[common], help="run one pipeline pass and print a CSV row")
    run.set_defaults(usage=run.format_usage())
    run.add_argument("--algorithm", choices=ALGORITHMS)
    run.add_argument("--snr-db", type=float)
    run.add_argument("--experiment", choices=KINDS, help="take defaults from this experiment kind")
    run.add_argument("--output", help="also write the CSV row to this path")
    return parser


def _load(args) -> dict:
    return load_json(args.config) if args.config else {}


def _sweep(args) -> int:
    data = _load(args)
    overrides = {"master_seed": args.seed, "trials": args.trials, "output_path": args.output}
    spec = spec_from_dict(data, kind=args.experiment, overrides=overrides)
    if args.dry_run:
        print(spec_to_json(spec))
        return 0
    path = spec.output_path or f"{spec.kind}.csv"
    records = run_sweep(spec, jobs=args.jobs)
    write_csv(records, path)
    failed = [r for r in records if r.failed]
    logger.info("wrote %d records to %s", len(records), path)
    if failed:
        logger.error("%d of %d runs failed", len(failed), len(records))
        return 1
    return 0


def _run(args) -> int:
    data = _load(args)
    algorithm = args.algorithm or data.get("algorithm")
    data.pop("algorithm", None)
    snr_db = args.snr_db if args.snr_db is not None else data.get("snr_db")
    missing = [flag for flag, v in (("--algorithm", algorithm), ("--snr-db", snr_db)) if v is None]
    if missing:
        sys.stderr.write(args.usage)
        sys.stderr.write(f"alebench run: error: {' and '.join(missing)} required (flag or config)\n")
        return 2
    if algorithm not in ALGORITHMS:
        raise ConfigError("algorithm", f"expected one of {ALGORITHMS}, got {algorithm!r}")
    kind = args.experiment or data.get("experiment") or "ber_vs_snr_awgn"
    spec = spec_from_dict(data, kind=kind, overrides={"snr_db": snr_db, "master_seed": args.seed, "trials": 1})
    if args.dry_run:
        print(spec_to_json(spec))
        return 0
    gp = GridPoint("snr_db", float(snr_db), float(snr_db))
    point = replace(resolve_point(spec, gp, algorithm), experiment="run", report_ber=True)
    record = run_single(point, spec.master_seed)
    write_csv([record], sys.stdout)
    if args.output:
        write_csv([record], args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "list-experiments":
        print("\n".join(KINDS))
        return 0
    try:
        if args.command == "sweep":
            return _sweep(args)
        return _run(args)
    except ConfigError as err:
        sys.stderr.write(f"alebench: invalid config: {err}\n")
        return 1
    except DivergenceError as err:
        sys.stderr.write(f"alebench: {err}\n")
        return 1
    except OSError as err:
        sys.stderr.write(f"alebench: {err}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
