"""Command line entry point: ``subjcat {ingest,stats,relations,cover,sweep,report}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .corpus import AmbiguousMatchError, EmptyCorpusError, ParseError
from .report import InputMissingError, RunConfig, run_pipeline

log = logging.getLogger("subjcat")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING_INPUT = 3
EXIT_PARSE = 4
EXIT_AMBIGUOUS = 5
EXIT_EMPTY = 6

COMMANDS = {
    "ingest": ("ingest",),
    "stats": ("ingest", "stats"),
    "relations": ("ingest", "relations"),
    "cover": ("ingest", "cover"),
    "sweep": ("ingest", "sweep"),
    "report": ("ingest", "stats", "relations", "sweep", "cover"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input-a", required=True, help="journal table of system a (CSV)")
    common.add_argument("--input-b", required=True, help="journal table of system b (CSV)")
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--threshold", type=float, action="append", dest="thresholds",
                        help="cover threshold in (0, 1]; repeatable (default 1.0, 0.95, 0.9)")
    common.add_argument("--sweep-step", type=int, default=5, help="similarity sweep step in percent")
    common.add_argument("--bin-width", type=int, default=15)
    common.add_argument("--exact-cap", type=int, default=25,
                        help="largest candidate count solved exactly")
    common.add_argument("--budget", type=int, default=200_000,
                        help="node budget of one exact cover search")
    common.add_argument("--small-cutoff", type=int, default=10)
    common.add_argument("--large-cutoff", type=int, default=350)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="subjcat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = RunConfig(
            input_a=args.input_a,
            input_b=args.input_b,
            out_dir=args.out,
            thresholds=tuple(args.thresholds or (1.0, 0.95, 0.90)),
            sweep_step=args.sweep_step,
            bin_width=args.bin_width,
            exact_cap=args.exact_cap,
            budget=args.budget,
            small_cutoff=args.small_cutoff,
            large_cutoff=args.large_cutoff,
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"subjcat: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        bundle = run_pipeline(config, COMMANDS[args.command])
    except InputMissingError as exc:
        print(f"subjcat: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except ParseError as exc:
        print(f"subjcat: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AmbiguousMatchError as exc:
        print(f"subjcat: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except EmptyCorpusError as exc:
        print(f"subjcat: empty corpus: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    paths = bundle.write()
    log.info("wrote %d files to %s in %.1fs", len(paths), config.out_dir, time.perf_counter() - start)
    t1 = {row["system"]: row for row in bundle.summary["table1"]}
    print(
        f"{t1['a']['journals_analysed']} journals, "
        f"{t1['a']['n_categories']} / {t1['b']['n_categories']} categories; "
        f"{len(paths)} files in {config.out_dir}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
