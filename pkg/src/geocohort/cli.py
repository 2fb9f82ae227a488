"""Command-line driver.

    geocohort [--config cfg.json] [--set section.key=value ...] <command>

Exit codes: 0 success, 2 configuration error, 3 missing input, 4 data error.
Failures print one line to stderr: ``geocohort: error=<Kind> detail=<message>``.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .config import load_config
from .errors import GeocohortError
from .jsonio import dumps
from .pipeline import STAGES, run

log = logging.getLogger("geocohort")


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand defaults from clobbering options given before the command
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", "-c", help="JSON config file")
    common.add_argument("--set", dest="overrides", action="append", metavar="KEY=VALUE",
                        help="override a config value, e.g. dbscan.eps=2.5 (repeatable)")
    common.add_argument("--output-dir", "-o", help="shorthand for --set paths.output_dir=DIR")
    common.add_argument("--seed", type=int, help="shorthand for --set seed=N")
    common.add_argument("--workers", type=int, help="cap on worker processes")
    common.add_argument("--strict", action="store_true", help="abort on the first malformed record")
    common.add_argument("-v", "--verbose", action="count")

    p = argparse.ArgumentParser(prog="geocohort", description=__doc__.split("\n")[0],
                                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "ingest": "group posts into per-user histories",
        "extract": "find and normalize location entities per user",
        "infer": "cluster geocoded mentions into ranked location guesses",
        "train-confidence": "fit the positive and negative confidence forests",
        "score": "score guesses and pick one location per user",
        "evaluate": "grade locations against annotations",
        "topics": "monthly topic series per vote-share cohort",
        "regress": "interaction OLS per topic",
        "export": "confidence-filtered cohort, per-state rates and histogram",
    }
    for name in STAGES:
        sub.add_parser(name, help=helps[name], parents=[common])
    sp = sub.add_parser("all", help="run every stage in order", parents=[common])
    sp.add_argument("--skip", action="append", default=[], choices=list(STAGES),
                    help="stage to leave out (repeatable)")
    sp = sub.add_parser("synth", help="write a synthetic fixture set and matching config",
                        parents=[common])
    sp.add_argument("out_dir")
    sp.add_argument("--users", type=int, default=200)
    return p


COMMON_DEFAULTS = {"config": None, "overrides": [], "output_dir": None, "seed": None,
                   "workers": None, "strict": False, "verbose": 0}


def _overrides(args) -> list[str]:
    out = list(args.overrides)
    if args.output_dir:
        out.append(f"paths.output_dir={dumps(args.output_dir)}")
    if args.seed is not None:
        out.append(f"seed={args.seed}")
    if args.workers is not None:
        out.append(f"workers={args.workers}")
    if args.strict:
        out.append("strict=true")
    return out


def _synth(args) -> dict:
    from pathlib import Path

    from .jsonio import write_json
    from .synthetic import write_fixture_set

    out = Path(args.out_dir)
    paths = write_fixture_set(out, args.users, args.seed or 0)
    cfg = {"paths": {"corpus": [paths["corpus"].name], "gazetteer": paths["gazetteer"].name,
                     "annotations": paths["annotations"].name,
                     "vote_shares": paths["vote_shares"].name,
                     "populations": paths["populations"].name, "output_dir": "out"},
           "seed": args.seed or 0}
    write_json(out / "config.json", cfg)
    return {k: str(v) for k, v in paths.items()} | {"config": str(out / "config.json")}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for k, v in COMMON_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            result = _synth(args)
        else:
            cfg = load_config(args.config, _overrides(args))
            if args.command == "all":
                result = {c: run(c, cfg) for c in STAGES if c not in args.skip}
            else:
                result = run(args.command, cfg)
    except GeocohortError as exc:
        detail = " ".join(str(exc).split())
        print(f"geocohort: error={type(exc).__name__} detail={detail}", file=sys.stderr)
        return exc.exit_code
    print(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
