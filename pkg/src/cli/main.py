# src/cli/main.py
import argparse
import logging
import sys
from typing import List, Optional

from src.cli.handlers import CliHandlers
from src.core.config import load_config
from src.core.database import init_database
from src.core.errors import AlgebraError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laurent-rows",
        description="Certified unimodular-row reductions and universal-ring oracles",
    )
    parser.add_argument("--config", default="config.yaml", help="YAML config file")
    parser.add_argument("--ledger", default=None, help="SQLAlchemy URL of the run ledger")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-row", help="generate a seeded unimodular row bundle")
    gen.add_argument("--r", type=int, required=True)
    gen.add_argument("--base", default="Q")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--steps", type=int, default=None)
    gen.add_argument("--out", required=True)

    red = sub.add_parser("reduce", help="reduce a bundle to Weierstrass form")
    red.add_argument("--in", dest="input", default=None)
    red.add_argument("--precision", type=int, default=None)
    red.add_argument("--out", default=None)
    red.add_argument("--verify-only", action="store_true")
    red.add_argument("--result", default=None)

    comp = sub.add_parser("complete2", help="complete a length-2 row")
    comp.add_argument("--in", dest="input", required=True)
    comp.add_argument("--out", required=True)

    pres = sub.add_parser("presentation", help="write the presentation of B_{r,k,n}")
    pres.add_argument("--r", type=int, required=True)
    pres.add_argument("--k", type=int, required=True)
    pres.add_argument("--n", type=int, required=True)
    pres.add_argument("--base", default="Q")
    pres.add_argument("--out", required=True)

    chk = sub.add_parser("check", help="run a claim oracle")
    chk.add_argument(
        "--claim",
        required=True,
        choices=["regseq", "irreducible", "loc-iso", "grading", "suslin-grading", "universal-map", "chain-audit"],
    )
    for flag in ("--r", "--k", "--n", "--l", "--i"):
        chk.add_argument(flag, default=None, help="integer or comma-separated list")
    chk.add_argument("--base", default="Q", help="base ring or comma-separated list")
    chk.add_argument("--method", default=None, choices=["hilbert", "quotient"])
    chk.add_argument("--degree", type=int, default=None)
    chk.add_argument("--cross-check", action="store_true")
    chk.add_argument("--in", dest="input", default=None)
    chk.add_argument("--precision", type=int, default=None)
    chk.add_argument("--jobs", type=int, default=1)
    chk.add_argument("--out", default=None)
    return parser


def setup_logging(config: dict, verbose: bool = False) -> None:
    """Log to stderr; stdout carries only JSON verdicts."""
    level = logging.DEBUG if verbose else getattr(logging, str(config.get("level", "INFO")).upper(), logging.INFO)
    handlers: List[logging.Handler] = []
    if config.get("console", True):
        handlers.append(logging.StreamHandler(sys.stderr))
    if config.get("file"):
        handlers.append(logging.FileHandler(config["file"], encoding="utf-8"))
    if not handlers:
        handlers.append(logging.NullHandler())
    logging.basicConfig(level=level, format=config.get("format"), handlers=handlers, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    config = load_config(args.config)
    setup_logging(config.get("logging", {}), args.verbose)

    db = None
    db_config = config.get("database", {})
    ledger = args.ledger or (db_config.get("url") if db_config.get("enabled") else None)
    if ledger:
        try:
            db = init_database(ledger)
        except Exception as e:
            logger.warning(f"Run ledger {ledger} not available: {e}")

    handlers = CliHandlers(config, db)
    commands = {
        "gen-row": handlers.gen_row,
        "reduce": handlers.reduce,
        "complete2": handlers.complete2,
        "presentation": handlers.presentation,
        "check": handlers.check,
    }
    try:
        return commands[args.command](args)
    except AlgebraError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
