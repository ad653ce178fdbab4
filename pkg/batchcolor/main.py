import argparse
import logging
import sys
from typing import List, Optional

from batchcolor.cli.commands import cmd_adversary, cmd_oracle, cmd_solve, cmd_verify
from batchcolor.core.config import get_settings
from batchcolor.core.graph import OBJECTIVES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="batchcolor", description="Batch graph coloring: algorithms, "
                                     "adversaries and exact oracles")
    parser.add_argument("--log-level", default=None, help="override BATCHCOLOR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="color a fixed batched instance online")
    solve.add_argument("--algorithm", required=True)
    solve.add_argument("--input", required=True, help="instance file or duel transcript")
    solve.add_argument("--objective", choices=OBJECTIVES, default="colors")
    solve.add_argument("--k", type=int, default=None, help="batch count announced to k-aware algorithms")
    solve.add_argument("--schedule", default=None, help="batch-color-f schedule, e.g. f=isq,cf=329/200")
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--diagnostics", action="store_true")
    solve.add_argument("--out", default=None)
    solve.set_defaults(handler=cmd_solve)

    duel = sub.add_parser("adversary", help="play an adaptive adversary against an algorithm")
    duel.add_argument("--name", required=True)
    duel.add_argument("--params", default="", help="e.g. k=2,M=9")
    duel.add_argument("--algorithm", required=True)
    duel.add_argument("--objective", choices=OBJECTIVES, default=None)
    duel.add_argument("--schedule", default=None)
    duel.add_argument("--seed", type=int, default=None)
    duel.add_argument("--trials", type=int, default=1)
    duel.add_argument("--diagnostics", action="store_true")
    duel.add_argument("--out", default=None)
    duel.set_defaults(handler=cmd_adversary)

    oracle = sub.add_parser("oracle", help="exact optimum of an instance's final graph")
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--objective", choices=OBJECTIVES, default="colors")
    oracle.add_argument("--out", default=None)
    oracle.set_defaults(handler=cmd_oracle)

    verify = sub.add_parser("verify", help="check a coloring against an instance")
    verify.add_argument("--input", required=True)
    verify.add_argument("--coloring", required=True)
    verify.add_argument("--out", default=None)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; usage is exit 1 here
        return 0 if e.code == 0 else 1
    level = args.log_level or ("DEBUG" if settings.debug else settings.log_level)
    logging.basicConfig(level=level.upper(),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
