# main.py
# ─────────────────────────────────────────────────────────────────────────────
# fsmsolc command-line entry point
# ─────────────────────────────────────────────────────────────────────────────
#   fsmsolc validate   contracts/blind_auction.fsm
#   fsmsolc emit       contracts/blind_auction.fsm --plugins locking,counter -o out.sol
#   fsmsolc simulate   contracts/blind_auction.fsm --schedule contracts/schedules/auction.json
#   fsmsolc search     contracts/blind_auction_vulnerable.fsm --depth 2
#   fsmsolc gas-report contracts/blind_auction.fsm --plugins locking
#
# Exit codes: 0 ok · 1 I/O, parse, validation or tooling error ·
#             2 rejection / counterexample / failed calibration · 64 bad usage
# ─────────────────────────────────────────────────────────────────────────────

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, NoReturn, Sequence

from pydantic import ValidationError

from models.errors import ContractParseError, FsmsolcError
from schemas.cli import DEFAULT_CREATION_TIME, DEFAULT_CREATOR, CliConfig, Command
from workflows import emit, gas_report, search, simulate, validate
from workflows.common import EXIT_ERROR, EXIT_USAGE, configure_logging, report_parse_error

log = logging.getLogger("fsmsolc")

COMMANDS: dict[Command, Callable[[CliConfig], int]] = {
    Command.VALIDATE: validate.run,
    Command.EMIT: emit.run,
    Command.SIMULATE: simulate.run,
    Command.SEARCH: search.run,
    Command.GAS_REPORT: gas_report.run,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; we reserve 2 for findings."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("-q", "--quiet", action="store_true")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("-o", "--output", dest="output_path", default=None)
    common.add_argument("--strict", action="store_true",
                        help="refuse instead of relaxing plugin requirements")
    common.add_argument("--creation-time", type=int, default=DEFAULT_CREATION_TIME)
    common.add_argument("--creator", default=DEFAULT_CREATOR)

    woven = argparse.ArgumentParser(add_help=False)
    woven.add_argument("--plugins", default="", help="comma list of locking,counter,timed,access")

    parser = _Parser(prog="fsmsolc", description="FSM → Solidity compiler and analyser")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(Command.VALIDATE.value, parents=[common], help="report diagnostics")
    p.add_argument("input_path")

    p = sub.add_parser(Command.EMIT.value, parents=[common, woven], help="generate Solidity")
    p.add_argument("input_path")
    p.add_argument("--pragma", default="^0.4.17")

    p = sub.add_parser(Command.SIMULATE.value, parents=[common, woven], help="run a schedule")
    p.add_argument("input_path")
    p.add_argument("--schedule", dest="schedule_path", required=True)

    p = sub.add_parser(Command.SEARCH.value, parents=[common, woven], help="bounded adversarial search")
    p.add_argument("input_path")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--schedule", dest="schedule_path", default=None,
                   help="check these calls for ordering dependence instead")

    p = sub.add_parser(Command.GAS_REPORT.value, parents=[common, woven], help="calibrated gas estimate")
    p.add_argument("input_path")
    p.add_argument("--tolerance", type=int, default=25)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> tuple[CliConfig, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in CliConfig.model_fields and v is not None}
    return CliConfig(**fields), args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg, args = parse_config(argv)
    except _UsageError as exc:
        print(f"fsmsolc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"fsmsolc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(verbose=args.verbose, quiet=args.quiet)
    try:
        return COMMANDS[cfg.command](cfg)
    except ContractParseError as exc:
        report_parse_error(exc, cfg.format)
        log.error("%s", exc)
    except FsmsolcError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        log.error("%s", exc)
    except (OSError, ValidationError, ValueError) as exc:
        log.error("%s", exc)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
