#!/usr/bin/env python
# -*- coding: utf-8 -*-
# cli.py

# Copyright (c) 2024, the Permpenta developers
#
# This file is part of Permpenta.
#
# Permpenta is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Permpenta is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Permpenta. If not, see <http://www.gnu.org/licenses/>

"""
Batch front end.

Exit codes: 0 when every check passed, 1 when a falsification was found, 2 for usage and precondition
errors, 3 when a resource cap was hit.
"""
import argparse
import logging
import sys
from typing import Callable, Dict, Optional, Sequence, Tuple

from . import __version__
from .config import FORMATS, Limits, RunConfig
from .exceptions import DomainError, InvariantViolation, LimitsError, NotListedError, PreconditionError
from .field_core import field_context
from .literature import LITERATURE_ROWS, check_literature_row
from .pentanomial import TABLE_ROWS, PentanomialSpec, construct, table_form_text
from .report import check_record, construction_record, envelope, permutation_record, render, thm3_record
from .verify import (check_deg1mu_lemma, check_mu_lemma, check_prop_cubic, check_table_row, criterion,
                     monomial_verdict, sweep_grid, verify_many, verify_spec, verify_thm3)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_LIMITS = 3


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _decimal(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="human")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--oracle-cap", type=int, help="largest q^2 evaluated exhaustively (default 2^24)")
    common.add_argument("--gcd-cap", type=int, help="largest dense degree for polynomial gcds")
    common.add_argument("--pair-cap", type=int, help="largest number of pairs the Moebius lemmas enumerate "
                                                     "before sampling (default 2^16)")
    common.add_argument("--seed", type=int, help="seed for sampled checks (default 0)")
    common.add_argument("--sample", type=int, help="sample size above the caps (default 10000)")
    common.add_argument("--workers", type=int, help="worker processes for the oracles (default 1)")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--theorem", type=int, choices=(1, 2), default=1)
    spec.add_argument("--z", type=int, choices=(1, 2), default=1)
    spec.add_argument("-p", type=int, default=2, help="the characteristic")
    spec.add_argument("-k", type=int, default=2, help="q = p^k")
    spec.add_argument("--iq", dest="a", type=int, default=0, help="Q = p^iq")
    spec.add_argument("--ir", dest="b", type=int, default=0, help="R = p^ir")
    spec.add_argument("--is", dest="c", type=int, default=0, help="S = p^is")
    spec.add_argument("--r", type=_decimal, help="defaults to Q+R+S")

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("-p", type=int, default=2, help="the characteristic")
    field.add_argument("-k", type=int, default=2, help="q = p^k")

    parser = argparse.ArgumentParser(prog="permpenta",
                                     description="Permutation pentanomials over F_{q^2}: construction and "
                                                 "exhaustive verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("construct", parents=[common, spec], help="print B_z and f for one spec")
    subparsers.add_parser("verify", parents=[common, spec], help="criterion, mu_{q+1} reduction and brute force")
    subparsers.add_parser("decompose", parents=[common, spec], help="check f = rho o g o eta pointwise")
    subparsers.add_parser("mu-check", parents=[common, field], help="Moebius-map lemmas on mu_{q+1}")

    sweep = subparsers.add_parser("sweep", parents=[common], help="criterion against both oracles on a grid")
    sweep.add_argument("--primes", type=_int_list, default=(2,), help="comma separated, e.g. 2,5,7")
    sweep.add_argument("--kmax", type=int, default=2)
    sweep.add_argument("--imax", type=int, default=2, help="largest exponent index for Q, R, S")
    sweep.add_argument("--max-log2-q2", type=int, default=20)
    sweep.add_argument("--r-steps", type=int, default=2, help="r = Q+R+S + j(q+1) for j below this")
    sweep.add_argument("--z-values", type=_int_list, default=(1, 2))

    tables = subparsers.add_parser("tables", parents=[common], help="list the closed forms and check them")
    tables.add_argument("-p", type=int, help="check every row in this characteristic")
    tables.add_argument("-k", type=int, default=1)

    literature = subparsers.add_parser("literature", parents=[common], help="published special cases")
    literature.add_argument("--k-values", type=_int_list, default=(1, 2, 3, 4))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    limits = Limits.from_env(oracle_cap=args.oracle_cap, gcd_degree_cap=args.gcd_cap,
                             pair_exhaustive_cap=args.pair_cap, seed=args.seed, sample_size=args.sample,
                             workers=args.workers)
    values = {key: getattr(args, key) for key in ("theorem", "z", "a", "b", "c", "r", "primes", "kmax", "imax",
                                                  "max_log2_q2", "r_steps", "z_values", "k_values")
              if getattr(args, key, None) is not None}
    for key in ("p", "k"):
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    return RunConfig(command=args.command, limits=limits, output_format=args.output_format, out=args.out,
                     **values).validate()


def _spec(cfg: RunConfig) -> PentanomialSpec:
    return PentanomialSpec(cfg.theorem, cfg.z, cfg.p, cfg.k, cfg.a, cfg.b, cfg.c, cfg.r)


# every command returns (report, falsified)
CommandResult = Tuple[dict, bool]


def cmd_construct(cfg: RunConfig) -> CommandResult:
    con = construct(_spec(cfg))
    return envelope("construct", [construction_record(con)]), False


def cmd_verify(cfg: RunConfig) -> CommandResult:
    result = verify_spec(_spec(cfg), cfg.limits)
    summary = {"agree": result.agree, "skipped": result.skipped}
    return envelope("verify", [permutation_record(result)], summary), not result.agree


def cmd_sweep(cfg: RunConfig) -> CommandResult:
    specs = list(sweep_grid(cfg.primes, cfg.kmax, cfg.imax, cfg.max_log2_q2, cfg.r_steps, cfg.z_values))
    logger.info("sweeping %d specs", len(specs))
    results = verify_many(specs, cfg.limits)
    disagreements = sum(1 for result in results if not result.agree)
    summary = {"records": len(results), "agree": len(results) - disagreements, "disagree": disagreements,
               "skipped": sum(1 for result in results if result.skipped),
               "permutations": sum(1 for result in results if result.criterion_verdict)}
    return envelope("sweep", [permutation_record(result) for result in results], summary), disagreements > 0


def cmd_decompose(cfg: RunConfig) -> CommandResult:
    spec = _spec(cfg)
    result = verify_thm3(spec, limits=cfg.limits)
    monomial, verdict = monomial_verdict(spec), criterion(spec)
    if monomial != verdict:
        logger.error("monomial verdict %s disagrees with the criterion %s for %s", monomial, verdict, spec.label())
    record = thm3_record(result, monomial, verdict)
    return envelope("decompose", [record], {"passed": record["passed"]}), not record["passed"]


def _checks_envelope(command: str, reports) -> CommandResult:
    records = [check_record(report) for report in reports]
    failed = sum(1 for report in reports if not report.passed)
    return envelope(command, records, {"checks": len(records), "failed": failed}), failed > 0


def cmd_mu_check(cfg: RunConfig) -> CommandResult:
    ctx = field_context(cfg.p, cfg.k)
    return _checks_envelope("mu-check", [check_prop_cubic(ctx, cfg.limits), check_deg1mu_lemma(ctx, cfg.limits),
                                         check_mu_lemma(ctx, cfg.limits)])


def cmd_tables(cfg: RunConfig, check_p: Optional[int]) -> CommandResult:
    if check_p is None:
        records = [{"kind": "check", "name": f"T{int(theorem)} {sigma}", "passed": True, "checked": 0,
                    "failure_count": 0, "failures": [],
                    "details": {"B_1": table_form_text(theorem, 1, sigma), "B_2": table_form_text(theorem, 2, sigma)}}
                   for theorem, sigma in TABLE_ROWS]
        return envelope("tables", records, {"rows": len(records)}), False
    return _checks_envelope("tables", [check_table_row(theorem, sigma, check_p, cfg.k)
                                       for theorem, sigma in TABLE_ROWS])


def cmd_literature(cfg: RunConfig) -> CommandResult:
    return _checks_envelope("literature", [check_literature_row(row, k, cfg.limits)
                                           for row in LITERATURE_ROWS for k in cfg.k_values])


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "decompose": cmd_decompose,
    "mu-check": cmd_mu_check,
    "literature": cmd_literature,
}


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if cfg.command == "tables":
            report, falsified = cmd_tables(cfg, args.p)
        else:
            report, falsified = COMMANDS[cfg.command](cfg)
    except (PreconditionError, DomainError, NotListedError) as err:
        print(f"permpenta: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except LimitsError as err:
        print(f"permpenta: limit exceeded: {err}", file=sys.stderr)
        return EXIT_LIMITS
    except InvariantViolation as err:
        logger.error("invariant violated: %s", err)
        return EXIT_FALSIFIED
    _emit(render(report, cfg.output_format), cfg.out)
    return EXIT_FALSIFIED if falsified else EXIT_OK