#!/usr/bin/env python
# -*- coding: utf-8 -*-
# report.py

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

""" Turn construction and verification results into report records and render them as text, JSON or CSV. """
import csv
import io
import json
from typing import Dict, List, Optional

from .config import REPORT_SCHEMA
from .pentanomial import Construction, PentanomialSpec, coefficient_class
from .sparse_poly import SparsePoly
from .verify import CheckReport, PermutationReport, Thm3Report

SWEEP_COLUMNS = ("p", "k", "a", "b", "c", "r", "theorem", "z", "criterion", "oracle", "mu", "agree", "elapsed_ms")


def poly_to_json(poly: SparsePoly) -> List[list]:
    """ [[exponent as decimal string, coefficient code], ...] with descending exponents. """
    return [[str(exponent), coefficient.code] for exponent, coefficient in poly.items()]


def spec_to_dict(spec: PentanomialSpec) -> Dict[str, object]:
    return {"theorem": int(spec.theorem), "z": spec.z, "p": spec.p, "k": spec.k, "a": spec.a, "b": spec.b,
            "c": spec.c, "Q": spec.Q, "R": spec.R, "S": spec.S, "r": str(spec.r)}


def construction_record(con: Construction) -> Dict[str, object]:
    B = con.B
    return {
        "kind": "construct",
        "spec": spec_to_dict(con.spec),
        "modulus": list(con.ctx.modulus.coeffs),
        "omega": con.omega.code,
        "beta": con.beta.code,
        "sigma": list(con.sigma),
        "B": poly_to_json(B),
        "f": poly_to_json(con.f),
        "terms": len(B),
        "coefficient_class": coefficient_class(B),
    }


def permutation_record(report: PermutationReport) -> Dict[str, object]:
    return {
        "kind": "verify",
        "spec": spec_to_dict(report.spec),
        "criterion": report.criterion_verdict,
        "oracle": report.oracle_verdict,
        "mu": report.mu_verdict,
        "agree": report.agree,
        "e": report.e,
        "gcd": dict(report.gcd_details),
        "elapsed_ms": round(report.elapsed_ms, 3),
    }


def thm3_record(report: Thm3Report, monomial: bool, criterion: bool) -> Dict[str, object]:
    return {
        "kind": "decompose",
        "spec": spec_to_dict(report.spec),
        "branch": report.branch,
        "matched": report.matched,
        "checked": report.checked,
        "exhaustive": report.exhaustive,
        "seed": report.seed,
        "eta_linear": report.eta_linear,
        "rho_linear": report.rho_linear,
        "eta_bijective": report.eta_bijective,
        "rho_bijective": report.rho_bijective,
        "monomial_verdict": monomial,
        "criterion": criterion,
        "passed": report.passed and monomial == criterion,
        "summary": report.summary(),
        "failures": list(report.failures),
    }


def check_record(report: CheckReport) -> Dict[str, object]:
    return {
        "kind": "check",
        "name": report.name,
        "passed": report.passed,
        "checked": report.checked,
        "failure_count": report.failure_count,
        "failures": list(report.failures),
        "details": {key: value for key, value in report.details.items()},
    }


def envelope(command: str, records: List[dict], summary: Optional[dict] = None) -> Dict[str, object]:
    return {"schema": REPORT_SCHEMA, "command": command, "records": records, "summary": summary or {}}


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def sweep_row(record: dict) -> Dict[str, str]:
    spec = record["spec"]
    row = {key: spec[key] for key in ("p", "k", "a", "b", "c", "r", "theorem", "z")}
    row.update({key: record[key] for key in ("criterion", "oracle", "mu", "agree", "elapsed_ms")})
    return {key: _csv_value(value) for key, value in row.items()}


def to_csv(report: dict) -> str:
    buffer = io.StringIO()
    records = report["records"]
    if report["command"] == "sweep" or (records and all(record["kind"] == "verify" for record in records)):
        writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for record in records:
            writer.writerow(sweep_row(record))
        return buffer.getvalue()
    columns = []
    for record in records:
        columns.extend(key for key in record if key not in columns)
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow({key: _csv_value(record.get(key)) for key in columns})
    return buffer.getvalue()


def _spec_text(spec: dict) -> str:
    return (f"T{spec['theorem']} z={spec['z']} p={spec['p']} k={spec['k']} "
            f"Q={spec['Q']} R={spec['R']} S={spec['S']} r={spec['r']}")


def _poly_text(terms: List[list]) -> str:
    return " + ".join(f"[{code}]X^{exponent}" for exponent, code in terms) or "0"


def _verdict(value) -> str:
    return "-" if value is None else ("yes" if value else "no")


def _human_record(record: dict) -> List[str]:
    kind = record["kind"]
    if kind == "construct":
        flags = record["coefficient_class"]
        return [_spec_text(record["spec"]),
                f"  omega = [{record['omega']}]  beta = [{record['beta']}]  sigma = {tuple(record['sigma'])}",
                f"  B = {_poly_text(record['B'])}",
                f"  f = {_poly_text(record['f'])}",
                f"  terms: {record['terms']}  prime field: {_verdict(flags['prime_field'])}  "
                f"coefficients in {{1,-1}}: {_verdict(flags['plus_minus_one'])}"]
    if kind == "verify":
        status = "agree" if record["agree"] else "DISAGREE"
        return [f"{_spec_text(record['spec'])}: criterion {_verdict(record['criterion'])}, "
                f"mu {_verdict(record['mu'])}, oracle {_verdict(record['oracle'])} ({status})"]
    if kind == "decompose":
        lines = [_spec_text(record["spec"]), f"  {record['summary']}",
                 f"  eta linear: {_verdict(record['eta_linear'])}  bijective: {_verdict(record['eta_bijective'])}",
                 f"  rho linear: {_verdict(record['rho_linear'])}  bijective: {_verdict(record['rho_bijective'])}",
                 f"  monomial permutes: {_verdict(record['monomial_verdict'])}  "
                 f"criterion: {_verdict(record['criterion'])}"]
        return lines + [f"  {failure}" for failure in record["failures"]]
    lines = [f"{record['name']}: {'passed' if record['passed'] else 'FAILED'} ({record['checked']} checked)"]
    lines += [f"  {key}: {value}" for key, value in record["details"].items()]
    return lines + [f"  {failure}" for failure in record["failures"]]


def to_human(report: dict) -> str:
    lines = []
    for record in report["records"]:
        lines.extend(_human_record(record))
    summary = report["summary"]
    if summary:
        lines.append(", ".join(f"{key}: {value}" for key, value in summary.items()))
    return "\n".join(lines) + "\n"


def render(report: dict, output_format: str) -> str:
    if output_format == "json":
        return to_json(report)
    if output_format == "csv":
        return to_csv(report)
    return to_human(report)
