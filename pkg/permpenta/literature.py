#!/usr/bin/env python
# -*- coding: utf-8 -*-
# literature.py

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
Published characteristic-2 pentanomials that are literally members of the two families, used as regression
fixtures. Each row fixes the family, z, Q, R, S and r as a function of q; some rows only claim a permutation
under a condition on q.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

from .config import DEFAULT_LIMITS, Limits
from .pentanomial import PentanomialSpec, Theorem
from .verify import CheckReport, verify_spec

logger = logging.getLogger(__name__)


def _log2(value: int) -> int:
    return value.bit_length() - 1


@dataclass(frozen=True)
class LiteratureRow:
    key: str
    theorem: Theorem
    z: int
    Q: int
    R: int
    S: int
    r_text: str
    r_of_q: Callable[[int], int]
    condition_text: str = ""
    condition: Optional[Callable[[int], bool]] = None

    def spec(self, k: int) -> PentanomialSpec:
        q = 2 ** k
        return PentanomialSpec(self.theorem, self.z, 2, k, _log2(self.Q), _log2(self.R), _log2(self.S),
                               self.r_of_q(q))

    def applies(self, q: int) -> bool:
        return self.condition is None or self.condition(q)


def _q_is_2_mod_3(q: int) -> bool:
    return q % 3 == 2


LITERATURE_ROWS = (
    LiteratureRow("L01", Theorem.T1, 1, 1, 1, 1, "3", lambda q: 3),
    LiteratureRow("L02", Theorem.T1, 2, 1, 1, 1, "3", lambda q: 3),
    LiteratureRow("L03", Theorem.T1, 1, 1, 1, 1, "q+4", lambda q: q + 4, "q≡2 (mod 3)", _q_is_2_mod_3),
    LiteratureRow("L04", Theorem.T1, 2, 1, 1, 1, "q^2-q+1", lambda q: q * q - q + 1, "q≡2 (mod 3)", _q_is_2_mod_3),
    LiteratureRow("L05", Theorem.T1, 1, 1, 1, 1, "q^2-q+1", lambda q: q * q - q + 1),
    LiteratureRow("L06", Theorem.T1, 2, 1, 2, 2, "5", lambda q: 5),
    LiteratureRow("L07", Theorem.T2, 1, 2, 1, 2, "5", lambda q: 5),
    LiteratureRow("L08", Theorem.T2, 2, 2, 1, 2, "5", lambda q: 5),
    LiteratureRow("L09", Theorem.T2, 2, 2, 1, 2, "q^2-2q+2", lambda q: q * q - 2 * q + 2),
    LiteratureRow("L10", Theorem.T1, 2, 2, 2, 2, "6", lambda q: 6),
    LiteratureRow("L11", Theorem.T1, 1, 4, 1, 2, "7", lambda q: 7),
    LiteratureRow("L12", Theorem.T2, 2, 4, 1, 2, "7", lambda q: 7),
    LiteratureRow("L13", Theorem.T1, 2, 4, 1, 2, "q^2-q+5", lambda q: q * q - q + 5),
    LiteratureRow("L14", Theorem.T2, 2, 4, 1, 4, "q^2-q+7", lambda q: q * q - q + 7),
    LiteratureRow("L15", Theorem.T1, 2, 1, 8, 2, "11", lambda q: 11),
    LiteratureRow("L16", Theorem.T1, 1, 4, 1, 8, "13", lambda q: 13),
    LiteratureRow("L17", Theorem.T2, 2, 4, 1, 8, "13", lambda q: 13),
)


def literature_row(key: str) -> LiteratureRow:
    for row in LITERATURE_ROWS:
        if row.key == key:
            return row
    raise KeyError(key)


def check_literature_row(row: LiteratureRow, k: int, limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ Instantiate the row at q = 2^k: the three verdicts must agree, and where the row's condition holds
    the criterion must say it permutes. """
    report = CheckReport(f"literature {row.key}")
    q = 2 ** k
    spec = row.spec(k)
    result = verify_spec(spec, limits)
    report.checked = 1
    report.details.update(spec=spec.label(), r=row.r_text, condition=row.condition_text,
                          criterion=result.criterion_verdict, oracle=result.oracle_verdict, mu=result.mu_verdict)
    if not result.agree:
        report.fail(f"verdicts disagree at q={q}: criterion={result.criterion_verdict} "
                    f"mu={result.mu_verdict} oracle={result.oracle_verdict}")
    if row.condition is not None and row.applies(q) and not result.criterion_verdict:
        report.fail(f"row claims a permutation for {row.condition_text}, criterion rejects q={q}")
    return report
