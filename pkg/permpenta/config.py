#!/usr/bin/env python
# -*- coding: utf-8 -*-
# config.py

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

""" Resource caps, sampling parameters and the validated command line configuration. """
import dataclasses
import os
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from .exceptions import PreconditionError

ENV_ORACLE_CAP = "PERMPENTA_ORACLE_CAP"
REPORT_SCHEMA = "permpenta-report-v1"

COMMANDS = ("construct", "verify", "sweep", "mu-check", "decompose", "tables", "literature")
FORMATS = ("human", "json", "csv")


@dataclass(frozen=True)
class Limits:
    """ Caps and sampling parameters shared by every exhaustive check.

    Parameters
    ----------
    oracle_cap : int
        largest q^2 for which a whole-field evaluation is attempted.
    gcd_degree_cap : int
        largest dense degree handed to the Euclidean algorithm.
    linearity_exhaustive_cap : int
        largest q^2 for which additivity is checked on all pairs.
    pair_exhaustive_cap : int
        largest number of (alpha, beta) pairs the Moebius lemmas enumerate before sampling.
    """
    oracle_cap: int = 2 ** 24
    gcd_degree_cap: int = 2 ** 20
    linearity_exhaustive_cap: int = 2 ** 12
    pair_exhaustive_cap: int = 2 ** 16
    sample_size: int = 10 ** 4
    lemma_sample_size: int = 1000
    seed: int = 0
    workers: int = 1
    chunk_size: int = 2 ** 16

    def __post_init__(self):
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise PreconditionError(f"{item.name} must be an integer, got {value!r}")
            if value < (0 if item.name == "seed" else 1):
                raise PreconditionError(f"{item.name} out of range: {value}")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, **overrides) -> "Limits":
        """ Defaults, overridden by the environment, overridden by explicit (non-None) keyword arguments. """
        if environ is None:
            environ = os.environ
        values = {}
        raw = environ.get(ENV_ORACLE_CAP)
        if raw is not None and raw.strip() != "":
            try:
                values["oracle_cap"] = int(raw.strip(), 10)
            except ValueError:
                raise PreconditionError(f"{ENV_ORACLE_CAP} is not a decimal integer: {raw!r}")
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def replace(self, **changes) -> "Limits":
        return dataclasses.replace(self, **{key: value for key, value in changes.items() if value is not None})


DEFAULT_LIMITS = Limits()


@dataclass
class RunConfig:
    """ The validated settings of one command line invocation. """
    command: str
    theorem: int = 1
    z: int = 1
    p: int = 2
    k: int = 2
    a: int = 0
    b: int = 0
    c: int = 0
    r: Optional[int] = None
    limits: Limits = field(default_factory=Limits)
    output_format: str = "human"
    out: Optional[str] = None
    primes: Tuple[int, ...] = (2,)
    kmax: int = 2
    imax: int = 2
    max_log2_q2: int = 20
    r_steps: int = 2
    z_values: Tuple[int, ...] = (1, 2)
    k_values: Tuple[int, ...] = (1, 2, 3, 4)

    def validate(self) -> "RunConfig":
        """ Check every numeric field before any field arithmetic happens. """
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise PreconditionError(f"unknown output format {self.output_format!r}")
        if self.theorem not in (1, 2):
            raise PreconditionError(f"theorem must be 1 or 2, got {self.theorem}")
        if self.z not in (1, 2) or any(z not in (1, 2) for z in self.z_values):
            raise PreconditionError("z must be 1 or 2")
        if self.p < 2:
            raise PreconditionError(f"p must be a prime, got {self.p}")
        if self.k < 1 or self.kmax < 0 or any(k < 1 for k in self.k_values):
            raise PreconditionError("k must be a positive integer")
        if min(self.a, self.b, self.c) < 0:
            raise PreconditionError("exponent indices must be nonnegative")
        if self.r is not None and self.r < 1:
            raise PreconditionError(f"r must be positive, got {self.r}")
        if self.r_steps < 1 or self.max_log2_q2 < 1:
            raise PreconditionError("sweep bounds must be positive")
        return self
