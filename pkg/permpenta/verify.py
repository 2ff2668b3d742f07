#!/usr/bin/env python
# -*- coding: utf-8 -*-
# verify.py

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
Three independent permutation verdicts (the gcd criterion, the reduction to the unit circle mu_{q+1} and a
brute-force evaluation over the whole field), the Moebius-map lemmas on mu_{q+1}, and the pointwise check of
the linear equivalences f = rho o g o eta.

Falsifications never raise: they are collected in the returned reports and logged at ERROR level.
"""
import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import batch
from .config import DEFAULT_LIMITS, Limits
from .exceptions import LimitsError, PreconditionError, UnsupportedCharacteristicError
from .field_core import (INFINITY, ExtElem, ExtFieldCtx, FpPoly, MobiusMap, PrimeModulus, ProjPoint, field_context,
                         find_omega, log_table, mobius_eval, mu_codes, subfield_codes)
from .pentanomial import (Construction, PentanomialSpec, ResidueTriple, Theorem, build_Bz, canonicalize_sigma,
                          construct, instantiate_row, table_closed_form)
from .sparse_poly import SparsePoly, poly_gcd_ext

logger = logging.getLogger(__name__)

# failures listed in a CheckReport; the count keeps going
MAX_LISTED_FAILURES = 10


@dataclass
class PermutationReport:
    """ The verdicts for one spec; any two verdicts that are present must agree. """
    spec: PentanomialSpec
    criterion_verdict: bool
    oracle_verdict: Optional[bool] = None
    mu_verdict: Optional[bool] = None
    e: Optional[int] = None
    gcd_details: Dict[str, int] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def verdicts(self) -> List[bool]:
        return [v for v in (self.criterion_verdict, self.oracle_verdict, self.mu_verdict) if v is not None]

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts)) <= 1

    @property
    def skipped(self) -> bool:
        return self.oracle_verdict is None

    @property
    def elapsed_ms(self) -> float:
        return sum(self.timing.values())


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    failure_count: int = 0
    details: Dict[str, object] = field(default_factory=dict)

    def fail(self, message: str):
        self.passed = False
        self.failure_count += 1
        if len(self.failures) < MAX_LISTED_FAILURES:
            self.failures.append(message)
        logger.error("%s: %s", self.name, message)

    def __bool__(self):
        return self.passed


@dataclass
class Thm3Report:
    """ Outcome of the pointwise check f = rho o g o eta. """
    spec: PentanomialSpec
    branch: str
    matched: int = 0
    checked: int = 0
    exhaustive: bool = True
    eta_linear: bool = True
    rho_linear: bool = True
    eta_bijective: Optional[bool] = None
    rho_bijective: Optional[bool] = None
    seed: Optional[int] = None
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.matched == self.checked and self.eta_linear and self.rho_linear
                and self.eta_bijective is not False and self.rho_bijective is not False)

    def summary(self) -> str:
        return f"{self.branch} branch, equality holds on {self.matched}/{self.checked} points"

    def __bool__(self):
        return self.passed


def _rng(limits: Limits) -> np.random.Generator:
    return np.random.default_rng(limits.seed)


def _partition(total: int, size: int) -> List[Tuple[int, int]]:
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _check_cap(ctx: ExtFieldCtx, limits: Limits):
    if ctx.q2 > limits.oracle_cap:
        raise LimitsError(f"q^2 = {ctx.q2} exceeds the oracle cap of {limits.oracle_cap}")


def _construction(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx]) -> Construction:
    return construct(spec) if ctx is None else construct(spec, find_omega(ctx))


# criterion

def criterion_details(spec: PentanomialSpec) -> Dict[str, int]:
    """ The gcd values the criterion of the spec's family looks at. """
    q = spec.q
    if spec.theorem == Theorem.T1:
        return {"gcd(r,q-1)": gcd(spec.r, q - 1), "gcd(Q+R+S,q+e)": gcd(spec.n, q + spec.e)}
    return {"q mod 3": q % 3, "gcd(r,q-1)": gcd(spec.r, q - 1),
            "gcd(Q-R+S,q+1)": gcd(abs(spec.Q - spec.R + spec.S), q + 1)}


def criterion_T1(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None) -> bool:
    """ gcd(r, q-1) = 1 = gcd(Q+R+S, q+e). """
    if spec.theorem != Theorem.T1:
        raise PreconditionError("criterion_T1 needs a spec of the first family")
    details = criterion_details(spec)
    return details["gcd(r,q-1)"] == 1 and details["gcd(Q+R+S,q+e)"] == 1


def criterion_T2(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None) -> bool:
    """ q = 1 (mod 3) and gcd(r, q-1) = 1 = gcd(|Q-R+S|, q+1). """
    if spec.theorem != Theorem.T2:
        raise PreconditionError("criterion_T2 needs a spec of the second family")
    details = criterion_details(spec)
    return details["q mod 3"] == 1 and details["gcd(r,q-1)"] == 1 and details["gcd(Q-R+S,q+1)"] == 1


def criterion(spec: PentanomialSpec) -> bool:
    return criterion_T1(spec) if spec.theorem == Theorem.T1 else criterion_T2(spec)


# whole-field oracle

@lru_cache(maxsize=16)
def _worker_context(p: int, k: int, modulus: Tuple[int, ...]) -> ExtFieldCtx:
    return ExtFieldCtx(p, k, FpPoly(modulus, p))


def _code_terms(f: SparsePoly) -> List[Tuple[int, int]]:
    return [(exponent, coefficient.code) for exponent, coefficient in f.terms.items()]


def _image_codes(task) -> np.ndarray:
    """ Codes of f on one contiguous range of elements; runs in worker processes. """
    p, k, modulus, terms, start, stop = task
    ctx = _worker_context(p, k, modulus)
    return log_table(ctx).evaluate(terms, np.arange(start, stop, dtype=np.int64))


def _map(function: Callable, tasks: Sequence, workers: int) -> Iterator:
    """ map() in order, spread over a process pool when more than one worker is configured. """
    if workers <= 1 or len(tasks) <= 1:
        yield from map(function, tasks)
        return
    executor = ProcessPoolExecutor(max_workers=workers)
    try:
        yield from executor.map(function, tasks)
    finally:
        # a consumer that stops early leaves pending tasks behind
        executor.shutdown(wait=True, cancel_futures=True)


def field_images(f: SparsePoly, ctx: ExtFieldCtx) -> np.ndarray:
    """ Codes of f(x) for every code x of F_{q^2}, in order. """
    return log_table(ctx).evaluate(_code_terms(f), np.arange(ctx.q2, dtype=np.int64))


def brute_force_permutes(f: SparsePoly, ctx: ExtFieldCtx, limits: Limits = DEFAULT_LIMITS) -> bool:
    """ Evaluate f on every element of F_{q^2} and track the images in an occupancy table. """
    _check_cap(ctx, limits)
    tasks = [(int(ctx.p), ctx.k, ctx.modulus.coeffs, _code_terms(f), start, stop)
             for start, stop in _partition(ctx.q2, limits.chunk_size)]
    occupied = np.zeros(ctx.q2, dtype=bool)
    for codes in _map(_image_codes, tasks, limits.workers):
        if occupied[codes].any():
            return False
        occupied[codes] = True
    # q^2 images fill the table iff no two of them coincide
    return bool(occupied.all())


# reduction to mu_{q+1}

def _mu_points(ctx: ExtFieldCtx, limits: Limits) -> np.ndarray:
    return batch.decode(ctx, mu_codes(ctx, limits.oracle_cap))


def _in_mu(ctx: ExtFieldCtx, rows: np.ndarray) -> np.ndarray:
    return batch.is_one(ctx, batch.mul(ctx, batch.frobenius(ctx, rows, ctx.k), rows))


def mu_reduction_permutes(spec: PentanomialSpec, B: SparsePoly, ctx: ExtFieldCtx,
                          limits: Limits = DEFAULT_LIMITS) -> bool:
    """ gcd(r, q-1) = 1 and x -> x^r B(x)^(q-1) permutes mu_{q+1}. """
    if gcd(spec.r, ctx.q - 1) != 1:
        return False
    mu = _mu_points(ctx, limits)
    values = B.evaluate_batch(mu, order=ctx.q + 1)
    if batch.is_zero(values).any():
        return False
    image = batch.mul(ctx, batch.powers(ctx, mu, spec.r, order=ctx.q + 1), batch.powers(ctx, values, ctx.q - 1))
    if not _in_mu(ctx, image).all():
        return False
    return np.unique(batch.encode(ctx, image)).size == ctx.q + 1


# Moebius maps on mu_{q+1} and P^1(F_q)

def _infinity_code(ctx: ExtFieldCtx) -> int:
    return ctx.q2


def _point_code(ctx: ExtFieldCtx, point: ProjPoint) -> int:
    return _infinity_code(ctx) if point.is_infinity else point.value.code


def _mobius_codes(ctx: ExtFieldCtx, a, b, c, d, points) -> np.ndarray:
    """ Codes of (a x + b)/(c x + d) with coefficient and point codes broadcast together; poles give q^2. """
    table = log_table(ctx)
    numerator = batch.add_codes(ctx, table.mul(a, points), b)
    denominator = batch.add_codes(ctx, table.mul(c, points), d)
    quotient = table.mul(numerator, table.inverse(denominator))
    return np.where(denominator == 0, _infinity_code(ctx), quotient)


def _map_codes(ctx: ExtFieldCtx, m: MobiusMap, points: np.ndarray, with_infinity: bool = False) -> np.ndarray:
    """ Codes of m on finite points (and on infinity last). """
    codes = _mobius_codes(ctx, m.a.code, m.b.code, m.c.code, m.d.code, points)
    if with_infinity:
        codes = np.append(codes, _point_code(ctx, mobius_eval(ctx, m, INFINITY)))
    return codes


def _same_sets(images: np.ndarray, expected: np.ndarray) -> np.ndarray:
    """ Whether each row of images is a rearrangement of the sorted codes in expected. """
    return (np.sort(images, axis=-1) == expected).all(axis=-1)


class _LemmaDomain:
    """ mu_{q+1} and P^1(F_q) as sorted code arrays. """

    def __init__(self, ctx: ExtFieldCtx, limits: Limits):
        self.ctx = ctx
        self.mu = mu_codes(ctx, limits.oracle_cap)
        self.subfield = subfield_codes(ctx, limits.oracle_cap)
        self.line = np.append(self.subfield, _infinity_code(ctx))


def _pairs(ctx: ExtFieldCtx, first: np.ndarray, second: np.ndarray,
           limits: Limits) -> Tuple[Iterator[Tuple[np.ndarray, np.ndarray]], bool]:
    """ Blocks of code pairs: all pairs when there are few enough, otherwise a seeded sample. """
    total = first.size * second.size
    if total <= limits.pair_exhaustive_cap:
        i, j = np.divmod(np.arange(total, dtype=np.int64), second.size)
        exhaustive = True
    else:
        rng = _rng(limits)
        i = rng.integers(0, first.size, size=limits.lemma_sample_size)
        j = rng.integers(0, second.size, size=limits.lemma_sample_size)
        logger.warning("sampling %d of %d pairs", limits.lemma_sample_size, total)
        exhaustive = False
    # one block holds about chunk_size images
    size = max(1, limits.chunk_size // (ctx.q + 1))
    blocks = ((first[i[start:stop]], second[j[start:stop]]) for start, stop in _partition(i.size, size))
    return blocks, exhaustive


def check_deg1mu_lemma(ctx: ExtFieldCtx, limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ (beta^q X + alpha^q)/(alpha X + beta) permutes mu_{q+1} whenever alpha^(q+1) != beta^(q+1). """
    report = CheckReport("deg1mu lemma")
    domain = _LemmaDomain(ctx, limits)
    table = log_table(ctx)
    codes = np.arange(ctx.q2, dtype=np.int64)
    blocks, report.details["exhaustive"] = _pairs(ctx, codes, codes, limits)
    for alpha, beta in blocks:
        keep = table.power(alpha, ctx.q + 1) != table.power(beta, ctx.q + 1)
        alpha, beta = alpha[keep][:, np.newaxis], beta[keep][:, np.newaxis]
        images = _mobius_codes(ctx, table.power(beta, ctx.q), table.power(alpha, ctx.q), alpha, beta, domain.mu)
        permutes = _same_sets(images, domain.mu)
        report.checked += int(keep.sum())
        for a, b in zip(alpha[~permutes, 0], beta[~permutes, 0]):
            report.fail(f"alpha={a} beta={b} does not permute mu_{ctx.q + 1}")
    return report


def check_mu_lemma(ctx: ExtFieldCtx, limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ (alpha X + beta alpha^q)/(X + beta) maps mu_{q+1} onto P^1(F_q) for alpha outside F_q, beta in mu_{q+1}. """
    report = CheckReport("mu lemma")
    domain = _LemmaDomain(ctx, limits)
    table = log_table(ctx)
    alphas = np.setdiff1d(np.arange(ctx.q2, dtype=np.int64), domain.subfield)
    blocks, report.details["exhaustive"] = _pairs(ctx, alphas, domain.mu, limits)
    for alpha, beta in blocks:
        alpha, beta = alpha[:, np.newaxis], beta[:, np.newaxis]
        images = _mobius_codes(ctx, alpha, table.mul(beta, table.power(alpha, ctx.q)), 1, beta, domain.mu)
        onto = _same_sets(images, domain.line)
        report.checked += int(alpha.shape[0])
        for a, b in zip(alpha[~onto, 0], beta[~onto, 0]):
            report.fail(f"alpha={a} beta={b} does not map mu_{ctx.q + 1} onto P^1(F_{ctx.q})")
    return report


def cubic_maps(ctx: ExtFieldCtx, omega: Optional[ExtElem] = None) -> Tuple[MobiusMap, MobiusMap]:
    """ rho = (X - omega)/(-omega X + 1) and eta = (X + omega)/(omega X + 1). """
    if omega is None:
        omega = find_omega(ctx)
    rho = MobiusMap(ctx.one, -omega, -omega, ctx.one)
    eta = MobiusMap(ctx.one, omega, omega, ctx.one)
    return rho, eta


def check_prop_cubic(ctx: ExtFieldCtx, limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ rho and eta permute mu_{q+1} if q = 1 (mod 3) and swap it with P^1(F_q) if q = 2 (mod 3); rho o eta = id. """
    report = CheckReport("cubic Moebius maps")
    domain = _LemmaDomain(ctx, limits)
    rho, eta = cubic_maps(ctx)
    report.details["q mod 3"] = ctx.q % 3
    for name, m in (("rho", rho), ("eta", eta)):
        on_mu = _map_codes(ctx, m, domain.mu)
        report.checked += 1
        if ctx.q % 3 == 1:
            if not _same_sets(on_mu, domain.mu):
                report.fail(f"{name} does not permute mu_{ctx.q + 1}")
            continue
        if not _same_sets(on_mu, domain.line):
            report.fail(f"{name} does not map mu_{ctx.q + 1} onto P^1(F_{ctx.q})")
        report.checked += 1
        if not _same_sets(_map_codes(ctx, m, domain.subfield, with_infinity=True), domain.mu):
            report.fail(f"{name} does not map P^1(F_{ctx.q}) onto mu_{ctx.q + 1}")

    composite = rho.compose(eta)
    if not (composite.b.is_zero() and composite.c.is_zero() and composite.a == composite.d):
        report.fail("rho o eta is not the identity map")
    codes = np.arange(ctx.q2, dtype=np.int64)
    images = _map_codes(ctx, composite, codes, with_infinity=True)
    report.checked += images.size
    if not np.array_equal(images, np.append(codes, _infinity_code(ctx))):
        report.fail("rho(eta(x)) != x on the projective line")
    return report


# consequences of the construction on mu_{q+1}

def check_ratio_identity(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None,
                         limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ x^r B_z(x)^(q-1) = B_{3-z}(x) / B_z(x) at every x in mu_{q+1} with B_z(x) != 0. """
    con = _construction(spec, ctx)
    ctx = con.ctx
    report = CheckReport("ratio identity")
    B, other = (con.B1, con.B2) if spec.z == 1 else (con.B2, con.B1)
    mu = _mu_points(ctx, limits)
    values = B.evaluate_batch(mu, order=ctx.q + 1)
    nonzero = ~batch.is_zero(values)
    mu, values = mu[nonzero], values[nonzero]
    left = batch.mul(ctx, batch.powers(ctx, mu, spec.r, order=ctx.q + 1), batch.powers(ctx, values, ctx.q))
    right = other.evaluate_batch(mu, order=ctx.q + 1)
    report.checked = int(mu.shape[0])
    mismatched = ~batch.equal(left, right)
    for code in batch.encode(ctx, mu[mismatched]):
        report.fail(f"identity fails at x={int(code)} for {spec.label()}")
    return report


def check_t2_roots(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None,
                   limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    """ B_z of the second family has a root in mu_{q+1} iff q = 2 (mod 3); B_z of the first never has one. """
    con = _construction(spec, ctx)
    ctx = con.ctx
    report = CheckReport("roots on mu")
    values = con.B.evaluate_batch(_mu_points(ctx, limits), order=ctx.q + 1)
    has_root = bool(batch.is_zero(values).any())
    expected = spec.theorem == Theorem.T2 and ctx.q % 3 == 2
    report.checked = ctx.q + 1
    report.details.update(has_root=has_root, expected=expected)
    if has_root != expected:
        report.fail(f"B_{spec.z} root on mu_{ctx.q + 1}: found {has_root}, expected {expected} for {spec.label()}")
    return report


def expected_gcd(spec: PentanomialSpec, ctx: ExtFieldCtx) -> SparsePoly:
    """ 1 for the first family, (X^2 - X + 1)^min(Q+S, R) for the second. """
    result = SparsePoly.constant(ctx, ctx.one)
    if spec.theorem == Theorem.T1:
        return result
    factor = SparsePoly.from_pairs(ctx, [(2, ctx.one), (1, -ctx.one), (0, ctx.one)])
    for _ in range(min(spec.Q + spec.S, spec.R)):
        result = result * factor
    return result


def check_gcd_structure(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None,
                        limits: Limits = DEFAULT_LIMITS) -> CheckReport:
    con = _construction(spec, ctx)
    report = CheckReport("gcd structure", checked=1)
    found = poly_gcd_ext(con.B1, con.B2, con.ctx, limits)
    expected = expected_gcd(spec, con.ctx)
    report.details.update(found=str(found), expected=str(expected))
    if found != expected:
        report.fail(f"gcd(B_1, B_2) = {found}, expected {expected} for {spec.label()}")
    return report


def monomial_verdict(spec: PentanomialSpec) -> bool:
    """ Whether the monomial (or monomial pair) that f is linearly equivalent to permutes its space. """
    q = spec.q
    if q % 3 == 1:
        exponent = spec.n if spec.theorem == Theorem.T1 else spec.Q + q * spec.R + spec.S
        return gcd(exponent, q * q - 1) == 1
    if spec.theorem == Theorem.T1:
        return gcd(spec.n, q - 1) == 1
    # (x^(Q+S) y^R, x^R y^(Q+S)) sends every (0, y) to (0, 0)
    return False


# linear equivalence f = rho o g o eta

Vector = Tuple[np.ndarray, ...]


def monomial_exponents(spec: PentanomialSpec) -> Tuple[Tuple[int, ...], ...]:
    """ g as exponent rows: component i of g(w) is the product of w_j^rows[i][j]. """
    q = spec.q
    if q % 3 == 1:
        return ((spec.n if spec.theorem == Theorem.T1 else spec.Q + q * spec.R + spec.S,),)
    if spec.theorem == Theorem.T1:
        return (spec.n, 0), (0, spec.n)
    return (spec.Q + spec.S, spec.R), (spec.R, spec.Q + spec.S)


def rho_scale(con: Construction) -> ExtElem:
    """ beta^-1, times omega^(-(Q+R+S) mod 3) when q = 2 (mod 3). """
    ctx = con.ctx
    scale = con.beta.inverse()
    if ctx.q % 3 == 2:
        scale = scale * ctx.pow(con.omega, (-con.spec.n) % 3)
    return scale


class _Space:
    """ F_{q^2} (one component) or F_q x F_q (two components, each stored as F_{q^2} rows). """

    def __init__(self, ctx: ExtFieldCtx, components: int):
        self.ctx = ctx
        self.components = components

    def add(self, u: Vector, v: Vector) -> Vector:
        return tuple(batch.add(self.ctx, a, b) for a, b in zip(u, v))

    def scale(self, scalars: np.ndarray, u: Vector) -> Vector:
        return tuple(batch.mul(self.ctx, scalars, a) for a in u)

    def equal(self, u: Vector, v: Vector) -> np.ndarray:
        return np.logical_and.reduce([batch.equal(a, b) for a, b in zip(u, v)])


class LinearMapSpec:
    """ eta, g and rho for one spec, acting on batches of coefficient rows. Used on samples above the oracle cap;
    the exhaustive check works on tabulated maps instead. """

    def __init__(self, con: Construction):
        spec, ctx = con.spec, con.ctx
        self.spec, self.ctx = spec, ctx
        self.case = 1 if ctx.q % 3 == 1 else 2
        self.z = spec.z
        self.space = _Space(ctx, 1 if self.case == 1 else 2)
        self.exponents = monomial_exponents(spec)
        omega = con.omega
        self._omega = batch.constant(ctx, omega)
        self._omega_q = batch.constant(ctx, omega.frobenius(ctx.k))
        self._scale = batch.constant(ctx, rho_scale(con))

    @property
    def branch(self) -> str:
        return f"q≡{self.case}"

    def _conj(self, rows: np.ndarray) -> np.ndarray:
        return batch.frobenius(self.ctx, rows, self.ctx.k)

    def eta(self, x: np.ndarray) -> Vector:
        ctx = self.ctx
        if self.case == 1:
            return (batch.add(ctx, batch.mul(ctx, self._omega, self._conj(x)), x),)
        u = batch.mul(ctx, self._omega_q, x)
        v = batch.mul(ctx, self._omega, x)
        return batch.add(ctx, u, self._conj(u)), batch.add(ctx, v, self._conj(v))

    def g(self, w: Vector) -> Vector:
        ctx = self.ctx
        result = []
        for row in self.exponents:
            component = batch.constant(ctx, ctx.one, w[0].shape[0])
            for values, exponent in zip(w, row):
                component = batch.mul(ctx, component, batch.powers(ctx, values, exponent))
            result.append(component)
        return tuple(result)

    def rho(self, w: Vector) -> np.ndarray:
        ctx = self.ctx
        if self.case == 1:
            x, y = self._conj(w[0]), w[0]
        else:
            x, y = w
        # z=1: -omega x + y, z=2: x - omega y
        if self.z == 1:
            combined = batch.sub(ctx, y, batch.mul(ctx, self._omega, x))
        else:
            combined = batch.sub(ctx, x, batch.mul(ctx, self._omega, y))
        return batch.mul(ctx, self._scale, combined)

    def compose(self, x: np.ndarray) -> np.ndarray:
        return self.rho(self.g(self.eta(x)))


def _sample_codes(ctx: ExtFieldCtx, limits: Limits, size: int, offset: int = 0) -> np.ndarray:
    rng = np.random.default_rng(limits.seed + offset)
    return rng.integers(0, ctx.q2, size=size, dtype=np.int64)


def _check_sampled_linearity(maps: LinearMapSpec, limits: Limits, report: Thm3Report):
    ctx, space = maps.ctx, maps.space
    if ctx.q2 <= limits.linearity_exhaustive_cap:
        total = ctx.q2 * ctx.q2
        blocks = [np.divmod(np.arange(start, stop, dtype=np.int64), ctx.q2)
                  for start, stop in _partition(total, limits.chunk_size)]
        scalars = batch.decode(ctx, subfield_codes(ctx, ctx.q2))
    else:
        logger.warning("additivity of eta and rho checked on %d sampled pairs", limits.sample_size)
        size = limits.sample_size
        blocks = [(_sample_codes(ctx, limits, size, 1), _sample_codes(ctx, limits, size, 2))]
        traces = batch.decode(ctx, _sample_codes(ctx, limits, 64, 3))
        scalars = batch.add(ctx, traces, batch.frobenius(ctx, traces, ctx.k))

    for first, second in blocks:
        x, y = batch.decode(ctx, first), batch.decode(ctx, second)
        eta_x, eta_y = maps.eta(x), maps.eta(y)
        eta_sum = space.add(eta_x, eta_y)
        if not space.equal(maps.eta(batch.add(ctx, x, y)), eta_sum).all():
            report.eta_linear = False
        if not batch.equal(maps.rho(eta_sum), batch.add(ctx, maps.rho(eta_x), maps.rho(eta_y))).all():
            report.rho_linear = False

    x = batch.decode(ctx, np.arange(min(ctx.q2, limits.sample_size), dtype=np.int64))
    eta_x = maps.eta(x)
    rho_eta_x = maps.rho(eta_x)
    for scalar in scalars:
        lam = scalar[np.newaxis, :]
        if not space.equal(maps.eta(batch.mul(ctx, lam, x)), space.scale(lam, eta_x)).all():
            report.eta_linear = False
        if not batch.equal(maps.rho(space.scale(lam, eta_x)), batch.mul(ctx, lam, rho_eta_x)).all():
            report.rho_linear = False


def subfield_basis(ctx: ExtFieldCtx) -> List[int]:
    """ Codes of 1, t, ..., t^(k-1) for a generator t of F_q^*: a basis of F_q over F_p. """
    table = log_table(ctx)
    return [int(table.exp[(ctx.q + 1) * i % table.order]) for i in range(ctx.k)]


class _CodeSpace:
    """ F_{q^2} (one component) or F_q x F_q (two components) with vectors as tuples of code arrays.

    Every vector has an index in range(q^2); vectors() lists the whole space in index order.
    """

    def __init__(self, ctx: ExtFieldCtx, components: int):
        self.ctx = ctx
        self.components = components
        self.table = log_table(ctx)
        self.subfield = subfield_codes(ctx, ctx.q2)
        self._subfield_index = np.full(ctx.q2, -1, dtype=np.int64)
        self._subfield_index[self.subfield] = np.arange(ctx.q, dtype=np.int64)

    @property
    def size(self) -> int:
        return self.ctx.q2

    def vectors(self) -> Vector:
        if self.components == 1:
            return (np.arange(self.ctx.q2, dtype=np.int64),)
        return np.repeat(self.subfield, self.ctx.q), np.tile(self.subfield, self.ctx.q)

    def index(self, u: Vector) -> np.ndarray:
        """ -1 for a pair with a component outside F_q. """
        if self.components == 1:
            return np.asarray(u[0], dtype=np.int64)
        first, second = self._subfield_index[u[0]], self._subfield_index[u[1]]
        return np.where((first >= 0) & (second >= 0), first * self.ctx.q + second, -1)

    def basis(self) -> List[Vector]:
        """ A basis over F_p, every vector a tuple of single codes. """
        ctx = self.ctx
        if self.components == 1:
            return [(ctx.p ** i,) for i in range(ctx.n)]
        scalars = subfield_basis(ctx)
        return [(b, 0) for b in scalars] + [(0, b) for b in scalars]

    def add(self, u: Vector, v: Vector) -> Vector:
        return tuple(batch.add_codes(self.ctx, a, b) for a, b in zip(u, v))

    def scale(self, scalar: int, u: Vector) -> Vector:
        return tuple(self.table.mul(scalar, a) for a in u)

    def equal(self, u: Vector, v: Vector) -> bool:
        return all(np.array_equal(*np.broadcast_arrays(a, b)) for a, b in zip(u, v))


@dataclass
class _TabulatedMap:
    """ A map between two code spaces, given by its values on every vector of the domain in index order. """
    domain: _CodeSpace
    codomain: _CodeSpace
    values: Vector

    def at(self, positions) -> Vector:
        return tuple(values[positions] for values in self.values)

    def is_linear(self) -> bool:
        """ T(x + e) = T(x) + T(e) for every x and every e of an F_p-basis, and T(t x) = t T(x) for every t of an
        F_p-basis of F_q; together these give F_q-linearity. """
        domain, codomain = self.domain, self.codomain
        points = domain.vectors()
        for e in domain.basis():
            shifted = self.at(domain.index(domain.add(points, e)))
            if not codomain.equal(shifted, codomain.add(self.values, self.at(domain.index(e)))):
                return False
        for scalar in subfield_basis(domain.ctx):
            scaled = self.at(domain.index(domain.scale(scalar, points)))
            if not codomain.equal(scaled, codomain.scale(scalar, self.values)):
                return False
        return True

    def is_bijective(self) -> bool:
        indices = self.codomain.index(self.values)
        if (indices < 0).any():
            return False
        seen = np.zeros(self.codomain.size, dtype=bool)
        seen[indices] = True
        return bool(seen.all())


class _Equivalence:
    """ eta and the unscaled rho0 of one field, omega and z, tabulated on their whole domains.

    rho = scale * rho0 with a nonzero scale, so linearity and bijectivity are settled once for every spec.
    """

    def __init__(self, ctx: ExtFieldCtx, omega: ExtElem, z: int):
        table = log_table(ctx)
        self.case = 1 if ctx.q % 3 == 1 else 2
        field = _CodeSpace(ctx, 1)
        self.middle = field if self.case == 1 else _CodeSpace(ctx, 2)
        x = field.vectors()[0]
        if self.case == 1:
            eta = (batch.add_codes(ctx, table.mul(omega.code, table.power(x, ctx.q)), x),)
        else:
            u, v = table.mul(omega.frobenius(ctx.k).code, x), table.mul(omega.code, x)
            eta = batch.add_codes(ctx, u, table.power(u, ctx.q)), batch.add_codes(ctx, v, table.power(v, ctx.q))
        self.eta = _TabulatedMap(field, self.middle, eta)

        w = self.middle.vectors()
        first, second = (table.power(w[0], ctx.q), w[0]) if self.case == 1 else w
        minus_omega = (-omega).code
        if z == 1:
            rho0 = batch.add_codes(ctx, second, table.mul(minus_omega, first))
        else:
            rho0 = batch.add_codes(ctx, first, table.mul(minus_omega, second))
        self.rho0 = _TabulatedMap(self.middle, field, (rho0,))

        self.eta_linear = self.eta.is_linear()
        self.rho_linear = self.rho0.is_linear()
        self.eta_bijective = self.eta.is_bijective()
        self.rho_bijective = self.rho0.is_bijective()
        logger.debug("tabulated eta and rho0 for q=%d z=%d", ctx.q, z)


@lru_cache(maxsize=8)
def _equivalence(ctx: ExtFieldCtx, omega: ExtElem, z: int) -> _Equivalence:
    return _Equivalence(ctx, omega, z)


def _apply_monomials(table, exponents: Tuple[Tuple[int, ...], ...], w: Vector) -> Vector:
    result = []
    for row in exponents:
        component = np.ones_like(w[0])
        for values, exponent in zip(w, row):
            component = table.mul(component, table.power(values, exponent))
        result.append(component)
    return tuple(result)


def _verify_tabulated(con: Construction, report: Thm3Report):
    ctx, spec = con.ctx, con.spec
    table = log_table(ctx)
    equivalence = _equivalence(ctx, con.omega, spec.z)
    report.eta_linear, report.rho_linear = equivalence.eta_linear, equivalence.rho_linear
    report.eta_bijective, report.rho_bijective = equivalence.eta_bijective, equivalence.rho_bijective

    g_eta = _apply_monomials(table, monomial_exponents(spec), equivalence.eta.values)
    composed = table.mul(rho_scale(con).code, equivalence.rho0.at(equivalence.middle.index(g_eta))[0])
    matches = composed == field_images(con.f, ctx)
    report.checked = ctx.q2
    report.matched = int(matches.sum())
    for code in np.flatnonzero(~matches)[:MAX_LISTED_FAILURES]:
        report.failures.append(f"f(x) != rho(g(eta(x))) at x={int(code)}")


def _verify_sampled(con: Construction, limits: Limits, report: Thm3Report):
    ctx = con.ctx
    logger.warning("q^2 = %d exceeds the oracle cap, checking %d sampled points", ctx.q2, limits.sample_size)
    maps = LinearMapSpec(con)
    codes = _sample_codes(ctx, limits, limits.sample_size)
    x = batch.decode(ctx, codes)
    matches = batch.equal(maps.compose(x), con.f.evaluate_batch(x))
    report.seed = limits.seed
    report.checked = int(codes.size)
    report.matched = int(matches.sum())
    for code in codes[~matches][:MAX_LISTED_FAILURES]:
        report.failures.append(f"f(x) != rho(g(eta(x))) at x={int(code)}")
    _check_sampled_linearity(maps, limits, report)


def verify_thm3(spec: PentanomialSpec, ctx: Optional[ExtFieldCtx] = None,
                limits: Limits = DEFAULT_LIMITS) -> Thm3Report:
    """ Check f = rho o g o eta pointwise, together with linearity and bijectivity of eta and rho.

    Only defined for r = Q+R+S. The whole field is used up to limits.oracle_cap, a seeded sample above it.
    """
    if spec.r != spec.n:
        raise PreconditionError(f"the linear equivalence needs r = Q+R+S = {spec.n}, got r = {spec.r}")
    con = _construction(spec, ctx)
    ctx = con.ctx
    branch = f"q≡{1 if ctx.q % 3 == 1 else 2}"
    report = Thm3Report(spec, branch, exhaustive=ctx.q2 <= limits.oracle_cap)
    if report.exhaustive:
        _verify_tabulated(con, report)
    else:
        _verify_sampled(con, limits, report)
    if not report.eta_linear:
        report.failures.append("eta is not F_q-linear")
    if not report.rho_linear:
        report.failures.append("rho is not F_q-linear")
    if not report.passed:
        logger.error("linear equivalence fails for %s: %s", spec.label(), report.summary())
    return report


# one spec, many specs

def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def verify_spec(spec: PentanomialSpec, limits: Limits = DEFAULT_LIMITS) -> PermutationReport:
    """ Criterion, mu_{q+1} reduction and brute force for one spec. Records over the oracle cap get only the
    criterion verdict. """
    ctx = spec.context()
    start = time.perf_counter()
    report = PermutationReport(spec, criterion(spec), gcd_details=criterion_details(spec))
    if spec.theorem == Theorem.T1:
        report.e = spec.e
    report.timing["criterion_ms"] = _elapsed_ms(start)
    if ctx.q2 > limits.oracle_cap:
        logger.warning("skipping oracles for %s: q^2 = %d exceeds the cap of %d", spec.label(), ctx.q2,
                       limits.oracle_cap)
        return report

    start = time.perf_counter()
    con = construct(spec)
    report.timing["construct_ms"] = _elapsed_ms(start)
    start = time.perf_counter()
    report.mu_verdict = mu_reduction_permutes(spec, con.B, ctx, limits)
    report.timing["mu_ms"] = _elapsed_ms(start)
    start = time.perf_counter()
    report.oracle_verdict = brute_force_permutes(con.f, ctx, limits)
    report.timing["oracle_ms"] = _elapsed_ms(start)
    if not report.agree:
        logger.error("verdicts disagree for %s: criterion=%s mu=%s oracle=%s", spec.label(),
                     report.criterion_verdict, report.mu_verdict, report.oracle_verdict)
    else:
        logger.debug("%s: %s", spec.label(), report.criterion_verdict)
    return report


def _verify_single_worker(task) -> PermutationReport:
    spec, limits = task
    return verify_spec(spec, limits)


def verify_many(specs: Iterable[PentanomialSpec], limits: Limits = DEFAULT_LIMITS) -> List[PermutationReport]:
    """ verify_spec for every spec, one spec per worker process; results keep the input order. """
    specs = list(specs)
    if limits.workers <= 1:
        return [verify_spec(spec, limits) for spec in specs]
    inner = limits.replace(workers=1)
    return list(_map(_verify_single_worker, [(spec, inner) for spec in specs], limits.workers))


def r_values(spec_n: int, q: int, r_steps: int) -> List[int]:
    """ Q+R+S + j(q+1) for j < r_steps, plus Q+R+S + (q+1)(q-2) for q >= 3. """
    values = [spec_n + j * (q + 1) for j in range(r_steps)]
    if q >= 3 and spec_n + (q + 1) * (q - 2) not in values:
        values.append(spec_n + (q + 1) * (q - 2))
    return values


def sweep_grid(primes: Sequence[int], kmax: int, imax: int, max_log2_q2: int = 20, r_steps: int = 2,
               z_values: Sequence[int] = (1, 2)) -> Iterator[PentanomialSpec]:
    """ Specs ordered by p, k, a, b, c, theorem, z, r. """
    for p in primes:
        if p == 3:
            raise UnsupportedCharacteristicError(3)
        PrimeModulus(p)
    for p in primes:
        for k in range(1, kmax + 1):
            q = p ** k
            if q * q > 2 ** max_log2_q2:
                break
            for a, b, c in itertools.product(range(imax + 1), repeat=3):
                n = p ** a + p ** b + p ** c
                for theorem in (Theorem.T1, Theorem.T2):
                    for z in z_values:
                        for r in r_values(n, q, r_steps):
                            yield PentanomialSpec(theorem, z, p, k, a, b, c, r)


# closed forms

def _allowed_orders(theorem: Theorem) -> List[Tuple[int, int, int]]:
    if theorem == Theorem.T1:
        return list(itertools.permutations(range(3)))
    return [(0, 1, 2), (2, 1, 0)]


def check_table_row(theorem: Theorem, sigma, p: int, k: int) -> CheckReport:
    """ build_Bz against the listed closed form at pairwise distinct Q, R, S with residues sigma, and against
    sign * closed form for every reordering the family allows. """
    if p == 3:
        raise UnsupportedCharacteristicError(3)
    theorem, sigma = Theorem(theorem), ResidueTriple(*sigma)
    report = CheckReport(f"closed form T{int(theorem)} {sigma}")
    indices = instantiate_row(sigma, p)
    report.details["instantiable"] = indices is not None
    if indices is None:
        return report
    ctx = field_context(p, k)
    omega = find_omega(ctx)
    for z in (1, 2):
        spec = PentanomialSpec(theorem, z, p, k, *indices)
        listed = table_closed_form(theorem, z, sigma, spec.Q, spec.R, spec.S, ctx=ctx)
        report.checked += 1
        if build_Bz(spec, omega) != listed:
            report.fail(f"B_{z} differs from the closed form for {spec.label()}")
        for order in _allowed_orders(theorem):
            reordered = spec.with_exponents(*(indices[i] for i in order))
            canonical, sign = canonicalize_sigma(theorem, reordered, omega)
            expected = table_closed_form(theorem, z, canonical.sigma, canonical.Q, canonical.R, canonical.S, ctx=ctx)
            report.checked += 1
            if build_Bz(reordered, omega) != expected.scale(ctx.from_int(sign)):
                report.fail(f"B_{z} is not {sign:+d} times the closed form for {reordered.label()}")
    return report
