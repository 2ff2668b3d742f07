#!/usr/bin/env python
# -*- coding: utf-8 -*-
# sparse_poly.py

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

""" Sparse polynomials over F_{q^2} and a dense Euclidean gcd. """
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd

from . import batch
from .config import DEFAULT_LIMITS, Limits
from .exceptions import DomainError, LimitsError
from .field_core import MAX_EXPONENT, ExtElem, ExtFieldCtx

logger = logging.getLogger(__name__)


class SparsePoly:
    """ exponent -> nonzero coefficient; the zero polynomial has no terms. """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: ExtFieldCtx, terms: Optional[Mapping[int, ExtElem]] = None):
        self.ctx = ctx
        self.terms: Dict[int, ExtElem] = {}
        for exponent, coefficient in (terms or {}).items():
            self._accumulate(exponent, coefficient)

    @classmethod
    def from_pairs(cls, ctx: ExtFieldCtx, pairs: Iterable[Tuple[int, ExtElem]]) -> "SparsePoly":
        """ Sum of coefficient * X^exponent; repeated exponents are merged. """
        poly = cls(ctx)
        for exponent, coefficient in pairs:
            poly._accumulate(exponent, coefficient)
        return poly

    @classmethod
    def monomial(cls, ctx: ExtFieldCtx, exponent: int, coefficient: Optional[ExtElem] = None) -> "SparsePoly":
        return cls(ctx, {exponent: ctx.one if coefficient is None else coefficient})

    @classmethod
    def constant(cls, ctx: ExtFieldCtx, coefficient: ExtElem) -> "SparsePoly":
        return cls(ctx, {0: coefficient})

    def _accumulate(self, exponent: int, coefficient: ExtElem):
        if exponent < 0:
            raise DomainError(f"negative exponent {exponent}")
        if exponent >= MAX_EXPONENT:
            raise LimitsError(f"exponent {exponent} does not fit in 128 bits")
        total = self.terms.get(exponent, self.ctx.zero) + coefficient
        if total.is_zero():
            self.terms.pop(exponent, None)
        else:
            self.terms[exponent] = total

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exponent: int) -> ExtElem:
        return self.terms.get(exponent, self.ctx.zero)

    def exponents(self) -> List[int]:
        """ Exponents in descending order. """
        return sorted(self.terms, reverse=True)

    def items(self) -> List[Tuple[int, ExtElem]]:
        return [(exponent, self.terms[exponent]) for exponent in self.exponents()]

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((e, c.coeffs) for e, c in self.terms.items())))

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        result = SparsePoly(self.ctx, self.terms)
        for exponent, coefficient in other.terms.items():
            result._accumulate(exponent, coefficient)
        return result

    def __neg__(self) -> "SparsePoly":
        return self.scale(-self.ctx.one)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, ExtElem):
            return self.scale(other)
        return SparsePoly.from_pairs(self.ctx, ((e1 + e2, c1 * c2)
                                                for e1, c1 in self.terms.items()
                                                for e2, c2 in other.terms.items()))

    __rmul__ = __mul__

    def scale(self, factor: ExtElem) -> "SparsePoly":
        return SparsePoly.from_pairs(self.ctx, ((e, c * factor) for e, c in self.terms.items()))

    def reversed(self, degree: int) -> "SparsePoly":
        """ X^degree * P(1/X); requires degree >= deg P. """
        if degree < self.degree:
            raise DomainError(f"cannot reverse a polynomial of degree {self.degree} about {degree}")
        return SparsePoly(self.ctx, {degree - e: c for e, c in self.terms.items()})

    def substitute_power(self, multiplier: int, shift: int = 0) -> "SparsePoly":
        """ X^shift * P(X^multiplier). """
        return SparsePoly(self.ctx, {shift + multiplier * e: c for e, c in self.terms.items()})

    def monic(self) -> "SparsePoly":
        if self.is_zero():
            return self
        return self.scale(self.terms[self.degree].inverse())

    def __call__(self, x: ExtElem) -> ExtElem:
        total = self.ctx.zero
        for exponent, coefficient in self.terms.items():
            total = total + coefficient * self.ctx.pow(x, exponent)
        return total

    def evaluate_batch(self, points: np.ndarray, order: Optional[int] = None) -> np.ndarray:
        return batch.evaluate(self.ctx, self.terms.items(), points, order)

    def to_dense(self) -> List[ExtElem]:
        """ Coefficients low-to-high. """
        dense = [self.ctx.zero] * (self.degree + 1)
        for exponent, coefficient in self.terms.items():
            dense[exponent] = coefficient
        return dense

    @classmethod
    def from_dense(cls, ctx: ExtFieldCtx, dense: List[ExtElem]) -> "SparsePoly":
        return cls(ctx, {e: c for e, c in enumerate(dense) if not c.is_zero()})

    def __repr__(self):
        return f"SparsePoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for exponent, coefficient in self.items():
            if exponent == 0:
                parts.append(f"[{coefficient.code}]")
            elif coefficient.is_one():
                parts.append(f"X^{exponent}")
            else:
                parts.append(f"[{coefficient.code}]*X^{exponent}")
        return " + ".join(parts)


def _trim(dense: List[ExtElem]) -> List[ExtElem]:
    while dense and dense[-1].is_zero():
        dense.pop()
    return dense


def _dense_mod(ctx: ExtFieldCtx, a: List[ExtElem], b: List[ExtElem]) -> List[ExtElem]:
    a = list(a)
    lead_inverse = ctx.inv(b[-1])
    shift_max = len(a) - len(b)
    for shift in range(shift_max, -1, -1):
        top = a[shift + len(b) - 1]
        if top.is_zero():
            continue
        factor = ctx.mul(top, lead_inverse)
        for i, c in enumerate(b):
            if not c.is_zero():
                a[shift + i] = ctx.sub(a[shift + i], ctx.mul(factor, c))
    return _trim(a[:len(b) - 1])


def _prime_field_dense(poly: SparsePoly) -> Optional[List]:
    """ galoistools coefficients (leading first) when every coefficient lies in F_p, otherwise None. """
    if any(any(coefficient.coeffs[1:]) for coefficient in poly.terms.values()):
        return None
    dense = [0] * (poly.degree + 1)
    for exponent, coefficient in poly.terms.items():
        dense[poly.degree - exponent] = coefficient.coeffs[0]
    return ZZ.map(dense)


def poly_gcd_ext(a: SparsePoly, b: SparsePoly, ctx: ExtFieldCtx, limits: Limits = DEFAULT_LIMITS) -> SparsePoly:
    """ Monic gcd over F_{q^2}[X] by the Euclidean algorithm on dense coefficient lists.

    The gcd of two polynomials over F_p does not change in an extension field, so those go to sympy's
    gf_gcd over F_p; everything else runs the Euclidean algorithm on ExtElem coefficients.

    Parameters
    ----------
    a, b : SparsePoly
        not both zero.
    limits : Limits
        gcd_degree_cap bounds the dense degree of both inputs.
    """
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd of two zero polynomials")
    for poly in (a, b):
        if poly.degree > limits.gcd_degree_cap:
            raise LimitsError(f"dense degree {poly.degree} exceeds the gcd cap of {limits.gcd_degree_cap}")
    x, y = _prime_field_dense(a), _prime_field_dense(b)
    if x is not None and y is not None:
        dense = gf_gcd(x, y, int(ctx.p), ZZ)
        result = SparsePoly.from_pairs(ctx, ((len(dense) - 1 - i, ctx.from_int(int(c))) for i, c in enumerate(dense)))
        logger.debug("gcd over F_%d of degrees %d and %d has degree %d", ctx.p, a.degree, b.degree, result.degree)
        return result
    x, y = _trim(a.to_dense()), _trim(b.to_dense())
    while y:
        x, y = y, _dense_mod(ctx, x, y)
    logger.debug("gcd of degrees %d and %d has degree %d", a.degree, b.degree, len(x) - 1)
    return SparsePoly.from_dense(ctx, x).monic()
