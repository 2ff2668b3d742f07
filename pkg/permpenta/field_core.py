#!/usr/bin/env python
# -*- coding: utf-8 -*-
# field_core.py

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
Arithmetic in F_{q^2} = F_p[X]/(m) with m the lexicographically smallest monic irreducible polynomial of
degree 2k, together with the Frobenius map, the subfield F_q, the unit circle mu_{q+1} and Moebius maps
acting on the projective line.
"""
import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p

from . import batch
from .config import DEFAULT_LIMITS
from .exceptions import DomainError, LimitsError, PreconditionError, UnsupportedCharacteristicError

logger = logging.getLogger(__name__)

MAX_FIELD_SIZE = 2 ** 63
MAX_EXPONENT = 2 ** 128


class PrimeModulus(int):
    """ An integer that was checked to be prime when it was created. """

    def __new__(cls, p: int):
        if isinstance(p, PrimeModulus):
            return p
        if isinstance(p, bool) or int(p) != p or not isprime(int(p)):
            raise PreconditionError(f"{p} is not a prime")
        return super().__new__(cls, int(p))


class FpPoly:
    """ A polynomial over F_p, coefficients stored low-to-high with a nonzero leading coefficient. """

    # degree reported for the zero polynomial
    ZERO_DEGREE = -1

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs: Sequence[int], p: int):
        values = [int(c) % p for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.p = p
        self.coeffs = tuple(values)

    @classmethod
    def from_dense(cls, dense: Sequence[int], p: int) -> "FpPoly":
        """ From a galoistools coefficient list (leading coefficient first). """
        return cls(list(reversed([int(c) for c in dense])), p)

    def dense(self) -> List:
        """ The galoistools coefficient list over ZZ, leading coefficient first. """
        return ZZ.map(list(reversed(self.coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else self.ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"FpPoly({list(self.coeffs)}, p={self.p})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for exponent in range(self.degree, -1, -1):
            c = self.coeffs[exponent]
            if c == 0:
                continue
            monomial = "" if exponent == 0 else ("X" if exponent == 1 else f"X^{exponent}")
            if not monomial:
                parts.append(str(c))
            else:
                parts.append(monomial if c == 1 else f"{c}*{monomial}")
        return " + ".join(parts)


def is_irreducible(f: FpPoly) -> bool:
    """ Rabin's test; constants are not irreducible. """
    if f.degree < 1:
        return False
    return bool(gf_irreducible_p(f.dense(), int(f.p), ZZ))


@lru_cache(maxsize=None)
def find_irreducible(p: int, n: int) -> FpPoly:
    """ The lexicographically smallest monic irreducible polynomial of degree n over F_p, comparing the
    coefficients from the constant term upwards. """
    p = PrimeModulus(p)
    if n < 1:
        raise PreconditionError(f"degree must be positive, got {n}")
    for lower in itertools.product(range(p), repeat=n):
        # everything with zero constant term is divisible by X
        if n > 1 and lower[0] == 0:
            continue
        candidate = FpPoly(list(lower) + [1], p)
        if is_irreducible(candidate):
            logger.debug("irreducible of degree %d over F_%d: %s", n, p, candidate)
            return candidate
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class ExtElem:
    """ An element of F_{q^2}: exactly n coefficients, low-to-high, of the reduced representative. """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "ExtFieldCtx", coeffs: Tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    @property
    def code(self) -> int:
        """ The base-p integer of the coefficients, constant term least significant. """
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.ctx.p + c
        return value

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other) -> Optional["ExtElem"]:
        if isinstance(other, ExtElem):
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.sub(other, self)

    def __neg__(self):
        return self.ctx.neg(self)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.mul(self, self.ctx.inv(other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self.ctx.mul(other, self.ctx.inv(self))

    def __pow__(self, exponent: int):
        return self.ctx.pow(self, exponent)

    def inverse(self) -> "ExtElem":
        return self.ctx.inv(self)

    def frobenius(self, j: int = 1) -> "ExtElem":
        return frobenius(self.ctx, self, j)

    def __eq__(self, other):
        if not isinstance(other, ExtElem):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ctx == other.ctx

    def __hash__(self):
        return hash((self.ctx.p, self.coeffs))

    def __repr__(self):
        return f"ExtElem({list(self.coeffs)})"


class FieldOps(NamedTuple):
    add: object
    sub: object
    mul: object
    inv: object
    pow: object


class ExtFieldCtx:
    """ The field F_{p^n}, n = 2k, modelled as F_p[X]/(modulus); q = p^k and q2 = q^2 are cached. """

    def __init__(self, p: int, k: int, modulus: Optional[FpPoly] = None):
        self.p = PrimeModulus(p)
        if k < 1:
            raise PreconditionError(f"k must be a positive integer, got {k}")
        self.k = k
        self.n = 2 * k
        self.q = self.p ** k
        self.q2 = self.q * self.q
        if self.q2 > MAX_FIELD_SIZE:
            raise LimitsError(f"q^2 = {self.p}^{self.n} exceeds 2^63")
        if modulus is None:
            modulus = find_irreducible(self.p, self.n)
        elif modulus.p != self.p or modulus.degree != self.n or modulus.leading != 1 or not is_irreducible(modulus):
            raise PreconditionError(f"{modulus} is not a monic irreducible polynomial of degree {self.n}")
        self.modulus = modulus
        # X^n = sum reduction[i] X^i in the quotient ring
        self.reduction = tuple((-c) % self.p for c in modulus.coeffs[:self.n])
        self.zero = ExtElem(self, (0,) * self.n)
        self.one = ExtElem(self, (1,) + (0,) * (self.n - 1))
        self._frobenius_columns: Dict[int, Tuple[Tuple[int, ...], ...]] = {}

    def __eq__(self, other):
        if not isinstance(other, ExtFieldCtx):
            return NotImplemented
        return self is other or (self.p == other.p and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((int(self.p), self.k, self.modulus))

    def __repr__(self):
        return f"ExtFieldCtx(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __getstate__(self):
        return {"p": int(self.p), "k": self.k, "modulus": self.modulus}

    def __setstate__(self, state):
        self.__init__(state["p"], state["k"], state["modulus"])

    # element construction
    def element(self, coeffs: Sequence[int]) -> ExtElem:
        """ Reduce an arbitrary coefficient list (low-to-high) modulo the defining polynomial. """
        return self._reduce([int(c) for c in coeffs])

    def from_int(self, value: int) -> ExtElem:
        return ExtElem(self, (value % self.p,) + (0,) * (self.n - 1))

    def from_code(self, code: int) -> ExtElem:
        if not 0 <= code < self.q2:
            raise DomainError(f"element code {code} out of range for a field of size {self.q2}")
        coeffs = []
        for _ in range(self.n):
            code, digit = divmod(code, self.p)
            coeffs.append(digit)
        return ExtElem(self, tuple(coeffs))

    @property
    def generator(self) -> ExtElem:
        """ The class of X. """
        return self.element([0, 1])

    def elements(self) -> Iterator[ExtElem]:
        """ All elements in enumeration order. """
        for code in range(self.q2):
            yield self.from_code(code)

    # arithmetic
    def _reduce(self, product: List[int]) -> ExtElem:
        n, p, reduction = self.n, self.p, self.reduction
        product = list(product) + [0] * max(n - len(product), 0)
        for degree in range(len(product) - 1, n - 1, -1):
            c = product[degree] % p
            if c:
                for i, r in enumerate(reduction):
                    product[degree - n + i] += c * r
        return ExtElem(self, tuple(c % p for c in product[:n]))

    def add(self, x: ExtElem, y: ExtElem) -> ExtElem:
        p = self.p
        return ExtElem(self, tuple((a + b) % p for a, b in zip(x.coeffs, y.coeffs)))

    def sub(self, x: ExtElem, y: ExtElem) -> ExtElem:
        p = self.p
        return ExtElem(self, tuple((a - b) % p for a, b in zip(x.coeffs, y.coeffs)))

    def neg(self, x: ExtElem) -> ExtElem:
        p = self.p
        return ExtElem(self, tuple((-a) % p for a in x.coeffs))

    def mul(self, x: ExtElem, y: ExtElem) -> ExtElem:
        product = [0] * (2 * self.n - 1)
        for i, a in enumerate(x.coeffs):
            if a:
                for j, b in enumerate(y.coeffs):
                    product[i + j] += a * b
        return self._reduce(product)

    def inv(self, x: ExtElem) -> ExtElem:
        """ Inverse by the extended Euclidean algorithm in F_p[X]: s m + t x = 1 gives x^-1 = t. """
        if x.is_zero():
            raise DomainError("inversion of zero")
        _, t, _ = gf_gcdex(self.modulus.dense(), FpPoly(x.coeffs, self.p).dense(), int(self.p), ZZ)
        return self.element(FpPoly.from_dense(t, self.p).coeffs)

    def pow(self, x: ExtElem, exponent: int) -> ExtElem:
        """ Square-and-multiply; exponents are unsigned and below 2^128. """
        if exponent < 0:
            raise DomainError(f"negative exponent {exponent}")
        if exponent >= MAX_EXPONENT:
            raise LimitsError(f"exponent {exponent} does not fit in 128 bits")
        if exponent == 0:
            return self.one
        if x.is_zero():
            return self.zero
        # x^(q2-1) = 1 for every nonzero x
        exponent %= self.q2 - 1
        result, base = self.one, x
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def frobenius_columns(self, j: int) -> Tuple[Tuple[int, ...], ...]:
        """ Column i holds the coefficients of X^(i p^j); x -> x^(p^j) is F_p-linear. """
        j %= self.n
        columns = self._frobenius_columns.get(j)
        if columns is None:
            image_of_x = self.pow(self.generator, self.p ** j)
            power, columns = self.one, []
            for _ in range(self.n):
                columns.append(power.coeffs)
                power = self.mul(power, image_of_x)
            columns = tuple(columns)
            self._frobenius_columns[j] = columns
        return columns

    def frobenius_matrix(self, j: int) -> np.ndarray:
        return np.array(self.frobenius_columns(j), dtype=np.int64).T


@lru_cache(maxsize=64)
def field_context(p: int, k: int) -> ExtFieldCtx:
    """ The shared, immutable context for F_{p^(2k)}. """
    return ExtFieldCtx(p, k)


def ext_arith(ctx: ExtFieldCtx) -> FieldOps:
    return FieldOps(ctx.add, ctx.sub, ctx.mul, ctx.inv, ctx.pow)


def frobenius(ctx: ExtFieldCtx, x: ExtElem, j: int) -> ExtElem:
    """ x^(p^j). """
    if j < 0:
        raise DomainError(f"negative Frobenius power {j}")
    p = ctx.p
    result = [0] * ctx.n
    for c, column in zip(x.coeffs, ctx.frobenius_columns(j)):
        if c:
            for i, value in enumerate(column):
                result[i] += c * value
    return ExtElem(ctx, tuple(v % p for v in result))


def in_subfield_q(ctx: ExtFieldCtx, x: ExtElem) -> bool:
    return frobenius(ctx, x, ctx.k) == x


@lru_cache(maxsize=64)
def find_omega(ctx: ExtFieldCtx, conjugate: bool = False) -> ExtElem:
    """ The element of order 3 that comes first in enumeration order (or the other one with conjugate=True).

    Both roots of X^2 + X + 1 are powers x^((q2-1)/3); the first x giving a value other than 1 finds them.
    """
    if ctx.p == 3:
        raise UnsupportedCharacteristicError(3)
    cofactor = (ctx.q2 - 1) // 3
    for code in range(2, ctx.q2):
        candidate = ctx.pow(ctx.from_code(code), cofactor)
        if not candidate.is_one():
            break
    else:
        # F_4 with x = 1 only has been skipped; unreachable for q2 >= 4
        raise AssertionError("no element of order 3 found")
    roots = sorted([candidate, ctx.mul(candidate, candidate)], key=lambda element: element.code)
    return roots[1] if conjugate else roots[0]


def has_order_three(ctx: ExtFieldCtx, omega: ExtElem) -> bool:
    return not omega.is_one() and ctx.pow(omega, 3).is_one()


@lru_cache(maxsize=64)
def primitive_element(ctx: ExtFieldCtx) -> ExtElem:
    """ The first generator of the multiplicative group in enumeration order. """
    order = ctx.q2 - 1
    cofactors = [order // prime for prime in factorint(order)]
    for code in range(1, ctx.q2):
        candidate = ctx.from_code(code)
        if all(not ctx.pow(candidate, cofactor).is_one() for cofactor in cofactors):
            return candidate
    raise AssertionError("the multiplicative group of a finite field is cyclic")


@lru_cache(maxsize=8)
def log_table(ctx: ExtFieldCtx) -> batch.LogTable:
    """ The shared discrete logarithm table of the field, to the base primitive_element(ctx). """
    return batch.LogTable(ctx, primitive_element(ctx))


def _check_enumeration_cap(ctx: ExtFieldCtx, cap: Optional[int]):
    cap = DEFAULT_LIMITS.oracle_cap if cap is None else cap
    if ctx.q2 > cap:
        raise LimitsError(f"enumerating F_{ctx.q2} exceeds the cap of {cap} elements")


def _scan_codes(ctx: ExtFieldCtx, keep) -> np.ndarray:
    """ Scan the whole field in chunks and keep the codes selected by keep(points) -> mask. """
    selected = []
    for start in range(0, ctx.q2, DEFAULT_LIMITS.chunk_size):
        stop = min(start + DEFAULT_LIMITS.chunk_size, ctx.q2)
        points = batch.elements(ctx, start, stop)
        selected.append(np.arange(start, stop, dtype=np.int64)[keep(points)])
    codes = np.concatenate(selected)
    codes.setflags(write=False)
    return codes


@lru_cache(maxsize=32)
def _mu_codes(ctx: ExtFieldCtx) -> np.ndarray:
    def is_unit_norm(points):
        norms = batch.mul(ctx, batch.frobenius(ctx, points, ctx.k), points)
        return batch.is_one(ctx, norms)
    return _scan_codes(ctx, is_unit_norm)


@lru_cache(maxsize=32)
def _subfield_codes(ctx: ExtFieldCtx) -> np.ndarray:
    def is_fixed(points):
        return batch.equal(batch.frobenius(ctx, points, ctx.k), points)
    return _scan_codes(ctx, is_fixed)


def mu_codes(ctx: ExtFieldCtx, cap: Optional[int] = None) -> np.ndarray:
    """ Sorted (read-only) codes of mu_{q+1}; computed once per field. """
    _check_enumeration_cap(ctx, cap)
    return _mu_codes(ctx)


def subfield_codes(ctx: ExtFieldCtx, cap: Optional[int] = None) -> np.ndarray:
    """ Sorted (read-only) codes of F_q; computed once per field. """
    _check_enumeration_cap(ctx, cap)
    return _subfield_codes(ctx)


def enumerate_mu(ctx: ExtFieldCtx, cap: Optional[int] = None) -> List[ExtElem]:
    """ The q+1 elements with x^(q+1) = 1, in enumeration order. """
    return [ctx.from_code(int(code)) for code in mu_codes(ctx, cap)]


def enumerate_subfield_q(ctx: ExtFieldCtx, cap: Optional[int] = None) -> List[ExtElem]:
    """ The q elements fixed by x -> x^q, in enumeration order. """
    return [ctx.from_code(int(code)) for code in subfield_codes(ctx, cap)]


class ProjPoint:
    """ A point of the projective line: a finite field element or infinity (value None). """

    __slots__ = ("value",)

    def __init__(self, value: Optional[ExtElem]):
        self.value = value

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.value is None or other.value is None:
            return self.value is None and other.value is None
        return self.value == other.value

    def __hash__(self):
        return hash(None) if self.value is None else hash(self.value)

    def __repr__(self):
        return "ProjPoint(inf)" if self.value is None else f"ProjPoint({self.value!r})"


INFINITY = ProjPoint.infinity()


def projective_line_q(ctx: ExtFieldCtx, cap: Optional[int] = None) -> List[ProjPoint]:
    """ P^1(F_q): the subfield followed by infinity. """
    return [ProjPoint(x) for x in enumerate_subfield_q(ctx, cap)] + [INFINITY]


def projective_line(ctx: ExtFieldCtx) -> Iterator[ProjPoint]:
    """ P^1(F_{q^2}) in enumeration order, infinity last. """
    for x in ctx.elements():
        yield ProjPoint(x)
    yield INFINITY


class MobiusMap:
    """ X -> (aX + b) / (cX + d) with ad - bc != 0. """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: ExtElem, b: ExtElem, c: ExtElem, d: ExtElem):
        if (a * d - b * c).is_zero():
            raise DomainError("degenerate Moebius map: ad - bc = 0")
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def ctx(self) -> ExtFieldCtx:
        return self.a.ctx

    def __call__(self, x) -> ProjPoint:
        if isinstance(x, ExtElem):
            x = ProjPoint(x)
        return mobius_eval(self.ctx, self, x)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """ self o other. """
        return MobiusMap(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def __repr__(self):
        return f"MobiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def mobius_eval(ctx: ExtFieldCtx, m: MobiusMap, x: ProjPoint) -> ProjPoint:
    if x.is_infinity:
        if m.c.is_zero():
            return INFINITY
        return ProjPoint(ctx.mul(m.a, ctx.inv(m.c)))
    denominator = ctx.add(ctx.mul(m.c, x.value), m.d)
    if denominator.is_zero():
        return INFINITY
    numerator = ctx.add(ctx.mul(m.a, x.value), m.b)
    return ProjPoint(ctx.mul(numerator, ctx.inv(denominator)))
