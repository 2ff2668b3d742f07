#!/usr/bin/env python
# -*- coding: utf-8 -*-
# batch.py

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
Vectorized arithmetic on many field elements at once, as coefficient rows or as base-p codes.

A batch is an int64 array of shape (m, n): row i holds the coefficients (low-to-high) of one element of the
context's field. All functions take the field context first and never modify their inputs.
"""
from functools import reduce
from math import gcd
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .exceptions import DomainError, LimitsError

# keeps every convolution sum of n products of residues inside int64
MAX_BATCH_PRIME = 2 ** 28


def _check(ctx):
    if ctx.p >= MAX_BATCH_PRIME:
        raise LimitsError(f"vectorized arithmetic needs p < 2^28, got {ctx.p}")


def decode(ctx, codes) -> np.ndarray:
    """ Coefficient rows of the elements with the given base-p codes. """
    _check(ctx)
    codes = np.asarray(codes, dtype=np.int64).copy()
    rows = np.empty((codes.shape[0], ctx.n), dtype=np.int64)
    for i in range(ctx.n):
        codes, rows[:, i] = np.divmod(codes, ctx.p)
    return rows


def encode(ctx, rows: np.ndarray) -> np.ndarray:
    """ Base-p codes of coefficient rows, constant term least significant. """
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(ctx.n - 1, -1, -1):
        codes = codes * ctx.p + rows[:, i]
    return codes


def elements(ctx, start: int, stop: int) -> np.ndarray:
    return decode(ctx, np.arange(start, stop, dtype=np.int64))


def from_elements(ctx, values: Iterable) -> np.ndarray:
    rows = [value.coeffs for value in values]
    if not rows:
        return np.zeros((0, ctx.n), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def constant(ctx, value, count: int = 1) -> np.ndarray:
    """ count copies of one field element. """
    return np.tile(np.array(value.coeffs, dtype=np.int64), (count, 1))


def is_zero(rows: np.ndarray) -> np.ndarray:
    return ~rows.any(axis=1)


def is_one(ctx, rows: np.ndarray) -> np.ndarray:
    return (rows[:, 0] == 1) & ~rows[:, 1:].any(axis=1)


def equal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(a, b)
    return (a == b).all(axis=1)


def add(ctx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a + b) % ctx.p


def sub(ctx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a - b) % ctx.p


def mul(ctx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """ Schoolbook product of two batches (either may be a single broadcast row) reduced by the modulus. """
    _check(ctx)
    a, b = np.broadcast_arrays(a, b)
    n, p = ctx.n, ctx.p
    product = np.zeros((a.shape[0], 2 * n - 1), dtype=np.int64)
    for i in range(n):
        product[:, i:i + n] += a[:, i:i + 1] * b
    product %= p
    reduction = np.array(ctx.reduction, dtype=np.int64)
    for degree in range(2 * n - 2, n - 1, -1):
        high = product[:, degree:degree + 1]
        product[:, degree - n:degree] = (product[:, degree - n:degree] + high * reduction) % p
    return product[:, :n].copy()


def frobenius(ctx, a: np.ndarray, j: int) -> np.ndarray:
    """ x -> x^(p^j) as one matrix product. """
    matrix = ctx.frobenius_matrix(j)
    return (a @ matrix.T) % ctx.p


def _reduced_exponent(exponent: int, order: int) -> int:
    # x^order = 1 on the group in question; a positive exponent never collapses to 0 so that 0^e stays 0
    if exponent == 0:
        return 0
    reduced = exponent % order
    return order if reduced == 0 else reduced


class SquareChain:
    """ The repeated squares x, x^2, x^4, ... of one batch, shared by every monomial evaluated on it. """

    def __init__(self, ctx, points: np.ndarray, order: Optional[int] = None):
        self.ctx = ctx
        self.points = points
        self.order = ctx.q2 - 1 if order is None else order
        self._squares = [points]

    def _square(self, bit: int) -> np.ndarray:
        while len(self._squares) <= bit:
            last = self._squares[-1]
            self._squares.append(mul(self.ctx, last, last))
        return self._squares[bit]

    def power(self, exponent: int) -> np.ndarray:
        exponent = _reduced_exponent(exponent, self.order)
        result = constant(self.ctx, self.ctx.one, self.points.shape[0])
        bit = 0
        while exponent:
            if exponent & 1:
                result = mul(self.ctx, result, self._square(bit))
            exponent >>= 1
            bit += 1
        return result


def powers(ctx, points: np.ndarray, exponent: int, order: Optional[int] = None) -> np.ndarray:
    """ points^exponent; order is the exponent of the group the nonzero points live in (q^2 - 1 by default). """
    return SquareChain(ctx, points, order).power(exponent)


def evaluate(ctx, terms: Iterable[Tuple[int, object]], points: np.ndarray,
             order: Optional[int] = None) -> np.ndarray:
    """ Sum of coefficient * x^exponent over the (exponent, coefficient) terms, at every point. """
    chain = SquareChain(ctx, points, order)
    total = np.zeros_like(points)
    for exponent, coefficient in terms:
        total = add(ctx, total, mul(ctx, chain.power(exponent), constant(ctx, coefficient)))
    return total


# Elements as base-p codes. The whole-field oracles work on int64 code arrays: products and powers go through
# a discrete logarithm table, sums through the coefficient digits.

# keeps (log a) * exponent inside int64
MAX_LOG_TABLE_SIZE = 2 ** 31


def add_codes(ctx, a, b) -> np.ndarray:
    """ Sums of two code arrays of any (broadcastable) shape. """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    if ctx.p == 2:
        return np.bitwise_xor(a, b)
    rows = add(ctx, decode(ctx, a.ravel()), decode(ctx, b.ravel()))
    return encode(ctx, rows).reshape(a.shape)


def sum_codes(ctx, arrays: List[np.ndarray]) -> np.ndarray:
    """ Sum of several code arrays of one shape, with a single pass back to codes. """
    if ctx.p == 2:
        return np.bitwise_xor.reduce(arrays)
    shape = np.shape(arrays[0])
    digits = sum(decode(ctx, np.ravel(codes)) for codes in arrays) % ctx.p
    return encode(ctx, digits).reshape(shape)


class LogTable:
    """ exp[i] is the code of g^i and log[code] = i for a primitive element g; log[0] is -1.

    Every method takes and returns code arrays; zero is handled explicitly wherever it can occur.
    """

    def __init__(self, ctx, generator, block: int = 2 ** 16):
        _check(ctx)
        if ctx.q2 > MAX_LOG_TABLE_SIZE:
            raise LimitsError(f"a logarithm table of F_{ctx.q2} exceeds 2^31 entries")
        self.ctx = ctx
        self.order = ctx.q2 - 1
        block = min(block, self.order)
        # g^0 .. g^(block-1) by doubling; every later block is one product with g^start
        rows = constant(ctx, ctx.one)
        while rows.shape[0] < block:
            rows = np.concatenate([rows, mul(ctx, rows, constant(ctx, ctx.pow(generator, rows.shape[0])))])
        rows = rows[:block]
        self.exp = np.empty(self.order, dtype=np.int64)
        for start in range(0, self.order, block):
            stop = min(start + block, self.order)
            shifted = mul(ctx, rows[:stop - start], constant(ctx, ctx.pow(generator, start)))
            self.exp[start:stop] = encode(ctx, shifted)
        self.log = np.full(ctx.q2, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(self.order, dtype=np.int64)
        if (self.log[1:] < 0).any():
            raise DomainError(f"{generator} does not generate the multiplicative group")

    def _logs(self, codes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        nonzero = codes != 0
        return nonzero, self.log[np.where(nonzero, codes, 1)]

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        nonzero_a, log_a = self._logs(a)
        nonzero_b, log_b = self._logs(b)
        return np.where(nonzero_a & nonzero_b, self.exp[(log_a + log_b) % self.order], 0)

    def power(self, codes, exponent: int) -> np.ndarray:
        """ x^exponent with 0^0 = 1. """
        codes = np.asarray(codes, dtype=np.int64)
        if exponent == 0:
            return np.ones_like(codes)
        nonzero, logs = self._logs(codes)
        return np.where(nonzero, self.exp[logs * (exponent % self.order) % self.order], 0)

    def inverse(self, codes) -> np.ndarray:
        """ x^-1 for nonzero x; zero stays zero. """
        codes = np.asarray(codes, dtype=np.int64)
        nonzero, logs = self._logs(codes)
        return np.where(nonzero, self.exp[(-logs) % self.order], 0)

    def _sum_terms(self, terms: List[Tuple[int, int]], codes: np.ndarray) -> np.ndarray:
        nonzero, logs = self._logs(codes)
        values = []
        for exponent, coefficient in terms:
            if exponent == 0:
                values.append(np.full_like(codes, coefficient))
                continue
            shift = self.log[coefficient]
            values.append(np.where(nonzero, self.exp[(logs * (exponent % self.order) + shift) % self.order], 0))
        return sum_codes(self.ctx, values)

    def evaluate(self, terms: Iterable[Tuple[int, int]], codes) -> np.ndarray:
        """ Sum of coefficient * x^exponent over (exponent, coefficient code) terms at every code.

        With s the smallest exponent and d the gcd of q^2 - 1 and all exponent differences, the polynomial is
        x^s h(x^d); h is summed once on the subgroup of d-th powers and looked up from there.
        """
        codes = np.asarray(codes, dtype=np.int64)
        terms = [(int(exponent), int(coefficient)) for exponent, coefficient in terms if coefficient != 0]
        if not terms:
            return np.zeros_like(codes)
        shift = min(exponent for exponent, _ in terms)
        step = reduce(gcd, (exponent - shift for exponent, _ in terms), self.order)
        size = self.order // step
        subgroup = self.exp[step * np.arange(size, dtype=np.int64)]
        inner = self._sum_terms([((exponent - shift) // step, coefficient) for exponent, coefficient in terms],
                                subgroup)
        # x = g^L gives x^d = g^(d (L mod size))
        nonzero, logs = self._logs(codes)
        at_power = inner[logs % size]
        values = np.where(nonzero & (at_power != 0),
                          self.exp[(logs * (shift % self.order) + self.log[at_power]) % self.order], 0)
        if shift == 0:
            constant_term = dict(terms).get(0, 0)
            values = np.where(nonzero, values, constant_term)
        return values
