#!/usr/bin/env python
# -*- coding: utf-8 -*-
# pentanomial.py

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
The two pentanomial families f(X) = X^r B_z(X^(q-1)) over F_{q^2}.

Both families start from an order-3 element omega and three powers Q, R, S of p. The numerator N and
denominator D are products of three binomials (X^Q + omega^Q) or (omega^Q X^Q + 1); the first family uses the
same shape in all three slots, the second flips the middle one. Then C_1 = -omega N + D, C_2 = N - omega D
and B_z = C_z / beta for a scalar beta that pushes every coefficient into the prime field.
"""
import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, NamedTuple, Optional, Tuple

from .exceptions import (DomainError, InvariantViolation, LimitsError, NotListedError, PreconditionError,
                         UnsupportedCharacteristicError)
from .field_core import (MAX_EXPONENT, ExtElem, ExtFieldCtx, PrimeModulus, field_context, find_omega, frobenius,
                         has_order_three)
from .sparse_poly import SparsePoly

logger = logging.getLogger(__name__)


class Theorem(IntEnum):
    T1 = 1
    T2 = 2


class ResidueTriple(NamedTuple):
    """ Residues of Q, R, S modulo 3, written as 1 or -1. """
    a: int
    b: int
    c: int

    @classmethod
    def of(cls, Q: int, R: int, S: int) -> "ResidueTriple":
        def sign(value):
            residue = value % 3
            if residue == 0:
                raise DomainError(f"{value} is divisible by 3")
            return 1 if residue == 1 else -1
        return cls(sign(Q), sign(R), sign(S))

    def __str__(self):
        return "(" + ",".join("1" if v == 1 else "-1" for v in self) + ")"


@dataclass(frozen=True)
class PentanomialSpec:
    """ One member of a family: Q = p^a, R = p^b, S = p^c and r = Q+R+S unless given.

    Parameters
    ----------
    theorem : Theorem
        which family (1 or 2).
    z : int
        which of the two polynomials B_1, B_2.
    r : int
        must be congruent to Q+R+S modulo q+1.
    """
    theorem: Theorem
    z: int
    p: int
    k: int
    a: int
    b: int
    c: int
    r: Optional[int] = None

    def __post_init__(self):
        if self.theorem not in (1, 2):
            raise PreconditionError(f"theorem must be 1 or 2, got {self.theorem}")
        object.__setattr__(self, "theorem", Theorem(self.theorem))
        if self.z not in (1, 2):
            raise PreconditionError(f"z must be 1 or 2, got {self.z}")
        if self.p == 3:
            raise UnsupportedCharacteristicError(3)
        object.__setattr__(self, "p", int(PrimeModulus(self.p)))
        if self.k < 1:
            raise PreconditionError(f"k must be a positive integer, got {self.k}")
        if min(self.a, self.b, self.c) < 0:
            raise PreconditionError("exponent indices a, b, c must be nonnegative")
        if self.r is None:
            object.__setattr__(self, "r", self.n)
        if self.r < 1:
            raise PreconditionError(f"r must be positive, got {self.r}")
        if self.r >= MAX_EXPONENT:
            raise LimitsError(f"r = {self.r} does not fit in 128 bits")
        if (self.r - self.n) % (self.q + 1):
            raise PreconditionError(f"r = {self.r} is not congruent to Q+R+S = {self.n} modulo q+1 = {self.q + 1}")

    @property
    def Q(self) -> int:
        return self.p ** self.a

    @property
    def R(self) -> int:
        return self.p ** self.b

    @property
    def S(self) -> int:
        return self.p ** self.c

    @property
    def n(self) -> int:
        """ Q+R+S, the degree of C_1 and C_2. """
        return self.Q + self.R + self.S

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def e(self) -> int:
        """ 1 or -1 with q = e (mod 3). """
        return 1 if self.q % 3 == 1 else -1

    @property
    def sigma(self) -> ResidueTriple:
        return ResidueTriple.of(self.Q, self.R, self.S)

    def context(self) -> ExtFieldCtx:
        return field_context(self.p, self.k)

    def with_exponents(self, a: int, b: int, c: int) -> "PentanomialSpec":
        """ The same spec with Q, R, S taken from other powers of p; r is kept when still admissible. """
        return PentanomialSpec(self.theorem, self.z, self.p, self.k, a, b, c, self.r)

    def with_z(self, z: int) -> "PentanomialSpec":
        return PentanomialSpec(self.theorem, z, self.p, self.k, self.a, self.b, self.c, self.r)

    def label(self) -> str:
        return (f"T{int(self.theorem)} z={self.z} p={self.p} k={self.k} "
                f"Q={self.Q} R={self.R} S={self.S} r={self.r}")


def _omega_power(ctx: ExtFieldCtx, omega: ExtElem, exponent: int) -> ExtElem:
    return ctx.pow(omega, exponent % 3)


def _check_omega(ctx: ExtFieldCtx, omega: ExtElem):
    if not has_order_three(ctx, omega):
        raise DomainError("omega does not have multiplicative order 3")


def _binomial(ctx: ExtFieldCtx, lead: ExtElem, exponent: int, constant: ExtElem) -> SparsePoly:
    return SparsePoly.from_pairs(ctx, [(exponent, lead), (0, constant)])


def build_ND(spec: PentanomialSpec, omega: ExtElem) -> Tuple[SparsePoly, SparsePoly]:
    """ The three-factor products N and D. """
    ctx = omega.ctx
    _check_omega(ctx, omega)
    w = {e: _omega_power(ctx, omega, e) for e in (spec.Q, spec.R, spec.S)}

    def plain(e):
        return _binomial(ctx, ctx.one, e, w[e])

    def twisted(e):
        return _binomial(ctx, w[e], e, ctx.one)

    Q, R, S = spec.Q, spec.R, spec.S
    if spec.theorem == Theorem.T1:
        N = plain(Q) * plain(R) * plain(S)
        D = twisted(Q) * twisted(R) * twisted(S)
    else:
        N = plain(Q) * twisted(R) * plain(S)
        D = twisted(Q) * plain(R) * twisted(S)
    return N, D


def _coefficient_formula(spec: PentanomialSpec, ctx: ExtFieldCtx, omega: ExtElem):
    """ (exponent, coefficient) pairs of C_1 read off term by term. """
    Q, R, S, n = spec.Q, spec.R, spec.S, spec.n

    def w(e):
        return _omega_power(ctx, omega, e)

    if spec.theorem == Theorem.T1:
        return [
            (n, w(n) - w(1)),
            (Q + R, w(Q + R) - w(S + 1)),
            (Q + S, w(Q + S) - w(R + 1)),
            (R + S, w(R + S) - w(Q + 1)),
            (Q, w(Q) - w(R + S + 1)),
            (R, w(R) - w(Q + S + 1)),
            (S, w(S) - w(Q + R + 1)),
            (0, ctx.one - w(n + 1)),
        ]
    return [
        (n, w(Q + S) - w(R + 1)),
        (Q + R, w(Q) - w(R + S + 1)),
        (Q + S, w(n) - w(1)),
        (R + S, w(S) - w(Q + R + 1)),
        (Q, w(Q + R) - w(S + 1)),
        (R, ctx.one - w(n + 1)),
        (S, w(R + S) - w(Q + 1)),
        (0, w(R) - w(Q + S + 1)),
    ]


def build_C(spec: PentanomialSpec, omega: ExtElem) -> Tuple[SparsePoly, SparsePoly]:
    """ C_1 from its eight coefficients and C_2 as its reversal, both cross-checked against N and D. """
    ctx = omega.ctx
    _check_omega(ctx, omega)
    C1 = SparsePoly.from_pairs(ctx, _coefficient_formula(spec, ctx, omega))
    C2 = C1.reversed(spec.n)
    N, D = build_ND(spec, omega)
    if C1 != D - N.scale(omega) or C2 != N - D.scale(omega):
        raise InvariantViolation(f"coefficient formula disagrees with the factored form for {spec.label()}")
    return C1, C2


def select_beta(spec: PentanomialSpec, omega: ExtElem) -> ExtElem:
    ctx = omega.ctx
    _check_omega(ctx, omega)
    Q, R, S, n = spec.Q, spec.R, spec.S, spec.n

    def w(e):
        return _omega_power(ctx, omega, e)

    if spec.theorem == Theorem.T1:
        beta = w(Q + R) - w(S + 1) if n % 3 == 1 else w(n) - w(1)
    else:
        beta = w(Q) - w(R + S + 1) if (Q + S) % 3 == (R + 1) % 3 else w(Q + S) - w(R + 1)
    if beta.is_zero():
        raise InvariantViolation(f"beta vanishes for {spec.label()}")
    return beta


def _pairwise_distinct(spec: PentanomialSpec) -> bool:
    return len({spec.Q, spec.R, spec.S}) == 3


def _check_B(spec: PentanomialSpec, B: SparsePoly):
    flags = coefficient_class(B)
    if flags["terms"] > 5:
        raise InvariantViolation(f"B_{spec.z} has {flags['terms']} terms for {spec.label()}")
    if not flags["prime_field"]:
        raise InvariantViolation(f"B_{spec.z} has a coefficient outside F_p for {spec.label()}")
    if _pairwise_distinct(spec) and not flags["plus_minus_one"]:
        raise InvariantViolation(f"B_{spec.z} has a coefficient other than 1, -1 for {spec.label()}")


def build_Bz(spec: PentanomialSpec, omega: ExtElem) -> SparsePoly:
    """ C_z / beta, with the term count and coefficient claims asserted. """
    C1, C2 = build_C(spec, omega)
    beta = select_beta(spec, omega)
    B = (C1 if spec.z == 1 else C2).scale(beta.inverse())
    _check_B(spec, B)
    return B


def coefficient_class(B: SparsePoly) -> Dict[str, object]:
    ctx = B.ctx
    minus_one = -ctx.one
    return {
        "prime_field": all(frobenius(ctx, c, 1) == c for c in B.terms.values()),
        "plus_minus_one": all(c.is_one() or c == minus_one for c in B.terms.values()),
        "terms": len(B),
    }


def assemble_f(spec: PentanomialSpec, B: SparsePoly) -> SparsePoly:
    """ X^r B(X^(q-1)). """
    if B.terms and spec.r + (spec.q - 1) * B.degree >= MAX_EXPONENT:
        raise LimitsError(f"exponents of f exceed 128 bits for {spec.label()}")
    return B.substitute_power(spec.q - 1, spec.r)


# Closed forms of B_1 and B_2 by residue triple. Each term is a sign followed by the letters whose sum is the
# exponent; "1" is the constant term.
TABLE_FORMS = {
    (Theorem.T1, (1, 1, 1)): ("+QRS -Q -R -S +1", "+QRS -QR -QS -RS +1"),
    (Theorem.T1, (1, 1, -1)): ("+QR -QS -RS +S -1", "-QRS +QR -Q -R +S"),
    (Theorem.T1, (1, -1, -1)): ("+QRS -RS -Q +R +S", "+QR +QS -RS -Q +1"),
    (Theorem.T1, (-1, -1, -1)): ("+QRS -QR -QS -RS +1", "+QRS -Q -R -S +1"),
    (Theorem.T2, (1, 1, 1)): ("+QR -QS +RS -R +1", "+QRS -QS +Q -R +S"),
    (Theorem.T2, (1, 1, -1)): ("+QRS -RS -Q +R +S", "+QR +QS -RS -Q +1"),
    (Theorem.T2, (1, -1, 1)): ("+QRS -Q -R -S +1", "+QRS -QR -QS -RS +1"),
    (Theorem.T2, (1, -1, -1)): ("+QR -QS -RS +S -1", "-QRS +QR -Q -R +S"),
    (Theorem.T2, (-1, 1, -1)): ("+QRS -QR -QS -RS +1", "+QRS -Q -R -S +1"),
    (Theorem.T2, (-1, -1, -1)): ("+QRS -QS +Q -R +S", "+QR -QS +RS -R +1"),
}

TABLE_ROWS = tuple((theorem, ResidueTriple(*sigma)) for theorem, sigma in TABLE_FORMS)


def table_form_text(theorem: Theorem, z: int, sigma) -> str:
    key = (Theorem(theorem), tuple(sigma))
    if key not in TABLE_FORMS:
        raise NotListedError(f"residue triple {tuple(sigma)} is not listed for theorem {int(theorem)}")
    return TABLE_FORMS[key][z - 1]


def _parse_term(token: str, Q: int, R: int, S: int) -> Tuple[int, int]:
    sign = -1 if token[0] == "-" else 1
    letters = token[1:]
    if letters == "1":
        return 0, sign
    values = {"Q": Q, "R": R, "S": S}
    return sum(values[letter] for letter in letters), sign


def table_closed_form(theorem: Theorem, z: int, sigma, Q: int, R: int, S: int, *, ctx: ExtFieldCtx) -> SparsePoly:
    """ The listed closed form at concrete Q, R, S with its integer coefficients mapped into F_p. """
    pairs = []
    for token in table_form_text(theorem, z, sigma).split():
        exponent, sign = _parse_term(token, Q, R, S)
        pairs.append((exponent, ctx.from_int(sign)))
    return SparsePoly.from_pairs(ctx, pairs)


def instantiate_row(sigma, p: int, limit: int = 12) -> Optional[Tuple[int, int, int]]:
    """ Pairwise distinct indices a, b, c with p^a, p^b, p^c in the residue classes of sigma, or None. """
    used = set()
    indices = []
    for residue in sigma:
        for i in range(limit):
            if i not in used and ResidueTriple.of(p ** i, 1, 1).a == residue:
                used.add(i)
                indices.append(i)
                break
        else:
            return None
    return tuple(indices)


def _canonical_order(theorem: Theorem, sigma: ResidueTriple) -> Tuple[int, int, int]:
    if theorem == Theorem.T1:
        return tuple(sorted(range(3), key=lambda i: -sigma[i]))
    if sigma.a == -1 and sigma.c == 1:
        return 2, 1, 0
    return 0, 1, 2


def canonicalize_sigma(theorem: Theorem, spec: PentanomialSpec,
                       omega: Optional[ExtElem] = None) -> Tuple[PentanomialSpec, int]:
    """ Reorder Q, R, S into a listed residue triple and return the sign with B_z(original) = sign * B_z(reordered).

    The first family allows any permutation, the second only the exchange of Q and S. Neither N nor D changes
    under these swaps, only beta does, by a factor of 1 or -1.
    """
    if Theorem(theorem) != spec.theorem:
        raise PreconditionError(f"spec belongs to theorem {int(spec.theorem)}, not {int(theorem)}")
    if omega is None:
        omega = find_omega(spec.context())
    order = _canonical_order(spec.theorem, spec.sigma)
    indices = (spec.a, spec.b, spec.c)
    permuted = spec.with_exponents(*(indices[i] for i in order))
    ratio = select_beta(permuted, omega) / select_beta(spec, omega)
    if ratio.is_one():
        sign = 1
    elif ratio == -omega.ctx.one:
        sign = -1
    else:
        raise InvariantViolation(f"beta changes by a factor other than 1, -1 when reordering {spec.label()}")
    logger.debug("canonical order %s for %s, sign %+d", order, spec.label(), sign)
    return permuted, sign


@dataclass
class Construction:
    """ Everything built for one spec. """
    spec: PentanomialSpec
    ctx: ExtFieldCtx
    omega: ExtElem
    beta: ExtElem
    sigma: ResidueTriple
    C1: SparsePoly
    C2: SparsePoly
    B1: SparsePoly
    B2: SparsePoly
    f: SparsePoly

    @property
    def B(self) -> SparsePoly:
        return self.B1 if self.spec.z == 1 else self.B2


def construct(spec: PentanomialSpec, omega: Optional[ExtElem] = None) -> Construction:
    """ omega defaults to find_omega of the spec's field; a given omega also fixes the field model. """
    if omega is None:
        ctx = spec.context()
        omega = find_omega(ctx)
    else:
        ctx = omega.ctx
        if (ctx.p, ctx.k) != (spec.p, spec.k):
            raise PreconditionError(f"omega lives in F_{ctx.q2}, the spec needs F_{spec.q ** 2}")
    C1, C2 = build_C(spec, omega)
    beta = select_beta(spec, omega)
    inverse = beta.inverse()
    B1, B2 = C1.scale(inverse), C2.scale(inverse)
    _check_B(spec.with_z(1), B1)
    _check_B(spec.with_z(2), B2)
    f = assemble_f(spec, B1 if spec.z == 1 else B2)
    return Construction(spec, ctx, omega, beta, spec.sigma, C1, C2, B1, B2, f)
