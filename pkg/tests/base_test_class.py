import unittest
from typing import Dict, Iterable

from permpenta.field_core import ExtFieldCtx, field_context, find_omega
from permpenta.pentanomial import PentanomialSpec
from permpenta.sparse_poly import SparsePoly


class BaseTest(unittest.TestCase):
    """ Shared helpers: cached field contexts and polynomial assertions with integer coefficients. """

    def field(self, p: int, k: int) -> ExtFieldCtx:
        return field_context(p, k)

    def omega(self, p: int, k: int):
        return find_omega(self.field(p, k))

    def spec(self, theorem, z, p, k, a, b, c, r=None) -> PentanomialSpec:
        return PentanomialSpec(theorem, z, p, k, a, b, c, r)

    def poly(self, ctx: ExtFieldCtx, terms: Dict[int, int]) -> SparsePoly:
        """ A polynomial with prime field coefficients given as integers. """
        return SparsePoly.from_pairs(ctx, ((exponent, ctx.from_int(value)) for exponent, value in terms.items()))

    def assertPolyEqual(self, poly: SparsePoly, terms: Dict[int, int]):
        expected = self.poly(poly.ctx, terms)
        self.assertEqual(poly, expected, f"{poly} != {expected}")

    def assertExponents(self, poly: SparsePoly, exponents: Iterable[int]):
        self.assertEqual(sorted(poly.terms), sorted(exponents))
