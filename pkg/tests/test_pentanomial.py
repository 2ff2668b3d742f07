from base_test_class import BaseTest

from permpenta.config import Limits
from permpenta.exceptions import (DomainError, LimitsError, NotListedError, PreconditionError,
                                  UnsupportedCharacteristicError)
from permpenta.pentanomial import (TABLE_ROWS, ResidueTriple, Theorem, assemble_f, build_Bz, build_C, build_ND,
                                   canonicalize_sigma, coefficient_class, construct, instantiate_row, select_beta,
                                   table_closed_form, table_form_text)
from permpenta.sparse_poly import SparsePoly, poly_gcd_ext


class TestSpec(BaseTest):

    def test_defaults(self):
        spec = self.spec(1, 1, 2, 2, 2, 0, 1)
        self.assertEqual((spec.Q, spec.R, spec.S), (4, 1, 2))
        self.assertEqual(spec.n, 7)
        self.assertEqual(spec.r, 7)
        self.assertEqual(spec.q, 4)
        self.assertEqual(spec.e, 1)
        self.assertEqual(spec.sigma, ResidueTriple(1, 1, -1))
        self.assertIs(spec.theorem, Theorem.T1)

    def test_r_congruence(self):
        # n = 3 and q + 1 = 5
        self.assertEqual(self.spec(1, 1, 2, 2, 0, 0, 0, r=8).r, 8)
        with self.assertRaises(PreconditionError):
            self.spec(1, 1, 2, 2, 0, 0, 0, r=4)

    def test_invalid(self):
        with self.assertRaises(UnsupportedCharacteristicError) as context:
            self.spec(1, 1, 3, 1, 0, 0, 0)
        self.assertIn("characteristic 3 unsupported", str(context.exception))
        with self.assertRaises(PreconditionError):
            self.spec(3, 1, 2, 1, 0, 0, 0)
        with self.assertRaises(PreconditionError):
            self.spec(1, 3, 2, 1, 0, 0, 0)
        with self.assertRaises(PreconditionError):
            self.spec(1, 1, 4, 1, 0, 0, 0)
        with self.assertRaises(PreconditionError):
            self.spec(1, 1, 2, 0, 0, 0, 0)
        with self.assertRaises(PreconditionError):
            self.spec(1, 1, 2, 1, -1, 0, 0)
        with self.assertRaises(LimitsError):
            self.spec(1, 1, 2, 1, 0, 0, 0, r=3 + 3 * 2 ** 127)

    def test_residue_triple(self):
        self.assertEqual(ResidueTriple.of(4, 5, 7), ResidueTriple(1, -1, 1))
        self.assertEqual(str(ResidueTriple(1, -1, 1)), "(1,-1,1)")
        with self.assertRaises(DomainError):
            ResidueTriple.of(3, 1, 1)


class TestBeta(BaseTest):

    def test_beta(self):
        omega = self.omega(2, 1)
        one = omega.ctx.one
        self.assertEqual(select_beta(self.spec(1, 1, 2, 1, 0, 0, 0), omega), one - omega)
        self.assertEqual(select_beta(self.spec(1, 1, 2, 1, 0, 0, 1), omega), omega * omega - one)
        self.assertEqual(select_beta(self.spec(2, 1, 2, 1, 1, 0, 1), omega), omega - omega * omega)

    def test_wrong_omega(self):
        ctx = self.field(2, 1)
        with self.assertRaises(DomainError):
            select_beta(self.spec(1, 1, 2, 1, 0, 0, 0), ctx.one)


class TestConstruction(BaseTest):

    def test_factored_form(self):
        for spec in (self.spec(1, 1, 2, 2, 2, 0, 1), self.spec(2, 1, 2, 2, 1, 0, 1), self.spec(2, 2, 5, 1, 0, 1, 2)):
            omega = self.omega(spec.p, spec.k)
            N, D = build_ND(spec, omega)
            C1, C2 = build_C(spec, omega)
            self.assertEqual(C1, D - N.scale(omega))
            self.assertEqual(C2, N - D.scale(omega))
            for exponent in C1.terms:
                self.assertEqual(C2.coefficient(spec.n - exponent), C1.coefficient(exponent))

    def test_leading_and_constant(self):
        omega = self.omega(5, 1)
        ctx = omega.ctx
        C1, _ = build_C(self.spec(1, 1, 5, 1, 0, 0, 0), omega)
        self.assertEqual(C1.coefficient(3), ctx.one - omega)
        C1, _ = build_C(self.spec(2, 1, 2, 1, 1, 0, 1), self.omega(2, 1))
        self.assertEqual(C1.coefficient(0), self.omega(2, 1) - self.omega(2, 1) ** 2)

    def test_b1_first_family(self):
        B1 = build_Bz(self.spec(1, 1, 2, 2, 2, 0, 1), self.omega(2, 2))
        self.assertPolyEqual(B1, {6: 1, 5: 1, 3: 1, 2: 1, 0: 1})

    def test_b1_equal_exponents(self):
        B1 = build_Bz(self.spec(1, 1, 5, 1, 0, 0, 0), self.omega(5, 1))
        self.assertPolyEqual(B1, {3: 1, 1: -3, 0: 1})
        flags = coefficient_class(B1)
        self.assertTrue(flags["prime_field"])
        self.assertFalse(flags["plus_minus_one"])
        self.assertEqual(flags["terms"], 3)

    def test_b2_second_family(self):
        for k in (1, 2):
            spec = self.spec(2, 2, 2, k, 1, 0, 1)
            self.assertPolyEqual(build_Bz(spec, self.omega(2, k)), {5: 1, 1: 1, 0: 1})
            self.assertPolyEqual(build_Bz(spec.with_z(1), self.omega(2, k)), {5: 1, 4: 1, 0: 1})

    def test_b1_odd_characteristic(self):
        B1 = build_Bz(self.spec(1, 1, 5, 1, 0, 2, 1), self.omega(5, 1))
        self.assertPolyEqual(B1, {26: 1, 6: -1, 30: -1, 5: 1, 0: -1})
        self.assertTrue(coefficient_class(B1)["plus_minus_one"])

    def test_assemble_f(self):
        spec = self.spec(1, 1, 2, 1, 0, 0, 0)
        con = construct(spec)
        self.assertPolyEqual(con.B1, {3: 1, 1: 1, 0: 1})
        self.assertPolyEqual(assemble_f(spec, con.B1), {6: 1, 4: 1, 3: 1})
        self.assertEqual(con.f, assemble_f(spec, con.B1))

    def test_f_degree(self):
        spec = self.spec(1, 2, 2, 2, 0, 1, 2, r=12)
        con = construct(spec)
        self.assertEqual(con.f.degree, spec.r + (spec.q - 1) * con.B2.degree)
        self.assertLessEqual(len(con.f), 5)

    def test_construct_with_omega(self):
        spec = self.spec(1, 1, 2, 2, 2, 0, 1)
        conjugate = self.omega(2, 2) ** 2
        con = construct(spec, conjugate)
        self.assertEqual(con.omega, conjugate)
        self.assertIs(con.B, con.B1)
        with self.assertRaises(PreconditionError):
            construct(spec, self.omega(2, 1))


class TestTables(BaseTest):

    def test_rows(self):
        self.assertEqual(len(TABLE_ROWS), 10)
        self.assertEqual(table_form_text(Theorem.T1, 1, (1, 1, 1)), "+QRS -Q -R -S +1")
        with self.assertRaises(NotListedError):
            table_form_text(Theorem.T2, 1, (-1, 1, 1))

    def test_closed_form(self):
        ctx = self.field(2, 1)
        form = table_closed_form(Theorem.T1, 2, (1, 1, 1), 1, 4, 16, ctx=ctx)
        self.assertPolyEqual(form, {21: 1, 5: 1, 17: 1, 20: 1, 0: 1})
        ctx = self.field(5, 1)
        form = table_closed_form(Theorem.T2, 2, (1, -1, -1), 1, 5, 125, ctx=ctx)
        self.assertPolyEqual(form, {131: -1, 6: 1, 1: -1, 5: -1, 125: 1})

    def test_instantiate(self):
        self.assertEqual(instantiate_row((1, -1, 1), 2), (0, 1, 2))
        self.assertEqual(instantiate_row((-1, -1, -1), 5), (1, 3, 5))
        self.assertIsNone(instantiate_row((1, -1, 1), 7))

    def test_table_matches_construction(self):
        ctx = self.field(5, 1)
        omega = self.omega(5, 1)
        for theorem, sigma in TABLE_ROWS:
            a, b, c = instantiate_row(sigma, 5)
            for z in (1, 2):
                spec = self.spec(theorem, z, 5, 1, a, b, c)
                self.assertEqual(build_Bz(spec, omega),
                                 table_closed_form(theorem, z, sigma, spec.Q, spec.R, spec.S, ctx=ctx))

    def test_canonicalize(self):
        # sigma = (-1, 1, 1) becomes (1, 1, -1)
        spec = self.spec(1, 1, 2, 2, 1, 0, 2)
        permuted, sign = canonicalize_sigma(Theorem.T1, spec)
        self.assertEqual(permuted.sigma, ResidueTriple(1, 1, -1))
        self.assertEqual((permuted.a, permuted.b, permuted.c), (0, 2, 1))
        self.assertEqual(sign, 1)

        spec = self.spec(2, 1, 2, 2, 0, 0, 1)
        permuted, sign = canonicalize_sigma(Theorem.T2, spec)
        self.assertEqual(permuted, spec)
        self.assertEqual(sign, 1)

        with self.assertRaises(PreconditionError):
            canonicalize_sigma(Theorem.T2, self.spec(1, 1, 2, 2, 0, 0, 0))

    def test_canonicalize_sign(self):
        omega = self.omega(5, 1)
        ctx = omega.ctx
        spec = self.spec(2, 1, 5, 1, 1, 0, 2)
        self.assertEqual(spec.sigma, ResidueTriple(-1, 1, 1))
        permuted, sign = canonicalize_sigma(Theorem.T2, spec, omega)
        self.assertEqual(permuted.sigma, ResidueTriple(1, 1, -1))
        self.assertIn(sign, (1, -1))
        self.assertEqual(build_Bz(spec, omega), build_Bz(permuted, omega).scale(ctx.from_int(sign)))


class TestGcd(BaseTest):

    def test_first_family_coprime(self):
        con = construct(self.spec(1, 1, 2, 2, 2, 0, 1))
        self.assertPolyEqual(poly_gcd_ext(con.B1, con.B2, con.ctx), {0: 1})

    def test_second_family_common_factor(self):
        con = construct(self.spec(2, 1, 2, 2, 1, 0, 1))
        self.assertPolyEqual(poly_gcd_ext(con.B1, con.B2, con.ctx), {2: 1, 1: 1, 0: 1})

    def test_zero(self):
        ctx = self.field(5, 1)
        a = self.poly(ctx, {2: 2, 0: 2})
        self.assertPolyEqual(poly_gcd_ext(a, SparsePoly(ctx), ctx), {2: 1, 0: 1})
        with self.assertRaises(DomainError):
            poly_gcd_ext(SparsePoly(ctx), SparsePoly(ctx), ctx)

    def test_cap(self):
        con = construct(self.spec(2, 1, 2, 2, 1, 0, 1))
        with self.assertRaises(LimitsError):
            poly_gcd_ext(con.B1, con.B2, con.ctx, Limits(gcd_degree_cap=2))


class TestSparsePoly(BaseTest):

    def test_arithmetic(self):
        ctx = self.field(5, 1)
        a = self.poly(ctx, {3: 1, 0: 2})
        b = self.poly(ctx, {3: 4, 1: 1})
        self.assertPolyEqual(a + b, {1: 1, 0: 2})
        self.assertPolyEqual(a * b, {6: 4, 4: 1, 3: 3, 1: 2})
        self.assertPolyEqual(a.reversed(3), {3: 2, 0: 1})
        self.assertPolyEqual(a.substitute_power(4, 1), {13: 1, 1: 2})
        self.assertEqual(a(ctx.one), ctx.from_int(3))
        self.assertEqual(str(self.poly(ctx, {})), "0")

    def test_exponent_bounds(self):
        ctx = self.field(2, 1)
        with self.assertRaises(DomainError):
            SparsePoly.monomial(ctx, -1)
        with self.assertRaises(LimitsError):
            SparsePoly.monomial(ctx, 2 ** 128)
