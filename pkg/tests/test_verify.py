from base_test_class import BaseTest

from permpenta.config import Limits
from permpenta.exceptions import LimitsError, PreconditionError, UnsupportedCharacteristicError
from permpenta.field_core import find_omega, log_table
from permpenta.literature import LITERATURE_ROWS, check_literature_row, literature_row
from permpenta.pentanomial import TABLE_ROWS, Theorem, construct
from permpenta.sparse_poly import SparsePoly, poly_gcd_ext
from permpenta.verify import (_CodeSpace, _map, _TabulatedMap, brute_force_permutes, check_deg1mu_lemma,
                              check_gcd_structure, check_mu_lemma, check_prop_cubic, check_ratio_identity,
                              check_t2_roots, check_table_row, criterion, criterion_T1, criterion_T2, cubic_maps,
                              field_images, monomial_verdict, mu_reduction_permutes, r_values, sweep_grid,
                              verify_many, verify_spec, verify_thm3)

SMALL_FIELDS = ((2, 1), (2, 2), (5, 1))
# q in {2, 4, 5, 7, 8, 13, 16}
LEMMA_FIELDS = ((2, 1), (2, 2), (5, 1), (7, 1), (2, 3), (13, 1), (2, 4))
GRID_PRIMES = (2, 5, 7, 13)


def small_grid(imax: int = 3, r_steps: int = 2):
    """ The sweep grid restricted to q <= 16. """
    return sweep_grid(GRID_PRIMES, 4, imax, max_log2_q2=8, r_steps=r_steps)


class TestCriterion(BaseTest):

    def test_first_family(self):
        self.assertTrue(criterion_T1(self.spec(1, 1, 2, 2, 0, 1, 2)))
        self.assertFalse(criterion_T1(self.spec(1, 1, 2, 2, 0, 0, 0)))
        self.assertTrue(criterion_T1(self.spec(1, 1, 2, 1, 0, 0, 0)))
        with self.assertRaises(PreconditionError):
            criterion_T1(self.spec(2, 1, 2, 1, 0, 0, 0))

    def test_second_family(self):
        self.assertTrue(criterion_T2(self.spec(2, 1, 2, 2, 1, 0, 1)))
        self.assertFalse(criterion_T2(self.spec(2, 1, 2, 1, 1, 0, 1)))
        self.assertTrue(criterion_T2(self.spec(2, 1, 2, 2, 0, 2, 0, r=11)))
        with self.assertRaises(PreconditionError):
            criterion_T2(self.spec(1, 1, 2, 2, 0, 0, 0))

    def test_monomial_verdict(self):
        grid = sweep_grid((2, 5), 2, 1, max_log2_q2=10, r_steps=1, z_values=(1,))
        specs = [spec for spec in grid if spec.r == spec.n]
        self.assertEqual(len(specs), 64)
        for spec in specs:
            self.assertEqual(monomial_verdict(spec), criterion(spec), spec.label())


class TestOracles(BaseTest):

    def test_monomials(self):
        ctx = self.field(2, 2)
        self.assertTrue(brute_force_permutes(SparsePoly.monomial(ctx, 1), ctx))
        self.assertTrue(brute_force_permutes(SparsePoly.monomial(ctx, 2), ctx))
        self.assertFalse(brute_force_permutes(SparsePoly.monomial(ctx, 3), ctx))
        self.assertTrue(brute_force_permutes(SparsePoly.monomial(ctx, 7), ctx))

    def test_chunks(self):
        ctx = self.field(2, 2)
        f = construct(self.spec(1, 1, 2, 2, 0, 1, 2)).f
        self.assertTrue(brute_force_permutes(f, ctx, Limits(chunk_size=4)))

    def test_cap(self):
        ctx = self.field(2, 2)
        with self.assertRaises(LimitsError):
            brute_force_permutes(SparsePoly.monomial(ctx, 1), ctx, Limits(oracle_cap=15))

    def test_workers(self):
        ctx = self.field(2, 3)
        limits = Limits(workers=2, chunk_size=8)
        self.assertTrue(brute_force_permutes(SparsePoly.monomial(ctx, 5), ctx, limits))
        self.assertFalse(brute_force_permutes(SparsePoly.monomial(ctx, 9), ctx, limits))

    def test_worker_pool_early_exit(self):
        results = _map(abs, [-1, -2, -3, -4, -5, -6], 2)
        self.assertEqual(next(results), 1)
        results.close()
        self.assertEqual(list(_map(abs, [-1, -2, -3], 2)), [1, 2, 3])

    def test_field_images(self):
        for p, k in ((2, 2), (5, 1)):
            con = construct(self.spec(1, 1, p, k, 0, 1, 0))
            expected = [con.f(x).code for x in con.ctx.elements()]
            self.assertEqual(field_images(con.f, con.ctx).tolist(), expected)

    def test_mu_reduction(self):
        spec = self.spec(1, 1, 2, 2, 0, 1, 2)
        con = construct(spec)
        self.assertTrue(mu_reduction_permutes(spec, con.B, con.ctx))
        spec = self.spec(1, 1, 2, 2, 0, 0, 0)
        con = construct(spec)
        self.assertFalse(mu_reduction_permutes(spec, con.B, con.ctx))

    def test_verify_spec(self):
        report = verify_spec(self.spec(2, 1, 2, 2, 1, 0, 1))
        self.assertEqual(report.verdicts, [True, True, True])
        self.assertTrue(report.agree)
        self.assertFalse(report.skipped)
        self.assertIsNone(report.e)

        report = verify_spec(self.spec(1, 2, 2, 2, 0, 0, 0), Limits(oracle_cap=8))
        self.assertTrue(report.skipped)
        self.assertEqual(report.verdicts, [False])
        self.assertEqual(report.e, 1)

    def test_sweep_agrees(self):
        specs = list(sweep_grid((2,), 2, 1))
        self.assertEqual(len(specs), 160)
        self.assertEqual(specs[0], self.spec(1, 1, 2, 1, 0, 0, 0))
        reports = verify_many(specs)
        self.assertTrue(all(report.agree for report in reports))
        self.assertTrue(any(report.criterion_verdict for report in reports))
        self.assertFalse(all(report.criterion_verdict for report in reports))

    def test_sweep_odd_characteristic(self):
        reports = verify_many(sweep_grid((5, 7), 1, 1))
        self.assertTrue(all(report.agree for report in reports))

    def test_sweep_grid_primes(self):
        reports = verify_many(small_grid(imax=2))
        self.assertEqual({report.spec.p for report in reports}, set(GRID_PRIMES))
        for report in reports:
            self.assertFalse(report.skipped)
            self.assertTrue(report.agree, report.spec.label())

    def test_sweep_workers(self):
        specs = list(sweep_grid((2,), 2, 0))
        reports = verify_many(specs, Limits(workers=2))
        self.assertEqual([report.spec for report in reports], specs)
        self.assertTrue(all(report.agree for report in reports))

    def test_sweep_grid(self):
        self.assertEqual(r_values(3, 4, 2), [3, 8, 13])
        self.assertEqual(r_values(3, 2, 2), [3, 6])
        self.assertEqual(list(sweep_grid((2,), 2, -1)), [])
        with self.assertRaises(UnsupportedCharacteristicError):
            list(sweep_grid((2, 3), 1, 1))
        # 2^10 < q^2 for q = 2^6
        self.assertEqual({spec.k for spec in sweep_grid((2,), 8, 0, max_log2_q2=10)}, {1, 2, 3, 4, 5})


class TestMuLemmas(BaseTest):

    def test_lemmas(self):
        for p, k in SMALL_FIELDS:
            ctx = self.field(p, k)
            for check in (check_deg1mu_lemma, check_mu_lemma, check_prop_cubic):
                report = check(ctx)
                self.assertTrue(report.passed, f"{report.name} q={ctx.q}: {report.failures}")
                self.assertGreater(report.checked, 0)

    def test_lemmas_exhaustive(self):
        for p, k in LEMMA_FIELDS:
            ctx = self.field(p, k)
            for check in (check_deg1mu_lemma, check_mu_lemma):
                report = check(ctx)
                self.assertTrue(report.details["exhaustive"], f"{report.name} q={ctx.q}")
                self.assertTrue(report.passed, f"{report.name} q={ctx.q}: {report.failures}")
            self.assertEqual(check_mu_lemma(ctx).checked, (ctx.q2 - ctx.q) * (ctx.q + 1))

    def test_deg1mu_pair_count(self):
        # pairs of equal norm: (0, 0) and (q - 1)(q + 1)^2 pairs of units
        ctx = self.field(2, 2)
        self.assertEqual(check_deg1mu_lemma(ctx).checked, ctx.q ** 4 - 1 - (ctx.q - 1) * (ctx.q + 1) ** 2)

    def test_cubic_maps_more_fields(self):
        for p, k in LEMMA_FIELDS:
            report = check_prop_cubic(self.field(p, k))
            self.assertTrue(report.passed, report.failures)

    def test_rho_on_mu3(self):
        ctx = self.field(2, 1)
        rho, _ = cubic_maps(ctx)
        images = {rho(x) for x in (ctx.one, ctx.generator, ctx.generator ** 2)}
        self.assertEqual({point.value.code if point.value is not None else None for point in images}, {0, 1, None})

    def test_sampled_pairs(self):
        report = check_deg1mu_lemma(self.field(2, 2), Limits(pair_exhaustive_cap=16, lemma_sample_size=50))
        self.assertFalse(report.details["exhaustive"])
        self.assertTrue(report.passed)


class TestConsequences(BaseTest):

    def test_ratio_identity(self):
        for spec in (self.spec(1, 1, 2, 2, 2, 0, 1), self.spec(1, 2, 2, 2, 0, 1, 2, r=12),
                     self.spec(2, 1, 5, 1, 0, 1, 0), self.spec(2, 2, 2, 2, 1, 0, 1)):
            report = check_ratio_identity(spec)
            self.assertTrue(report.passed, report.failures)

    def test_t2_roots(self):
        for p, k in ((2, 1), (2, 2), (5, 1), (7, 1), (2, 3), (13, 1), (2, 4)):
            for theorem in (Theorem.T1, Theorem.T2):
                report = check_t2_roots(self.spec(theorem, 1, p, k, 0, 0, 0))
                self.assertTrue(report.passed, report.failures)
                self.assertEqual(report.details["has_root"], theorem == Theorem.T2 and p ** k % 3 == 2)

    def test_gcd_structure(self):
        for spec in (self.spec(1, 1, 2, 2, 2, 0, 1), self.spec(2, 1, 2, 2, 1, 0, 1), self.spec(2, 1, 2, 2, 0, 0, 0),
                     self.spec(2, 1, 5, 1, 0, 1, 0), self.spec(2, 1, 7, 1, 0, 0, 1), self.spec(1, 1, 5, 1, 0, 0, 0)):
            report = check_gcd_structure(spec)
            self.assertTrue(report.passed, report.failures)

    def test_ratio_identity_grid(self):
        for spec in small_grid():
            report = check_ratio_identity(spec)
            self.assertTrue(report.passed, report.failures)

    def test_t2_roots_grid(self):
        for spec in small_grid(r_steps=1):
            if spec.r != spec.n:
                continue
            report = check_t2_roots(spec)
            self.assertTrue(report.passed, report.failures)

    def test_gcd_structure_grid(self):
        # B_z has degree up to 3 p^imax; the Euclidean algorithm is quadratic in it
        imax = {2: 3, 5: 3, 7: 2, 13: 2}
        checked = 0
        for spec in small_grid(r_steps=1):
            if spec.z == 2 or spec.r != spec.n or max(spec.a, spec.b, spec.c) > imax[spec.p]:
                continue
            if spec.theorem == Theorem.T2 and min(spec.Q + spec.S, spec.R) > 3:
                continue
            report = check_gcd_structure(spec)
            self.assertTrue(report.passed, report.failures)
            checked += 1
        self.assertGreater(checked, 400)

    def test_gcd_outside_prime_field(self):
        # scaling by omega moves the coefficients out of F_p, so the ExtElem Euclidean algorithm runs
        for spec in (self.spec(2, 1, 2, 1, 1, 0, 1), self.spec(1, 1, 2, 1, 2, 0, 1), self.spec(2, 1, 5, 1, 0, 1, 0)):
            con = construct(spec)
            omega = find_omega(con.ctx)
            scaled = poly_gcd_ext(con.B1.scale(omega), con.B2.scale(omega), con.ctx)
            self.assertEqual(scaled, poly_gcd_ext(con.B1, con.B2, con.ctx), spec.label())


class TestLinearEquivalence(BaseTest):

    def test_q_one_mod_three(self):
        report = verify_thm3(self.spec(1, 1, 2, 2, 0, 0, 0))
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.summary(), "q≡1 branch, equality holds on 16/16 points")
        self.assertTrue(report.eta_bijective)
        self.assertTrue(report.rho_bijective)

    def test_q_two_mod_three(self):
        report = verify_thm3(self.spec(1, 1, 2, 1, 0, 0, 0))
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.summary(), "q≡2 branch, equality holds on 4/4 points")

    def test_second_family(self):
        for spec in (self.spec(2, 2, 5, 1, 0, 1, 0), self.spec(2, 1, 2, 2, 1, 0, 1), self.spec(2, 1, 7, 1, 0, 1, 0),
                     self.spec(1, 2, 2, 3, 0, 1, 2)):
            report = verify_thm3(spec)
            self.assertTrue(report.passed, f"{spec.label()}: {report.failures}")
            self.assertEqual(report.checked, spec.q ** 2)
        self.assertEqual(verify_thm3(self.spec(2, 2, 5, 1, 0, 1, 0)).summary(),
                         "q≡2 branch, equality holds on 25/25 points")

    def test_grid(self):
        branches = set()
        for spec in small_grid(r_steps=1):
            if spec.r != spec.n:
                continue
            report = verify_thm3(spec)
            self.assertTrue(report.passed, f"{spec.label()}: {report.failures}")
            self.assertTrue(report.exhaustive)
            self.assertEqual(report.checked, spec.q ** 2)
            self.assertTrue(report.eta_bijective and report.rho_bijective)
            branches.add(report.branch)
        self.assertEqual(branches, {"q≡1", "q≡2"})

    def test_tabulated_map_checks(self):
        ctx = self.field(2, 2)
        table = log_table(ctx)
        field = _CodeSpace(ctx, 1)
        x = field.vectors()[0]
        conjugation = _TabulatedMap(field, field, (table.power(x, ctx.q),))
        self.assertTrue(conjugation.is_linear())
        self.assertTrue(conjugation.is_bijective())
        # additive but only F_2-linear
        square = _TabulatedMap(field, field, (table.power(x, 2),))
        self.assertFalse(square.is_linear())
        cube = _TabulatedMap(field, field, (table.power(x, 3),))
        self.assertFalse(cube.is_linear())
        self.assertFalse(cube.is_bijective())

        pairs = _CodeSpace(ctx, 2)
        u, v = pairs.vectors()
        swap = _TabulatedMap(pairs, pairs, (v, u))
        self.assertTrue(swap.is_linear())
        self.assertTrue(swap.is_bijective())
        diagonal = _TabulatedMap(pairs, pairs, (u, u))
        self.assertTrue(diagonal.is_linear())
        self.assertFalse(diagonal.is_bijective())
        outside = _TabulatedMap(field, pairs, (x, x))
        self.assertFalse(outside.is_bijective())

    def test_sampled(self):
        report = verify_thm3(self.spec(1, 1, 2, 2, 0, 1, 2), limits=Limits(oracle_cap=8, sample_size=100))
        self.assertFalse(report.exhaustive)
        self.assertEqual(report.checked, 100)
        self.assertEqual(report.seed, 0)
        self.assertTrue(report.passed, report.failures)

    def test_requires_r_equal_n(self):
        with self.assertRaises(PreconditionError):
            verify_thm3(self.spec(1, 1, 2, 2, 0, 0, 0, r=8))


class TestClosedForms(BaseTest):

    def test_rows(self):
        for p in (2, 5, 7):
            for theorem, sigma in TABLE_ROWS:
                report = check_table_row(theorem, sigma, p, 1)
                self.assertTrue(report.passed, report.failures)
        self.assertFalse(check_table_row(Theorem.T1, (1, 1, -1), 7, 1).details["instantiable"])
        self.assertTrue(check_table_row(Theorem.T1, (1, 1, 1), 7, 1).details["instantiable"])
        with self.assertRaises(UnsupportedCharacteristicError):
            check_table_row(Theorem.T1, (1, 1, 1), 3, 1)


class TestLiterature(BaseTest):

    def test_rows(self):
        self.assertEqual(len(LITERATURE_ROWS), 17)
        for row in LITERATURE_ROWS:
            for k in (1, 2):
                report = check_literature_row(row, k)
                self.assertTrue(report.passed, f"{row.key} k={k}: {report.failures}")

    def test_conditional_row(self):
        row = literature_row("L03")
        self.assertTrue(row.applies(2))
        self.assertFalse(row.applies(4))
        self.assertEqual(row.spec(1).r, 6)
