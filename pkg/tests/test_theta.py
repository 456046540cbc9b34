"""Theta constructors against brute-force oracles and the classical laws."""

from fractions import Fraction as F

import pytest

from qstrings.series import Monomial, QSeries
from qstrings.theta import (
    DivergentProduct,
    J,
    Jbar,
    Jm,
    OutOfStrip,
    ThetaZeroDenominator,
    comb2,
    eta,
    j_split_components,
    jtheta,
    jtheta_prod,
    jtheta_sum,
    jtheta_valuation,
    pochhammer,
    theta_quotient,
)

from oracles import int_coeffs, jtheta_sum_bruteforce, pochhammer_product

q = Monomial.q
mq = Monomial.mq

PENTAGONAL_13 = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def assert_equal(a: QSeries, b: QSeries, upto):
    m = a.compare(b, upto)
    assert m is None, f"mismatch at q^{m.exponent}: {m.left} vs {m.right}" if m else ""


class TestPochhammer:
    def test_pentagonal(self):
        s = pochhammer(q(1), 1, None, 13)
        assert [int(s[k].as_fraction()) for k in range(13)] == PENTAGONAL_13

    def test_empty_product(self):
        s = pochhammer(q(1), 1, 0, 10)
        assert s[0].as_fraction() == 1 and not s.compare(QSeries.one(10), 10)

    def test_finite_matches_bruteforce(self):
        s = pochhammer(q(F(1, 2)), F(3, 2), 4, 9)
        d = pochhammer_product(F(1), F(1, 2), F(3, 2), F(9))
        # brute force is the infinite product; redo with 4 factors
        from oracles import product_expand
        d = product_expand([(F(1), F(1, 2) + i * F(3, 2)) for i in range(4)], F(9))
        assert {e: c.as_fraction() for e, c in s.terms.items()} == d

    def test_divergent(self):
        with pytest.raises(DivergentProduct):
            pochhammer(q(-1), 1, None, 5)

    def test_unit_argument_constant_factor(self):
        # (-1; q)_inf = 2 * (-q; q)_inf
        a = pochhammer(Monomial(2, F(0)), 1, None, 8)
        b = pochhammer(mq(1), 1, None, 8).scale(2)
        assert_equal(a, b, 8)

    def test_one_argument_gives_exact_zero(self):
        assert pochhammer(q(0), 1, None, 8).is_exact_zero


class TestJthetaSum:
    def test_zero_argument_family(self):
        for n in (-2, 0, 1, 3):
            s = jtheta_sum(q(n), 1, 25)
            assert not s.terms

    def test_j_minus_one(self):
        s = jtheta_sum(Monomial(2, F(0)), 1, 7)
        assert int_coeffs({e: c.as_fraction() for e, c in s.terms.items()}, 7) == [2, 2, 0, 2, 0, 0, 2]

    def test_against_bruteforce_fractional(self):
        s = jtheta_sum(q(F(2, 5)), F(7, 5), 12)
        d = jtheta_sum_bruteforce(1, F(2, 5), F(7, 5), F(12))
        assert {e: c.as_fraction() for e, c in s.terms.items()} == d

    def test_imaginary_unit(self):
        s = jtheta_sum(Monomial(1, F(1)), 4, 15)
        # n = 0 and n = 1 terms: 1 - i q
        assert s[0].re == 1 and s[1].im == -1


class TestTripleProduct:
    SAMPLES = [
        (q(F(1, 2)), F(1)), (q(F(1, 3)), F(1)), (q(F(2, 3)), F(1)),
        (q(F(1, 5)), F(1)), (q(F(3, 5)), F(1)), (q(F(1, 7)), F(1)),
        (q(F(5, 7)), F(1)), (q(1), F(3)), (q(2), F(3)), (q(1), F(2)),
        (q(2), F(5)), (q(3), F(7)), (q(F(1, 2)), F(2)), (q(F(3, 2)), F(2)),
        (q(F(5, 2)), F(4)), (mq(0), F(1)), (mq(1), F(2)), (mq(1), F(3)),
        (mq(3), F(8)), (mq(2), F(5)), (mq(F(1, 2)), F(1)), (mq(F(1, 3)), F(2)),
        (mq(F(5, 3)), F(2)), (q(F(7, 3)), F(3)), (mq(6), F(24)),
    ]

    def test_sum_equals_product_25_samples(self):
        assert len(self.SAMPLES) == 25
        for x, base in self.SAMPLES:
            s = jtheta_sum(x, base, 30)
            p = jtheta(x, base, 30)
            assert_equal(s, p, 30)

    def test_strip_enforced(self):
        with pytest.raises(OutOfStrip):
            jtheta_prod(q(5), 3, 10)
        with pytest.raises(OutOfStrip):
            jtheta_prod(q(0), 3, 10)


class TestJthetaCanonical:
    def test_exact_zero_detection(self):
        assert jtheta(q(3), 1, 20).is_exact_zero
        assert jtheta(q(0), 1, 20).is_exact_zero
        assert jtheta(q(-4), 2, 20).is_exact_zero
        assert not jtheta(mq(0), 1, 20).is_exact_zero

    def test_elliptic_reduction_matches_sum(self):
        # j(q^4; q^3) needs a two-step reduction
        assert_equal(jtheta(q(4), 3, 20), jtheta_sum(q(4), 3, 20), 20)
        assert_equal(jtheta(q(-5), 2, 20), jtheta_sum(q(-5), 2, 20), 20)
        assert_equal(jtheta(mq(-3), F(5, 2), 15), jtheta_sum(mq(-3), F(5, 2), 15), 15)

    def test_one_seven_symmetry(self):
        # j(x;q) = j(q/x;q) at x = q^(1/3)
        assert_equal(jtheta(q(F(1, 3)), 1, 25), jtheta(q(F(2, 3)), 1, 25), 25)

    def test_imaginary_fallback(self):
        x = Monomial(1, F(1))
        assert_equal(jtheta(x, 4, 15), jtheta_sum(x, 4, 15), 15)

    def test_valuation(self):
        assert jtheta_valuation(q(1), 3) == 0
        assert jtheta_valuation(q(4), 3) == -1
        assert jtheta_valuation(q(F(1, 2)), 1) == 0
        assert jtheta_valuation(mq(0), 2) == 0
        # j(i*q; q^4): minimum of C(n,2)*4 + n over n; n=0 gives 0
        assert jtheta_valuation(Monomial(1, F(1)), 4) == 0
        with pytest.raises(ThetaZeroDenominator):
            jtheta_valuation(q(3), 1)

    def test_valuation_matches_series(self):
        for x, base in [(q(4), 3), (q(-5), 2), (q(F(9, 2)), F(5, 2)), (mq(-2), 3),
                        (Monomial(1, F(-3)), 2), (Monomial(3, F(5)), 2)]:
            s = jtheta(x, base, 12)
            assert s.ord == jtheta_valuation(x, base)


class TestShorthands:
    def test_J1(self):
        s = Jm(1, 13)
        assert [int(s[k].as_fraction()) for k in range(13)] == PENTAGONAL_13

    def test_Jm_is_Jm3m(self):
        assert_equal(Jm(2, 24), J(2, 6, 24), 24)

    def test_product_rearrangements(self):
        # the standard list, each checked as a series identity to order 30
        T = 30
        j1, j2, j3, j4, j6, j12 = (Jm(m, T) for m in (1, 2, 3, 4, 6, 12))
        cases = [
            (Jbar(0, 1, T) * j1, j2 * j2 * 2),                    # Jbar01 = 2 J2^2/J1
            (Jbar(0, 1, T), Jbar(1, 4, T) * 2),                   # Jbar01 = 2 Jbar14
            (Jbar(1, 2, T) * j1 * j1 * j4 * j4, j2 ** 5),          # Jbar12 = J2^5/(J1^2 J4^2)
            (J(1, 2, T) * j2, j1 * j1),                            # J12 = J1^2/J2
            (Jbar(1, 3, T) * j1 * j6, j2 * j3 * j3),               # Jbar13 = J2 J3^2/(J1 J6)
            (J(1, 4, T) * j2, j1 * j4),                            # J14 = J1 J4/J2
            (J(1, 6, T) * j2 * j3, j1 * j6 * j6),                  # J16 = J1 J6^2/(J2 J3)
            (Jbar(1, 6, T) * j1 * j4 * j6, j2 * j2 * j3 * j12),    # Jbar16 = J2^2 J3 J12/(J1 J4 J6)
        ]
        for lhs, rhs in cases:
            assert_equal(lhs, rhs, 25)


class TestEta:
    def test_eta1(self):
        s = eta(1, 10)
        t = Jm(1, F(10) - F(1, 24)).shift(Monomial(0, F(1, 24)))
        assert_equal(s, t, 10)

    def test_eta12_lattice(self):
        s = eta(F(1, 2), 5)
        assert all(e.denominator in (1, 2, 3, 4, 6, 8, 12, 16, 24, 48) for e in s.terms)
        assert s.ord == F(1, 48)

    def test_eta12_exponent_arithmetic(self):
        s = eta(12, 30)
        t = Jm(12, F(30) - F(1, 2)).shift(Monomial(0, F(1, 2)))
        assert_equal(s, t, 30)


class TestJSplit:
    def test_m1_identity(self):
        comps = j_split_components(q(F(1, 2)), 1, 1, 20)
        assert len(comps) == 1
        assert_equal(comps[0], jtheta(q(F(1, 2)), 1, 20), 20)

    @pytest.mark.parametrize("mm,z,base", [
        (2, q(F(1, 2)), F(1)),
        (2, mq(1), F(4)),
        (3, q(2), F(5)),
        (3, q(1), F(5)),
        (12, q(F(1, 2)), F(1)),
    ])
    def test_components_sum(self, mm, z, base):
        T = 20
        total = QSeries.zero()
        for c in j_split_components(z, base, mm, T):
            total = total + c
        assert_equal(total, jtheta(z, base, T), T)


class TestThetaQuotient:
    def test_simple_quotient(self):
        # Jbar_{1,2} = J2^5 / (J1^2 J4^2) as a quotient build
        T = 25
        lhs = theta_quotient(
            num=[(q(2), 6)] * 5,
            den=[(q(1), 3)] * 2 + [(q(4), 12)] * 2,
            order=T,
        )
        assert_equal(lhs, Jbar(1, 2, T), T)

    def test_zero_numerator_short_circuits(self):
        s = theta_quotient(num=[(q(3), 1)], den=[(q(1), 3)], order=10)
        assert s.is_exact_zero

    def test_zero_denominator_raises(self):
        with pytest.raises(ThetaZeroDenominator):
            theta_quotient(num=[(q(1), 3)], den=[(q(2), 1)], order=10)

    def test_prefactor_and_scalar(self):
        T = 12
        s = theta_quotient(num=[(q(1), 3)], den=[], order=T,
                           prefactor=Monomial(2, F(5, 2)), scalar=F(1, 2))
        t = J(1, 3, T - F(5, 2)).shift(Monomial(2, F(5, 2))).scale(F(1, 2))
        assert_equal(s, t, T)


# -- the general theta-function laws at fixed sample points -------------------

GENERIC_X = [q(F(1, 5)), mq(F(2, 7)), q(3), Monomial(1, F(1, 2)), q(F(3, 7))]
GENERIC_Y = [q(F(1, 3)), q(F(2, 5)), mq(F(1, 7)), q(F(5, 7)), Monomial(3, F(1, 3))]


def jt(x, order, base=1):
    return jtheta(x, base, order)


class TestEllipticLaw:
    @pytest.mark.parametrize("n", [-2, -1, 1, 2])
    def test_elliptic(self, n):
        T = 25
        for x in GENERIC_X:
            base = F(1)
            lhs = jtheta(Monomial(0, n * base) * x, base, T)
            shift = Monomial(2 * n - n * x.unit_k, -base * comb2(n) - n * x.qexp)
            rhs = jtheta(x, base, T - shift.qexp).shift(shift)
            assert_equal(lhs, rhs, T)


class TestReflectionLaw:
    def test_one_seven(self):
        T = 25
        for x in GENERIC_X:
            qx = Monomial(-x.unit_k, 1 - x.qexp)  # q/x
            assert_equal(jt(x, T), jt(qx, T), T)


class TestProductDissection:
    @pytest.mark.parametrize("n", [2, 3])
    def test_dissection(self, n):
        # j(x;q) * J_n^n = J_1 * prod_k j(q^k x; q^n)
        T = 25
        for x in GENERIC_X[:4]:
            lhs = jt(x, T) * (Jm(n, T) ** n)
            rhs = Jm(1, T)
            for k in range(n):
                rhs = rhs * jtheta(Monomial(0, F(k)) * x, n, T)
            t = min(lhs.trunc, rhs.trunc)
            assert_equal(lhs, rhs, min(t, T))


class TestRootsOfUnityDissection:
    def test_n2(self):
        # j(x^2;q^2) J_1^2 = J_2 j(x;q) j(-x;q)
        T = 25
        for x in GENERIC_X[:4]:
            lhs = jtheta(x ** 2, 2, T) * (Jm(1, T) ** 2)
            rhs = Jm(2, T) * jt(x, T) * jt(-x, T)
            assert_equal(lhs, rhs, T)

    def test_n4(self):
        # j(x^4;q^4) J_1^4 = J_4 j(x;q) j(ix;q) j(-x;q) j(-ix;q)
        T = 20
        i = Monomial(1, F(0))
        for x in [q(F(1, 5)), q(F(2, 7)), q(F(1, 3))]:
            lhs = jtheta(x ** 4, 4, T) * (Jm(1, T) ** 4)
            rhs = Jm(4, T)
            for u in range(4):
                rhs = rhs * jt((i ** u) * x, T)
            assert_equal(lhs, rhs, T)


class TestWeierstrass:
    QUADS = [
        (q(F(1, 5)), q(F(1, 7)), q(F(1, 11)), q(F(1, 13))),
        (q(F(2, 5)), q(F(3, 7)), q(F(5, 11)), q(F(4, 13))),
        (mq(F(1, 5)), q(F(1, 7)), q(F(1, 11)), q(F(1, 13))),
        (q(F(1, 2)), q(F(1, 5)), q(F(1, 7)), q(F(1, 11))),
        (q(F(1, 3)), mq(F(1, 5)), q(F(2, 7)), q(F(3, 11))),
        (q(F(3, 5)), q(F(2, 7)), mq(F(5, 11)), q(F(1, 13))),
        (q(F(1, 5)), q(F(4, 7)), q(F(2, 11)), mq(F(3, 13))),
        (q(F(2, 5)), q(F(1, 7)), q(F(3, 11)), Monomial(1, F(1, 13))),
        (q(F(1, 7)), q(F(1, 5)), q(F(1, 13)), q(F(1, 11))),
        # the quadruple with d = -i used for level-4 work
        (mq(5), q(4), q(2), Monomial(3, F(0))),
    ]

    def test_three_term_relation(self):
        T = 20
        for a, b, c, d in self.QUADS:
            base = F(12) if d == Monomial(3, F(0)) else F(1)
            lhs = (jtheta(a * c, base, T) * jtheta(a / c, base, T)
                   * jtheta(b * d, base, T) * jtheta(b / d, base, T))
            r1 = (jtheta(a * d, base, T) * jtheta(a / d, base, T)
                  * jtheta(b * c, base, T) * jtheta(b / c, base, T))
            bc = b / c
            r2 = (jtheta(a * b, base, T) * jtheta(a / b, base, T)
                  * jtheta(c * d, base, T) * jtheta(c / d, base, T))
            rhs = r1 + r2.shift(bc)
            t = min(lhs.trunc, rhs.trunc, T)
            assert_equal(lhs, rhs, t)


class TestHalpernTrios:
    def test_product_to_two_squares(self):
        # j(x;q) j(y;q) = j(-xy;q^2) j(-q/x*y;q^2) - x j(-qxy;q^2) j(-y/x;q^2)
        T = 20
        for x, y in zip(GENERIC_X, GENERIC_Y):
            lhs = jt(x, T) * jt(y, T)
            t1 = jtheta(-(x * y), 2, T) * jtheta(-(Monomial.q(1) / x * y), 2, T)
            t2 = jtheta(-(Monomial.q(1) * x * y), 2, T) * jtheta(-(y / x), 2, T)
            rhs = t1 - t2.shift(x)
            assert_equal(lhs, rhs, min(lhs.trunc, rhs.trunc, T))

    def test_difference_form(self):
        # j(-x;q) j(y;q) - j(x;q) j(-y;q) = 2x j(y/x;q^2) j(qxy;q^2)
        T = 20
        for x, y in zip(GENERIC_X, GENERIC_Y):
            lhs = jt(-x, T) * jt(y, T) - jt(x, T) * jt(-y, T)
            rhs = (jtheta(y / x, 2, T) * jtheta(Monomial.q(1) * x * y, 2, T)).shift(x).scale(2)
            assert_equal(lhs, rhs, min(lhs.trunc, rhs.trunc, T))

    def test_sum_form(self):
        # j(-x;q) j(y;q) + j(x;q) j(-y;q) = 2 j(xy;q^2) j(q y/x;q^2)
        T = 20
        for x, y in zip(GENERIC_X, GENERIC_Y):
            lhs = jt(-x, T) * jt(y, T) + jt(x, T) * jt(-y, T)
            rhs = (jtheta(x * y, 2, T) * jtheta(Monomial.q(1) * y / x, 2, T)).scale(2)
            assert_equal(lhs, rhs, min(lhs.trunc, rhs.trunc, T))


class TestSplittingLaw:
    @pytest.mark.parametrize("n", [1, 2])
    def test_theta_splitting(self, n):
        # j(x;q) j(y;q^n) as a sum over k of two theta factors
        T = 18
        for x, y in zip(GENERIC_X[:3], GENERIC_Y[:3]):
            lhs = jt(x, T) * jtheta(y, n, T)
            rhs = QSeries.zero()
            for k in range(n + 1):
                pref = Monomial(2 * k + k * x.unit_k, F(comb2(k)) + k * x.qexp)
                inner1 = Monomial(
                    2 * n + n * x.unit_k + y.unit_k,
                    F(comb2(n) + k * n) + n * x.qexp + y.qexp,
                )
                inner2 = Monomial(
                    2 + y.unit_k - x.unit_k,
                    F(1 - k) - x.qexp + y.qexp,
                )
                term = jtheta(inner1, n * (n + 1), T) * jtheta(inner2, n + 1, T)
                rhs = rhs + term.shift(pref)
            assert_equal(lhs, rhs, min(lhs.trunc, rhs.trunc, T))


class TestLevel4ThetaLemmas:
    def test_two_six_evaluation(self):
        # 2 Jbar16 Jbar13 + 2 Jbar36 Jbar3_12 = Jbar01 Jbar02
        T = 40
        lhs = (Jbar(1, 6, T) * Jbar(1, 3, T)).scale(2) + (Jbar(3, 6, T) * Jbar(3, 12, T)).scale(2)
        rhs = Jbar(0, 1, T) * Jbar(0, 2, T)
        assert_equal(lhs, rhs, T)

    def test_twelfth_lattice_split(self):
        # j(q^(1/12); q^(1/6)) as a 7-term combination on the Z/12 lattice
        T = F(10)
        lhs = jtheta(q(F(1, 12)), F(1, 6), T)
        def JB(a, m, shift_exp=None, scale=1):
            s = Jbar(a, m, T if shift_exp is None else T - F(*shift_exp))
            if shift_exp is not None:
                s = s.shift(Monomial(0, F(*shift_exp)))
            return s.scale(scale)
        rhs = (
            JB(12, 24)
            + JB(0, 24, (3, 1))
            + JB(6, 24, (3, 4), -2)
            + JB(8, 24, (1, 3), 2)
            + JB(20, 24, (4, 3), 2)
            + JB(10, 24, (1, 12), -2)
            + JB(22, 24, (25, 12), -2)
        )
        assert_equal(lhs, rhs, T)


class TestSplitChains:
    def test_level3_kp_split_identities(self):
        T = 90
        lhs = J(2, 5, T)
        rhs = (J(21, 45, T) - J(36, 45, T - 2).shift(Monomial(0, F(2)))
               - J(6, 45, T - 3).shift(Monomial(0, F(3))))
        assert_equal(lhs, rhs, T)
        lhs2 = J(1, 5, T)
        rhs2 = (J(18, 45, T) - J(33, 45, T - 1).shift(Monomial(0, F(1)))
                - J(3, 45, T - 4).shift(Monomial(0, F(4))))
        assert_equal(lhs2, rhs2, T)

    def test_substituted_forms(self):
        T = F(30)
        lhs = jtheta(q(F(2, 3)), F(5, 3), T)
        rhs = (J(7, 15, T) - J(12, 15, T - F(2, 3)).shift(Monomial(0, F(2, 3)))
               - J(2, 15, T - 1).shift(Monomial(0, F(1))))
        assert_equal(lhs, rhs, T)
        lhs2 = jtheta(q(F(1, 3)), F(5, 3), T)
        rhs2 = (J(6, 15, T) - J(11, 15, T - F(1, 3)).shift(Monomial(0, F(1, 3)))
                - J(1, 15, T - F(4, 3)).shift(Monomial(0, F(4, 3))))
        assert_equal(lhs2, rhs2, T)

    def test_split_equals_substitution(self):
        # q -> q^(1/3) on J_{2,5} reproduces the fractional split identity
        T = F(20)
        s = J(2, 5, 3 * T).substitute_power(F(1, 3))
        assert_equal(s, jtheta(q(F(2, 3)), F(5, 3), T), T)
