"""Hecke-type double sums f_{a,b,c} and their theta/Appell-Lerch forms.

``hecke_f`` evaluates the double sum by direct enumeration over the two
same-sign quadrants.  On each quadrant the cross term b*r*s is nonnegative,
so E(r,s) >= P(r) + S(s) with separable parabolas
P(r) = base*a*C(r,2) + r*x.qexp and S(s) = base*c*C(s,2) + s*y.qexp;
walking each variable from its arm edge until the parabola bound passes the
window (and the walk is past the parabola vertex) enumerates every
contributing pair exactly, in rational arithmetic.

The remaining builders construct the closed right-hand sides that express
f_{a,b,c} through Appell-Lerch sums plus quotients of theta functions.
Everything is stated at modulus q in the classical references; here all
exponents scale uniformly by `base` so calls at modulus q^2 need no lattice
gymnastics.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .series import GaussianRational, Monomial, QSeries, Rat, pad
from .appell import appell_m
from .theta import (
    comb2,
    is_theta_zero,
    jtheta,
    jtheta_valuation,
    theta_quotient,
)

F = Fraction
MINUS_ONE = Monomial(2, F(0))


def hecke_f(a: int, b: int, c: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """f_{a,b,c}(x, y, q^base) by quadrant enumeration, exact below order."""
    if min(a, c) < 1 or b < 1:
        raise ValueError("a, b, c must be positive integers")
    base = F(base)
    order = F(order)
    win = order + pad(base)
    xq, yq = x.qexp, y.qexp
    terms: dict = {}

    def put(e, k):
        cf = GaussianRational.i_power(k)
        s = terms.get(e)
        s = cf if s is None else s + cf
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)

    def E(r, s):
        return base * (a * comb2(r) + b * r * s + c * comb2(s)) + r * xq + s * yq

    def P(r):
        return base * a * comb2(r) + r * xq

    def S(s):
        return base * c * comb2(s) + s * yq

    def arm_min(f, vertex, up: bool):
        if up:
            n = max(0, math.floor(vertex)), max(0, math.ceil(vertex))
        else:
            n = min(-1, math.floor(vertex)), min(-1, math.ceil(vertex))
        return min(f(n[0]), f(n[1]))

    p_vertex = F(1, 2) - xq / (base * a)
    s_vertex = F(1, 2) - yq / (base * c)

    for up in (True, False):
        smin = arm_min(S, s_vertex, up)
        r = 0 if up else -1
        step = 1 if up else -1
        while True:
            past_p = (r >= p_vertex) if up else (r <= p_vertex)
            if P(r) + smin >= win:
                if past_p:
                    break
            else:
                sv = F(1, 2) - (yq + base * b * r) / (base * c)
                s = 0 if up else -1
                while True:
                    e = E(r, s)
                    if e < win:
                        k = 2 * (r + s) + x.unit_k * r + y.unit_k * s
                        if not up:
                            k += 2  # negative quadrant enters with minus sign
                        put(e, k)
                    elif (s >= sv) if up else (s <= sv):
                        break
                    s += step
            r += step

    return QSeries(terms, win).truncate(order)


def hecke_shift_rhs(a: int, b: int, c: int, x: Monomial, y: Monomial, base: Rat,
                    R: int, S: int, order: Rat) -> QSeries:
    """The index-shift expansion of f_{a,b,c}: shifted double sum plus the
    two finite theta correction sums.  Requires R, S >= 0."""
    if R < 0 or S < 0:
        raise ValueError("R and S must be nonnegative")
    base = F(base)
    order = F(order)
    pref = ((-x) ** R) * ((-y) ** S) * Monomial(0, base * (a * comb2(R) + b * R * S + c * comb2(S)))
    xs = Monomial(0, base * (a * R + b * S)) * x
    ys = Monomial(0, base * (b * R + c * S)) * y
    acc = hecke_f(a, b, c, xs, ys, base, order - pref.qexp).shift(pref)
    for m in range(R):
        mono = ((-x) ** m) * Monomial(0, base * a * comb2(m))
        arg = Monomial(0, base * m * b) * y
        acc = acc + jtheta(arg, base * c, order - mono.qexp).shift(mono)
    for m in range(S):
        mono = ((-y) ** m) * Monomial(0, base * c * comb2(m))
        arg = Monomial(0, base * m * b) * x
        acc = acc + jtheta(arg, base * a, order - mono.qexp).shift(mono)
    return acc.truncate(order)


def hecke_flip_rhs(a: int, b: int, c: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """f_{a,b,c} rewritten through the argument inversion
    -q^(a+b+c)/(xy) * f_{a,b,c}(q^(2a+b)/x, q^(2c+b)/y, q)."""
    base = F(base)
    order = F(order)
    pref = Monomial(2 - x.unit_k - y.unit_k, base * (a + b + c) - x.qexp - y.qexp)
    xs = Monomial(0, base * (2 * a + b)) * x.inverse()
    ys = Monomial(0, base * (2 * c + b)) * y.inverse()
    return hecke_f(a, b, c, xs, ys, base, order - pref.qexp).shift(pref).truncate(order)


# -- Appell-Lerch building blocks ---------------------------------------------


def _theta_times_m(tx: Monomial, tbase: Fraction, mx: Monomial, mbase: Fraction,
                   z: Monomial, order: Fraction) -> QSeries:
    """j(tx; q^tbase) * m(mx, q^mbase, z), skipping the Appell sum entirely
    when the theta coefficient vanishes (its zero is exact)."""
    if is_theta_zero(tx, tbase):
        return QSeries.zero()
    v = jtheta_valuation(tx, tbase)
    mm = appell_m(mx, mbase, z, order - v)
    o_m = mm.ord_bound()
    coeff = jtheta(tx, tbase, order - min(o_m, F(0)) + pad(tbase))
    return (coeff * mm).truncate(order)


def g_1b1(x: Monomial, y: Monomial, base: Rat, b: int, z1: Monomial, z0: Monomial,
          order: Rat) -> QSeries:
    """g_{1,b,1}(x,y,q^base,z1,z0): the two-term Appell-Lerch combination."""
    if b < 2:
        raise ValueError("b must be >= 2")
    base = F(base)
    order = F(order)
    B = base * (b * b - 1)
    e = base * (comb2(b + 1) - 1)
    X1 = Monomial(0, e) * x * ((-y) ** (-b))
    X0 = Monomial(0, e) * y * ((-x) ** (-b))
    t1 = _theta_times_m(y, base, X1, B, z1, order)
    t0 = _theta_times_m(x, base, X0, B, z0, order)
    return (t1 + t0).truncate(order)


def h_nn1(n: int, x: Monomial, y: Monomial, base: Rat, z1: Monomial, z0: Monomial,
          order: Rat) -> QSeries:
    """h_{n,n,1}(x,y,q^base,z1,z0) for n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    base = F(base)
    order = F(order)
    X1 = Monomial(2, base * (n - 1)) * y * x.inverse()
    X0 = Monomial(0, base * comb2(n)) * x * ((-y) ** (-n))
    t1 = _theta_times_m(x, base * n, X1, base * (n - 1), z1, order)
    t0 = _theta_times_m(y, base, X0, base * (n * n - n), z0, order)
    return (t1 + t0).truncate(order)


# -- master expansions ---------------------------------------------------------


def master_fnp_rhs(p: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """f_{1,p+1,1} as g_{1,p+1,1}(x,y,q,-1,-1) plus the p*p-term theta block
    over Jbar_{0,p(2+p)}."""
    if p < 1:
        raise ValueError("p must be >= 1")
    base = F(base)
    order = F(order)
    acc = g_1b1(x, y, base, p + 1, MINUS_ONE, MINUS_ONE, order)
    M = p * p * (2 + p)
    jm = (Monomial.q(base * M), 3 * base * M)  # J_{p^2(2+p)}
    for r in range(p):
        for s in range(p):
            mono = (((-x) ** r) * ((-y) ** (s + 1))
                    * Monomial(0, base * (comb2(r) + (1 + p) * r * (s + 1) + comb2(s + 1))))
            num = [
                jm, jm, jm,
                (Monomial(2, base * p * (s - r)) * x * y.inverse(), base * p * p),
                (Monomial(0, base * (p * (2 + p) * (r + s) + p * (1 + p))) * (x ** p) * (y ** p),
                 base * M),
            ]
            den = [
                (Monomial(0, base * F(p * (2 + p) * 2 * r + p * (1 + p), 2)) * ((-y) ** (1 + p)) / (-x),
                 base * M),
                (Monomial(0, base * F(p * (2 + p) * 2 * s + p * (1 + p), 2)) * ((-x) ** (1 + p)) / (-y),
                 base * M),
                (Monomial(2, F(0)), base * p * (2 + p)),  # Jbar_{0,p(2+p)}
            ]
            acc = acc + theta_quotient(num, den, order, prefactor=mono)
    return acc.truncate(order)


def acdivb_rhs(n: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """f_{n,n,1} as h_{n,n,1}(x,y,q,-1,-1) minus the n-term theta block over
    Jbar_{0,n-1} Jbar_{0,n^2-n}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    base = F(base)
    order = F(order)
    acc = h_nn1(n, x, y, base, MINUS_ONE, MINUS_ONE, order)
    M = n * (n - 1)
    jm = (Monomial.q(base * M), 3 * base * M)  # J_{n(n-1)}
    for d in range(n - 1 + 1):
        mono = Monomial(0, base * (n - 1) * comb2(d + 1))
        num = [
            (Monomial(0, base * (n - 1) * (d + 1)) * y, base * n),
            (Monomial(2, base * (n * (n - 1) - (n - 1) * (d + 1))) * x * y.inverse(), base * M),
            jm, jm, jm,
            (Monomial(0, base * (comb2(n) + (n - 1) * (d + 1))) * ((-y) ** (1 - n)), base * M),
        ]
        den = [
            (Monomial(2, base * comb2(n)) * x * ((-y) ** (-n)), base * M),
            (Monomial(0, base * (n - 1) * (d + 1)) * x.inverse() * y, base * M),
            (Monomial(2, F(0)), base * (n - 1)),      # Jbar_{0,n-1}
            (Monomial(2, F(0)), base * (n * n - n)),  # Jbar_{0,n^2-n}
        ]
        acc = acc - theta_quotient(num, den, order, prefactor=mono)
    return acc.truncate(order)


# -- the z = y/x expansions ----------------------------------------------------


def _delta_from_minus_one(X: Monomial, z: Monomial, modulus: Fraction, order: Fraction) -> QSeries:
    """m(X, q^modulus, z) - m(X, q^modulus, -1) as its closed theta quotient."""
    Q = modulus
    jm = (Monomial.q(Q), 3 * Q)
    num = [(-z, Q), (-(X * z), Q), jm, jm, jm]
    den = [(MINUS_ONE, Q), (z, Q), (-X, Q), (X * z, Q)]
    return theta_quotient(num, den, order, prefactor=MINUS_ONE)


def theta_1p(p: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """The correction block Theta_{1,p} for the z1 = y/x, z0 = x/y expansions,
    p in {1,2,3,4}.

    For p in {2,3,4} these are explicit theta quotients.  For p = 1 the
    block is assembled from the master p=1 correction re-based from
    z = -1 to z = y/x via the z-changing relation; the combination is the
    unique function with f_{1,2,1} = g_{1,2,1}(x,y,q,y/x,x/y) - Theta_{1,1}.
    """
    base = F(base)
    order = F(order)
    b = base

    def qb(e) -> Monomial:
        return Monomial(0, b * F(e))

    if p == 1:
        X1 = qb(2) * x * (y ** -2)
        X0 = qb(2) * y * (x ** -2)
        zyx = y / x
        acc = QSeries.zero()
        if not is_theta_zero(y, b):
            v = jtheta_valuation(y, b)
            d1 = _delta_from_minus_one(X1, zyx, 3 * b, order - v)
            o = d1.ord_bound()
            acc = acc + jtheta(y, b, order - min(o, F(0)) + pad(b)) * d1
        if not is_theta_zero(x, b):
            v = jtheta_valuation(x, b)
            d0 = _delta_from_minus_one(X0, zyx.inverse(), 3 * b, order - v)
            o = d0.ord_bound()
            acc = acc + jtheta(x, b, order - min(o, F(0)) + pad(b)) * d0
        j3 = (Monomial.q(3 * b), 9 * b)
        acc = acc + theta_quotient(
            num=[j3, j3, j3, (-(x / y), b), (qb(2) * x * y, 3 * b)],
            den=[(MINUS_ONE, 3 * b), (Monomial(2, b) * (y ** 2) / x, 3 * b),
                 (Monomial(2, b) * (x ** 2) / y, 3 * b)],
            order=order,
            prefactor=y,
        )
        return acc.truncate(order)

    if p == 2:
        return theta_quotient(
            num=[(Monomial.q(2 * b), 4 * b), (Monomial.q(8 * b), 16 * b),
                 (qb(3) * x * y, 8 * b), (qb(2) * (x ** -2) * (y ** -2), 16 * b)],
            den=[(Monomial(2, 3 * b) * (x ** 2), 8 * b),
                 (Monomial(2, 3 * b) * (y ** 2), 8 * b)],
            order=order,
            prefactor=qb(1) * x * y,
        )

    if p == 3:
        common_num = [(Monomial.q(3 * b), 9 * b), (Monomial.q(15 * b), 45 * b),
                      (qb(2) * x, 5 * b), (qb(2) * y, 5 * b)]
        common_den = [(Monomial.q(5 * b), 15 * b), (Monomial.q(5 * b), 15 * b),
                      (qb(6) * (x ** 3), 15 * b), (qb(6) * (y ** 3), 15 * b)]
        t1 = theta_quotient(
            num=common_num + [(qb(11) * (x ** 2) * y, 15 * b), (qb(11) * x * (y ** 2), 15 * b)],
            den=common_den, order=order, prefactor=qb(1) * x * y,
        )
        t2 = theta_quotient(
            num=common_num + [(qb(16) * (x ** 2) * y, 15 * b), (qb(16) * x * (y ** 2), 15 * b)],
            den=common_den, order=order, prefactor=qb(5) * (x ** 2) * (y ** 2), scalar=-1,
        )
        return (t1 + t2).truncate(order)

    if p == 4:
        J12 = (Monomial.q(12 * b), 36 * b)
        J24 = (Monomial.q(24 * b), 72 * b)
        J48 = (Monomial.q(48 * b), 144 * b)
        J416 = (Monomial.q(4 * b), 16 * b)
        J816 = (Monomial.q(8 * b), 16 * b)
        cden = [(Monomial(2, 10 * b) * (x ** 4), 24 * b),
                (Monomial(2, 10 * b) * (y ** 4), 24 * b)]
        s1pre_num = [(qb(22) * (x ** 2) * (y ** 2), 24 * b),
                     (Monomial(2, 12 * b) * y / x, 24 * b),
                     (qb(5) * x * y, 12 * b)]
        s2pre_num = [(qb(10) * (x ** 2) * (y ** 2), 24 * b),
                     (-(y / x), 24 * b),
                     (qb(11) * x * y, 12 * b)]
        t1 = theta_quotient(
            num=[J416] + s1pre_num + [(Monomial(2, 10 * b) * (x ** 2) * (y ** 2), 24 * b),
                                      (qb(12) * (y ** 2) * (x ** -2), 24 * b), J24, J24],
            den=[J12, J12, J12, J48] + cden,
            order=order, prefactor=qb(1) * x * y,
        )
        t2 = theta_quotient(
            num=[J416] + s1pre_num + [(Monomial(2, 22 * b) * (x ** 2) * (y ** 2), 24 * b),
                                      (qb(12) * y / x, 24 * b), (qb(12) * y / x, 24 * b),
                                      (-(y / x), 24 * b), (-(y / x), 24 * b)],
            den=[J12, J12, J12, J48, J24] + cden,
            order=order, prefactor=qb(6) * (x ** 3) * y,
        )
        t3 = theta_quotient(
            num=[J816] + s2pre_num + [(Monomial(2, 10 * b) * (x ** 2) * (y ** 2), 24 * b),
                                      (qb(12) * (y ** 2) * (x ** -2), 24 * b), J48],
            den=[J12, J12, J24] + cden,
            order=order, prefactor=qb(4) * x, scalar=-1,
        )
        t4 = theta_quotient(
            num=[J816] + s2pre_num + [(Monomial(2, 22 * b) * (x ** 2) * (y ** 2), 24 * b),
                                      (qb(24) * (y ** 2) * (x ** -2), 48 * b),
                                      (qb(24) * (y ** 2) * (x ** -2), 48 * b)],
            den=[J12, J12, J48] + cden,
            order=order, prefactor=qb(3) * (x ** 2) * y, scalar=-1,
        )
        return (t1 + t2 + t3 + t4).truncate(order)

    raise ValueError("p must be in {1, 2, 3, 4}")


def genfn_rhs(p: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """f_{1,p+1,1} = g_{1,p+1,1}(x,y,q,y/x,x/y) - Theta_{1,p}(x,y,q)."""
    base = F(base)
    order = F(order)
    g = g_1b1(x, y, base, p + 1, y / x, x / y, order)
    return (g - theta_1p(p, x, y, base, order)).truncate(order)


def singshift_rhs(p: int, ell: int, x: Monomial, y: Monomial, base: Rat, order: Rat) -> QSeries:
    """The shifted-z variant: z1 = q^(ell*p) y/x, z0 = q^(-ell*p) x/y, with the
    theta block evaluated at (q^ell x, q^(ell(1+p)) y) and re-prefixed by
    (-x)^ell q^C(ell,2)."""
    base = F(base)
    order = F(order)
    z1 = Monomial(0, base * ell * p) * y / x
    z0 = Monomial(0, -base * ell * p) * x / y
    g = g_1b1(x, y, base, 1 + p, z1, z0, order)
    pref = ((-x) ** ell) * Monomial(0, base * comb2(ell))
    xs = Monomial(0, base * ell) * x
    ys = Monomial(0, base * ell * (1 + p)) * y
    block = theta_1p(p, xs, ys, base, order - pref.qexp).shift(pref)
    return (g - block).truncate(order)
