"""Theta-type constructors.

``jtheta(x, base, order)`` is the canonical entry point for the two-sided
theta sum j(x; q^base).  Arguments with unit +-1 are reduced into the
fundamental strip 0 <= qexp < base, exact zeros are detected before any
expansion, and the triple-product form is used; arguments with unit +-i
fall back to the defining sum, which needs no strip bookkeeping.

``theta_quotient`` assembles a monomial prefactor times a product of theta
factors over another, computing every factor at exactly the order its
valuation requires, so the result is provably exact below the requested
order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import inf as INF
from typing import Optional, Sequence, Tuple, Union

from . import series as _series
from .series import (
    GaussianRational,
    Monomial,
    QI_ONE,
    QSeries,
    Rat,
    pad,
)


class ThetaError(Exception):
    pass


class DivergentProduct(ThetaError):
    """Infinite Pochhammer product with a non-convergent argument."""


class OutOfStrip(ThetaError):
    """Triple-product form requested outside the fundamental strip."""


class ThetaZeroDenominator(ThetaError):
    """A theta factor in a denominator vanishes identically."""


ThetaFactor = Tuple[Monomial, Rat]  # (argument, modulus exponent): j(x; q^base)


def comb2(n: int) -> int:
    """Binomial(n, 2) for any integer n."""
    return n * (n - 1) // 2


def pochhammer(x: Monomial, base: Rat, n: Optional[int], order: Rat) -> QSeries:
    """(x; q^base)_n, with n = None meaning the infinite product.

    Factors whose exponent lands at or above the computation window only
    contribute 1 and are skipped.
    """
    base = Fraction(base)
    if base <= 0:
        raise ValueError("base must be positive")
    order = Fraction(order)
    win = order + pad(base)
    if n is None and x.qexp < 0:
        raise DivergentProduct(f"(x; q^{base})_inf diverges for x = {x}")
    acc = QSeries.one(INF)
    i = 0
    while (n is None or i < n) and x.qexp + i * base < win:
        e = x.qexp + i * base
        d = {Fraction(0): QI_ONE}
        d[e] = d.get(e, GaussianRational(0)) - x.unit
        factor = QSeries(d, INF)
        acc = (acc * factor).truncate(win)
        if not acc.terms:
            return QSeries.zero()  # a vanishing factor kills the product exactly
        i += 1
    return acc.truncate(order)


def is_theta_zero(x: Monomial, base: Rat) -> bool:
    """j(x; q^base) = 0 exactly iff x is an integral power of the modulus."""
    return x.unit_k == 0 and (x.qexp / Fraction(base)).denominator == 1


def _strip_reduce(x: Monomial, base: Fraction):
    """Split j(x;q^b) = shift * j(core;q^b) with core.qexp in [0, base)."""
    n = math.floor(x.qexp / base)
    e0 = x.qexp - n * base
    # j(q^{nb} x0; q^b) = (-1)^n q^{-b*C(n,2)} x0^{-n} j(x0; q^b)
    shift = Monomial(2 * n - n * x.unit_k, -base * comb2(n) - n * e0)
    return shift, Monomial(x.unit_k, e0)


def jtheta_sum(x: Monomial, base: Rat, order: Rat) -> QSeries:
    """j(x; q^base) by the defining two-sided sum; no preconditions."""
    base = Fraction(base)
    order = Fraction(order)
    win = order + pad(base)
    terms: dict = {}

    def f(n: int) -> Fraction:
        return base * comb2(n) + n * x.qexp

    def put(n: int):
        e = f(n)
        c = GaussianRational.i_power(2 * n + x.unit_k * n)  # (-1)^n * unit^n
        s = terms.get(e)
        s = c if s is None else s + c
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)

    vertex = Fraction(1, 2) - x.qexp / base
    n = math.ceil(vertex)
    while f(n) < win:
        put(n)
        n += 1
    n = math.ceil(vertex) - 1
    while f(n) < win:
        put(n)
        n -= 1
    return QSeries(terms, win).truncate(order)


def jtheta_prod(x: Monomial, base: Rat, order: Rat) -> QSeries:
    """Triple product (x)_inf (q^base/x)_inf (q^base)_inf on the strip.

    Requires 0 <= x.qexp < base, and x != 1 at qexp 0 (the exact-zero case
    is detected by the caller).
    """
    base = Fraction(base)
    order = Fraction(order)
    if not (0 <= x.qexp < base) or (x.qexp == 0 and x.unit_k == 0):
        raise OutOfStrip(f"x = {x} not in the fundamental strip of q^{base}")
    win = order + pad(base)
    a = pochhammer(x, base, None, win)
    b = pochhammer(Monomial(-x.unit_k, base - x.qexp), base, None, win)
    c = pochhammer(Monomial(0, base), base, None, win)
    return (a * b * c).truncate(order)


@lru_cache(maxsize=None)
def _jtheta_cached(x: Monomial, base: Fraction, order: Fraction, scale: int) -> QSeries:
    if x.unit_k % 2 == 1:
        return jtheta_sum(x, base, order)
    shift, core = _strip_reduce(x, base)
    if core.qexp == 0 and core.unit_k == 0:
        return QSeries.zero()
    inner = jtheta_prod(core, base, order - shift.qexp)
    return inner.shift(shift).truncate(order)


def jtheta(x: Monomial, base: Rat, order: Rat) -> QSeries:
    """j(x; q^base), exact below `order`; exactly zero when x = q^(k*base)."""
    base = Fraction(base)
    if base <= 0:
        raise ValueError("base must be positive")
    return _jtheta_cached(x, base, Fraction(order), _series._margin_scale)


def jtheta_valuation(x: Monomial, base: Rat) -> Fraction:
    """Exact least exponent of j(x; q^base); the series must not be zero."""
    base = Fraction(base)
    if is_theta_zero(x, base):
        raise ThetaZeroDenominator(f"j({x}; q^{base}) vanishes identically")
    if x.unit_k % 2 == 1:
        # minimal exponent of the sum; the two straddling terms cannot cancel
        # because their coefficient ratio is a power of i, never 1
        vertex = Fraction(1, 2) - x.qexp / base

        def f(n: int) -> Fraction:
            return base * comb2(n) + n * x.qexp

        lo = math.floor(vertex)
        return min(f(lo), f(lo + 1))
    shift, _core = _strip_reduce(x, base)
    return shift.qexp  # strip-form theta has valuation 0


# -- shorthands --------------------------------------------------------------


def J(a: Rat, m: Rat, order: Rat) -> QSeries:
    """J_{a,m} = j(q^a; q^m)."""
    return jtheta(Monomial.q(a), m, order)


def Jbar(a: Rat, m: Rat, order: Rat) -> QSeries:
    """Jbar_{a,m} = j(-q^a; q^m)."""
    return jtheta(Monomial.mq(a), m, order)


def Jm(m: Rat, order: Rat) -> QSeries:
    """J_m = (q^m; q^m)_inf = j(q^m; q^{3m})."""
    return pochhammer(Monomial.q(m), m, None, order)


def eta(scale: Rat, order: Rat) -> QSeries:
    """Dedekind eta at tau*scale: q^{scale/24} (q^scale; q^scale)_inf."""
    scale = Fraction(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    pre = scale / 24
    inner = pochhammer(Monomial.q(scale), scale, None, Fraction(order) - pre)
    return inner.shift(Monomial(0, pre))


def j_split_components(z: Monomial, base: Rat, mm: int, order: Rat) -> list:
    """The mm summands whose total is j(z; q^base).

    Component k is (-1)^k q^{base*C(k,2)} z^k
    j((-1)^{mm+1} q^{base*(C(mm,2)+mm*k)} z^mm ; q^{base*mm^2}).
    """
    base = Fraction(base)
    order = Fraction(order)
    if mm < 1:
        raise ValueError("mm must be >= 1")
    out = []
    for k in range(mm):
        pref = Monomial(2 * k + z.unit_k * k, base * comb2(k) + k * z.qexp)
        inner = Monomial(
            2 * (mm + 1) + mm * z.unit_k,
            base * (comb2(mm) + mm * k) + mm * z.qexp,
        )
        comp = jtheta(inner, base * mm * mm, order - pref.qexp)
        out.append(comp.shift(pref).truncate(order))
    return out


# -- quotient assembly --------------------------------------------------------


def theta_quotient(
    num: Sequence[ThetaFactor],
    den: Sequence[ThetaFactor],
    order: Rat,
    prefactor: Monomial = Monomial.one(),
    scalar: Union[int, Fraction, GaussianRational] = 1,
) -> QSeries:
    """scalar * prefactor * prod(num) / prod(den), exact below `order`.

    Each factor j(x; q^b) is computed at its own valuation plus the common
    deficit D = order - prefactor.qexp - (sum of num valuations - sum of den
    valuations), which makes the assembled product exact below `order`.
    A vanishing numerator factor short-circuits to the exact zero; a
    vanishing denominator factor raises ThetaZeroDenominator.
    """
    order = Fraction(order)
    for x, b in den:
        if is_theta_zero(x, b):
            raise ThetaZeroDenominator(f"denominator factor j({x}; q^{b}) is zero")
    for x, b in num:
        if is_theta_zero(x, b):
            return QSeries.zero()
    n_vals = [jtheta_valuation(x, b) for x, b in num]
    d_vals = [jtheta_valuation(x, b) for x, b in den]
    deficit = order - prefactor.qexp - sum(n_vals) + sum(d_vals)
    acc = prefactor.as_series().scale(scalar)
    for (x, b), v in zip(num, n_vals):
        f = jtheta(x, b, v + max(deficit, Fraction(b)) + pad(b))
        acc = acc * f
    for (x, b), v in zip(den, d_vals):
        f = jtheta(x, b, v + max(deficit, Fraction(b)) + pad(b))
        acc = acc * f.inverse()
    assert acc.trunc >= order, f"quotient precision shortfall: {acc.trunc} < {order}"
    return acc.truncate(order)
