"""The Appell-Lerch function m(x, q^base, z), truncated exactly.

m(x,q,z) = (1/j(z;q)) * sum over r of (-1)^r q^C(r,2) z^r / (1 - q^(r-1) x z).

Each denominator 1/(1 - rho q^d) with d = base*(r-1) + x.qexp + z.qexp and
rho = x.unit * z.unit expands geometrically forward for d > 0, is rewritten
as -sum_{t>=1} rho^-t q^(-t*d) for d < 0, and is the constant 1/(1-rho) for
d = 0 with rho != 1.

The r-range is cut exactly: the term for r contributes nothing below
m+(r) = base*C(r,2) + r*z.qexp (the d < 0 branch starts even higher), and
m+ is a rational-coefficient parabola in r, so walking both arms from its
vertex until m+(r) >= window enumerates every contributing r.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .series import GaussianRational, Monomial, QI_ONE, QSeries, Rat, pad
from .theta import ThetaZeroDenominator, comb2, is_theta_zero, jtheta, jtheta_valuation


class PoleAtXZ(Exception):
    """x*z is an integral power of the modulus: a term of the sum has a pole."""


def appell_m(x: Monomial, base: Rat, z: Monomial, order: Rat) -> QSeries:
    """m(x, q^base, z) exact below `order`."""
    base = Fraction(base)
    if base <= 0:
        raise ValueError("base must be positive")
    order = Fraction(order)
    if is_theta_zero(z, base):
        raise ThetaZeroDenominator(f"j({z}; q^{base}) = 0: z may not be a power of the modulus")
    xz = x * z
    if xz.unit_k == 0 and (xz.qexp / base).denominator == 1:
        raise PoleAtXZ(f"x*z = {xz} is an integral power of q^{base}")

    o_z = jtheta_valuation(z, base)
    win_s = order + max(o_z, Fraction(0)) + pad(base)

    def m_plus(r: int) -> Fraction:
        return base * comb2(r) + r * z.qexp

    # all integers r with m_plus(r) < win_s, walking outward from the vertex
    vertex = Fraction(1, 2) - z.qexp / base
    rs = []
    r = math.ceil(vertex)
    while m_plus(r) < win_s:
        rs.append(r)
        r += 1
    r = math.ceil(vertex) - 1
    while m_plus(r) < win_s:
        rs.append(r)
        r -= 1

    terms: dict = {}

    def put(e: Fraction, c: GaussianRational):
        s = terms.get(e)
        s = c if s is None else s + c
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)

    sigma = Fraction(0)
    rho_k = (x.unit_k + z.unit_k) % 4  # rho = i^rho_k
    for r in rs:
        e_r = m_plus(r)
        sigma = min(sigma, e_r)
        lead_k = 2 * r + z.unit_k * r  # (-1)^r z.unit^r = i^lead_k
        d = base * (r - 1) + x.qexp + z.qexp
        if d > 0:
            t = 0
            while e_r + t * d < win_s:
                put(e_r + t * d, GaussianRational.i_power(lead_k + rho_k * t))
                t += 1
        elif d < 0:
            t = 1
            while e_r - t * d < win_s:
                put(e_r - t * d, -GaussianRational.i_power(lead_k - rho_k * t))
                t += 1
        else:
            put(e_r, GaussianRational.i_power(lead_k) / (QI_ONE - GaussianRational.i_power(rho_k)))

    s = QSeries(terms, win_s)
    win_d = max(o_z + base, order + 2 * o_z - min(sigma, Fraction(0)) + pad(base))
    denom = jtheta(z, base, win_d)
    out = s * denom.inverse()
    assert out.trunc >= order, f"appell precision shortfall: {out.trunc} < {order}"
    return out.truncate(order)
