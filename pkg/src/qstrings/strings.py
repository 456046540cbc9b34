"""Level-N string functions for the affine Lie algebra A1^(1).

Two independent evaluation paths are provided and cross-checked by the
verification harness:

* ``calC_oracle`` sums the weight-multiplicity double sum directly.  The
  braced-difference form of that sum,

      sum_{j in Z} sum_{i in N} (-1)^i q^{i(i+m)/2 + j((N+2)j+l+1)}
          * { q^{+i(2(N+2)j+l+1)/2} - q^{-i(2(N+2)j+l+1)/2} },

  is only conditionally convergent: with E(i,j) denoting the exponent of
  the first braced term, the second term's exponent is E(i, j-i), so over
  the full lattice the two halves cancel pairwise and any naive box
  truncation is prescription-dependent.  The absolutely-summable form is
  the double-cone regrouping

      J_1^3 * calC = [ sum_{j >= 0, i >= -j}  -  sum_{j <= -1, i <= -j-1} ]
                         (-1)^i q^{E(i,j)},

  which is the image of the sign-split cone definition under the change of
  variables (r, s) = (i+j, j).  On each cone E is a parabola in i for fixed
  j and in j along the cone edge, so exact rational walks enumerate every
  term below the window.

* ``calC_hecke`` evaluates the same function through the Hecke-type double
  sum f_{1,1+N,1}(q^{1+(m+l)/2}, q^{1-(m-l)/2}, q) / J_1^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hecke import hecke_f
from .series import Monomial, QSeries, Rat, pad
from .theta import J, Jbar, Jm, eta

F = Fraction


class InvalidLabel(Exception):
    pass


class InvalidParity(InvalidLabel):
    pass


class UnsupportedLevel(Exception):
    pass


@dataclass(frozen=True)
class StringLabel:
    """(N, ell, m): level N >= 1, 0 <= ell <= N, m of the same parity as ell."""

    N: int
    ell: int
    m: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidLabel(f"level must be >= 1, got {self.N}")
        if not 0 <= self.ell <= self.N:
            raise InvalidLabel(f"ell must lie in [0, {self.N}], got {self.ell}")
        if (self.m - self.ell) % 2 != 0:
            raise InvalidParity(f"m = {self.m} and ell = {self.ell} differ in parity")


def s_exponent(lbl: StringLabel) -> Fraction:
    """The exact q-power prefactor exponent attached to the level-N label."""
    return -F(1, 8) + F((lbl.ell + 1) ** 2, 4 * (lbl.N + 2)) - F(lbl.m ** 2, 4 * lbl.N)


def _cone_sum(N: int, ell: int, m: int, win: Fraction) -> dict:
    """All terms of the double-cone sum with exponent below `win`."""
    terms: dict = {}

    def put(e: Fraction, sign: int):
        s = terms.get(e, 0) + sign
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)

    def E(i: int, j: int) -> Fraction:
        return (F(i * (i + m), 2) + j * ((N + 2) * j + ell + 1)
                + F(i * (2 * (N + 2) * j + ell + 1), 2))

    def ivertex(j: int) -> Fraction:
        # stationary point of E(., j)
        return -F(2 * (N + 2) * j + ell + m + 1, 2)

    # cone+ : j >= 0, i >= -j, positive orientation
    j = 0
    while True:
        edge = -j
        iv = ivertex(j)
        if E(edge, j) < win or edge < iv:
            i = edge
            while True:
                e = E(i, j)
                if e < win:
                    put(e, 1 if i % 2 == 0 else -1)
                elif i >= iv:
                    break
                i += 1
        elif 2 * j >= m - ell - 1:
            # past the vertex of E(-j, j) = j(j + ell + 1 - m)/2: no later j contributes
            break
        j += 1

    # cone- : j <= -1, i <= -j-1, negative orientation
    # edge value g(t) = E(t-1, -t) is a parabola in t = -j with vertex at
    # -(N + (m-ell+1)/2); an interior i-vertex exists only for
    # t <= ((ell+m+1)/2 - 1)/(N+1)
    t = 1
    t0 = (F(ell + m + 1, 2) - 1) / (N + 1)
    g_vertex = -(N + F(m - ell + 1, 2))
    while True:
        jj = -t
        edge = t - 1
        iv = ivertex(jj)
        if E(edge, jj) < win or iv < edge:
            i = edge
            while True:
                e = E(i, jj)
                if e < win:
                    put(e, -1 if i % 2 == 0 else 1)
                elif i <= iv:
                    break
                i -= 1
        elif t > t0 and t >= g_vertex:
            break
        t += 1

    return terms


def _divide_by_j1_cubed(raw: QSeries, order: Fraction, base: Rat = 1) -> QSeries:
    sigma = min(raw.ord_bound(), F(0))
    j13 = Jm(base, order - sigma + pad(base)) ** 3
    out = raw * j13.inverse()
    assert out.trunc >= order
    return out.truncate(order)


def calC_oracle(lbl: StringLabel, order: Rat) -> QSeries:
    """The normalized string function from the weight-multiplicity sum."""
    order = F(order)
    win = order + pad(1)
    terms = _cone_sum(lbl.N, lbl.ell, lbl.m, win)
    raw = QSeries(terms, win)
    return _divide_by_j1_cubed(raw, order)


def calC_hecke(lbl: StringLabel, order: Rat) -> QSeries:
    """The normalized string function via f_{1,1+N,1} / J_1^3."""
    order = F(order)
    x = Monomial.q(1 + F(lbl.m + lbl.ell, 2))
    y = Monomial.q(1 - F(lbl.m - lbl.ell, 2))
    win = order + pad(1)
    raw = hecke_f(1, 1 + lbl.N, 1, x, y, 1, win)
    return _divide_by_j1_cubed(raw, order)


def C_full(lbl: StringLabel, order: Rat, oracle: bool = False) -> QSeries:
    """The string function with its exact q^s prefactor (fractional lattice)."""
    order = F(order)
    s = s_exponent(lbl)
    inner = (calC_oracle if oracle else calC_hecke)(lbl, order - s)
    return inner.shift(Monomial(0, s))


def normalized_theta_form(lbl: StringLabel, order: Rat, oracle: bool = False) -> QSeries:
    """q^{-(m^2-ell^2)/(4N)} J_1^3 calC: the side tabulated by the level theorems."""
    order = F(order)
    e = -F(lbl.m ** 2 - lbl.ell ** 2, 4 * lbl.N)
    inner = (calC_oracle if oracle else calC_hecke)(lbl, order - e)
    j13 = Jm(1, order - e) ** 3
    return (inner * j13).shift(Monomial(0, e)).truncate(order)


def symmetry_reduce(lbl: StringLabel) -> StringLabel:
    """Canonical representative under m -> -m, m -> 2N - m, and
    (ell, m) -> (N - ell, N - m); ties broken by the least (ell, m)."""
    N = lbl.N
    m = lbl.m % (2 * N)
    if m > N:
        m = 2 * N - m
    cands = [(lbl.ell, m), (N - lbl.ell, N - m)]
    ell2, m2 = min(cands)
    return StringLabel(N, ell2, m2)


# -- closed theta forms for levels 1..4 ----------------------------------------


def _level2_row(ell: int, m: int, T: Fraction) -> QSeries:
    half = Monomial(0, F(1, 2))
    if (ell, m) in ((0, 0), (2, 2)):
        return J(1, 2, T) * Jbar(3, 8, T)
    if (ell, m) in ((0, 2), (2, 0)):
        return (J(1, 2, T - half.qexp) * Jbar(1, 8, T - half.qexp)).shift(half)
    return Jm(1, T) * Jm(2, T)  # ell = 1


def _level3_theta(i: int, T: Fraction) -> QSeries:
    j1 = Jm(1, T)
    if i == 0:
        return j1 * (J(8, 15, T) - J(2, 15, T - 1).shift(Monomial.q(1)))
    if i == 1:
        return j1 * J(6, 15, T)
    if i == 2:
        sh = Monomial(0, F(1, 3))
        inner = Jm(1, T - sh.qexp) * (J(11, 15, T - sh.qexp)
                                      + J(1, 15, T - sh.qexp - 1).shift(Monomial.q(1)))
        return inner.shift(sh)
    sh = Monomial(0, F(2, 3))
    return (Jm(1, T - sh.qexp) * J(3, 15, T - sh.qexp)).shift(sh)


_LEVEL3_MAP = {
    (0, 0): 0, (0, 2): 3, (0, 4): 3,
    (1, 1): 1, (1, 5): 1, (1, 3): 2,
    (2, 0): 2, (2, 2): 1, (2, 4): 1,
    (3, 1): 3, (3, 5): 3, (3, 3): 0,
}


def _level4_theta(i: int, T: Fraction) -> QSeries:
    j1 = Jm(1, T)
    if i == 0:
        return (j1 * Jbar(3, 6, T) + j1 * J(1, 2, T)).scale(F(1, 2))
    if i == 1:
        return (j1 * Jbar(3, 6, T) - j1 * J(1, 2, T)).scale(F(1, 2))
    if i == 2:
        sh = Monomial(0, F(3, 4))
        return (Jm(1, T - sh.qexp) * Jbar(6, 24, T - sh.qexp)).shift(sh)
    if i == 3:
        return j1 * Jbar(3, 8, T)
    if i == 4:
        sh = Monomial(0, F(1, 2))
        return (Jm(1, T - sh.qexp) * Jbar(1, 8, T - sh.qexp)).shift(sh)
    if i == 5:
        sh = Monomial(0, F(1, 4))
        return (Jm(1, T - sh.qexp) * Jbar(1, 6, T - sh.qexp)).shift(sh)
    return J(1, 4, T) * J(6, 12, T)


_LEVEL4_MAP = {
    (0, 0): 0, (0, 2): 2, (0, 6): 2, (0, 4): 1,
    (1, 1): 3, (1, 7): 3, (1, 3): 4, (1, 5): 4,
    (2, 0): 5, (2, 4): 5, (2, 2): 6, (2, 6): 6,
    (3, 1): 4, (3, 7): 4, (3, 3): 3, (3, 5): 3,
    (4, 0): 1, (4, 2): 2, (4, 6): 2, (4, 4): 0,
}


def level_theta_side(lbl: StringLabel, order: Rat) -> QSeries:
    """The tabulated theta closed form for levels 1..4, 0 <= m < 2N."""
    T = F(order)
    N, ell, m = lbl.N, lbl.ell, lbl.m
    if not 0 <= m < 2 * N:
        raise InvalidLabel(f"tabulated rows need 0 <= m < {2 * N}, got {m}")
    if N == 1:
        return Jm(1, T) ** 2
    if N == 2:
        return _level2_row(ell, m, T)
    if N == 3:
        return _level3_theta(_LEVEL3_MAP[(ell, m)], T)
    if N == 4:
        return _level4_theta(_LEVEL4_MAP[(ell, m)], T)
    raise UnsupportedLevel(f"no tabulated closed form for level {N}")


# -- the even-level splitting identities ---------------------------------------


def mps_split_rhs(K: int, m: int, ell: int, sign: int, base: Rat, order: Rat) -> QSeries:
    """C_{m,ell}^{2K} +- C_{2K-m,ell}^{2K} through a pair of f_{K+1,K+1,1} sums.

    `sign` is +1 or -1 and enters both inner x-arguments and the cross term.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lbl = StringLabel(2 * K, ell, m)
    base = F(base)
    order = F(order)
    s = base * s_exponent(lbl)
    uk = 0 if sign == 1 else 2
    x1 = Monomial(uk, base * (1 + F(K + ell, 2)))
    y1 = Monomial(0, base * (1 + F(m + ell, 2)))
    x2 = Monomial(uk, base * (1 + F(3 * K - ell, 2)))
    y2 = Monomial(0, base * (1 + K + F(m - ell, 2)))
    cross = Monomial(uk, base * F(K - ell, 2))
    win = order - s + pad(base)
    raw = (hecke_f(K + 1, K + 1, 1, x1, y1, base, win)
           + hecke_f(K + 1, K + 1, 1, x2, y2, base, win - cross.qexp).shift(cross))
    return _divide_by_j1_cubed(raw, order - s, base).shift(Monomial(0, s))


def mps_cor2_rhs(K: int, m: int, base: Rat, order: Rat) -> QSeries:
    """C_{m,K}^{2K} as a single f_{K+1,K+1,1}; needs m = K (mod 2)."""
    lbl = StringLabel(2 * K, K, m)
    base = F(base)
    order = F(order)
    s = base * s_exponent(lbl)
    x = Monomial(0, base * (K + 1))
    y = Monomial(0, base * (1 + F(m + K, 2)))
    raw = hecke_f(K + 1, K + 1, 1, x, y, base, order - s + pad(base))
    return _divide_by_j1_cubed(raw, order - s, base).shift(Monomial(0, s))


def mps_cor3_rhs(K: int, ell: int, base: Rat, order: Rat) -> QSeries:
    """C_{K,ell}^{2K} as a single f_{K+1,K+1,1}; needs K = ell (mod 2)."""
    lbl = StringLabel(2 * K, ell, K)
    base = F(base)
    order = F(order)
    s = base * s_exponent(lbl)
    x = Monomial(0, base * (1 + F(K + ell, 2)))
    y = Monomial(0, base * (1 - F(K - ell, 2)))
    raw = hecke_f(K + 1, K + 1, 1, x, y, base, order - s + pad(base))
    return _divide_by_j1_cubed(raw, order - s, base).shift(Monomial(0, s))


def mps_rhs(variant: str, order: Rat, **params) -> QSeries:
    """Dispatcher: variant in {'split', 'op2', 'op3'}."""
    if variant == "split":
        return mps_split_rhs(params["K"], params["m"], params["ell"],
                             params.get("sign", 1), params.get("base", 1), order)
    if variant == "op2":
        return mps_cor2_rhs(params["K"], params["m"], params.get("base", 1), order)
    if variant == "op3":
        return mps_cor3_rhs(params["K"], params["ell"], params.get("base", 1), order)
    raise ValueError(f"unknown variant {variant!r}")


# -- classical examples: eta-quotient sides ------------------------------------


def restricted_product(step: Rat, modulus: int, excluded, order: Rat) -> QSeries:
    """prod over n >= 1 with n mod `modulus` not excluded of (1 - q^(step*n))."""
    step = F(step)
    order = F(order)
    win = order + pad(step)
    acc = QSeries.one(win)
    n = 1
    while step * n < win:
        if n % modulus not in excluded:
            acc = (acc * QSeries({F(0): 1, step * n: -1}, win)).truncate(win)
        n += 1
    return acc.truncate(order)


def eta_quotient(factors, order: Rat) -> QSeries:
    """prod of eta(scale)^power for (scale, power) pairs, exact below order."""
    order = F(order)
    total = sum(F(s) * p / 24 for s, p in factors)
    acc = QSeries.one()
    for scale, power in factors:
        scale = F(scale)
        deficit = order - total + F(scale, 24) * power
        T = F(scale, 24) + max(deficit, scale) + pad(scale)
        acc = acc * (eta(scale, T) ** power)
    assert acc.trunc >= order
    return acc.truncate(order)


_KP_IDS = ("KP2A", "KP3A", "KP3B", "KP3C", "KP4B")


def kp_eta_side(name: str, order: Rat) -> QSeries:
    """The classical eta-quotient / restricted-product sides."""
    order = F(order)
    if name == "KP2A":
        return eta_quotient([(1, -2), (F(1, 2), 1)], order)
    if name == "KP3A":
        sh = Monomial(0, F(27, 40))
        inner = eta_quotient([(1, -2)], order - sh.qexp + F(1, 12) + pad(1))
        prod = restricted_product(3, 5, {2, 3}, order - sh.qexp + F(1, 12) + pad(1))
        return (inner * prod).shift(sh).truncate(order)
    if name == "KP3B":
        sh = Monomial(0, F(1, 120))
        win = order - sh.qexp + F(1, 12) + pad(F(1, 3))
        inner = eta_quotient([(1, -2)], win)
        prod = restricted_product(F(1, 3), 5, {1, 4}, win)
        return (inner * prod).shift(sh).truncate(order)
    if name == "KP3C":
        sh = Monomial(0, F(3, 40))
        win = order - sh.qexp + F(1, 12) + pad(F(1, 3))
        inner = eta_quotient([(1, -2)], win)
        prod = restricted_product(F(1, 3), 5, {2, 3}, win)
        return (inner * prod).shift(sh).truncate(order)
    if name == "KP4B":
        return eta_quotient([(1, -2), (F(1, 6), -1), (F(1, 12), 2)], order)
    raise ValueError(f"unknown example {name!r}; expected one of {_KP_IDS}")


def kp_string_side(name: str, order: Rat, oracle: bool = False) -> QSeries:
    """The matching string-function combinations."""
    order = F(order)

    def C(N, ell, m):
        return C_full(StringLabel(N, ell, m), order, oracle=oracle)

    if name == "KP2A":
        return (C(2, 0, 0) - C(2, 0, 2)).truncate(order)
    if name == "KP3A":
        return C(3, 0, 2).truncate(order)
    if name == "KP3B":
        return (C(3, 0, 0) - C(3, 0, 2)).truncate(order)
    if name == "KP3C":
        return (C(3, 1, 1) - C(3, 1, 3)).truncate(order)
    if name == "KP4B":
        return (C(4, 0, 0) - C(4, 0, 2).scale(2) + C(4, 0, 4)
                + C(4, 2, 0).scale(2) - C(4, 2, 2).scale(2)).truncate(order)
    raise ValueError(f"unknown example {name!r}; expected one of {_KP_IDS}")
