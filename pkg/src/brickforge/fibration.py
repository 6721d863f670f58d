"""Per-(m,n) quartic, its Weierstrass cubic, and the lifting maps.

Fixing the second pair (m, n) turns the hit condition into rational
points on s^2 = gamma^2 t^4 + B t^2 + gamma^2 with gamma = 2mn and
B = 4*U2^2 - 2*V2^2.  The cubic model used everywhere downstream is
Y^2 = (X + B)(X^2 - 4 gamma^4), glued to the quartic by phi and tau
below; tau recovers t^2, so a point lifts exactly when tau lands on
a positive rational square whose root is an admissible ratio.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ecq import CurvePoint, on_curve
from .master import EuclidPair, triple_from_pair
from .ntkernel import is_square_rational


@dataclass(frozen=True)
class FibreCurve:
    m: int
    n: int
    U2: int
    V2: int
    gamma: int
    A: int
    B: int
    C: int
    e1: int
    e2: int
    e3: int


def build_fibre(m: int, n: int) -> FibreCurve:
    """Quartic and cubic data for the pair (m, n); rejects bad pairs.

    >>> f = build_fibre(2, 1)
    >>> (f.U2, f.V2, f.B, f.e1, f.e2, f.e3)
    (3, 4, 4, -4, 32, -32)
    """
    U2, V2, _ = triple_from_pair(EuclidPair(m, n))
    gamma = V2
    B = 4 * U2 * U2 - 2 * V2 * V2
    return FibreCurve(
        m=m, n=n, U2=U2, V2=V2, gamma=gamma,
        A=gamma * gamma, B=B, C=gamma * gamma,
        e1=-B, e2=2 * gamma * gamma, e3=-2 * gamma * gamma,
    )


def quartic_rhs(c: FibreCurve, t: Fraction) -> Fraction:
    t2 = t * t
    return (c.A * t2 + c.B) * t2 + c.C


def phi(c: FibreCurve, t: Fraction, s: Fraction) -> CurvePoint:
    """Map the quartic point (t, s) to the cubic; t = 0 has no image."""
    t = Fraction(t)
    s = Fraction(s)
    if t == 0:
        raise ValueError("t = 0 maps to the point at infinity")
    if s * s != quartic_rhs(c, t):
        raise ValueError("(t, s) does not satisfy the quartic")
    X = 2 * c.gamma * (s + c.gamma) / (t * t)
    Y = t * (X * X - 4 * c.gamma**4) / (2 * c.gamma)
    P = CurvePoint(X, Y)
    if not on_curve(c, P):
        raise AssertionError(f"phi image off curve on fibre ({c.m},{c.n})")
    return P


def tau(c: FibreCurve, P: CurvePoint) -> Fraction | None:
    """The t^2 a point came from; None at infinity and at X = +-2 gamma^2."""
    if P.is_infinity:
        return None
    g2 = 2 * c.gamma * c.gamma
    if P.X == g2 or P.X == -g2:
        return None
    return 4 * c.gamma**2 * (P.X + c.B) / (P.X * P.X - 4 * c.gamma**4)


def lift_point(c: FibreCurve, P: CurvePoint) -> EuclidPair | None:
    """The admissible pair (a, b) behind a point, when one exists.

    Requires tau to be a positive rational square; the root a/b (taken
    positive, in lowest terms) must additionally satisfy a > b with
    a - b odd.  Certification of the hit itself stays with the caller.
    """
    tv = tau(c, P)
    if tv is None or tv == 0:
        return None
    root = is_square_rational(tv)
    if root is None:
        return None
    a, b = root.numerator, root.denominator
    if a <= b or (a - b) % 2 == 0:
        return None
    return EuclidPair(a, b)


# ---------------------------------------------------------------------------
# the one-time algebraic identity tau(phi(t, s)) = t^2


def _pmul(f: dict, g: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in f.items():
        for (i2, j2), c2 in g.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _psub(f: dict, g: dict) -> dict:
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _pscale(f: dict, c: int) -> dict:
    return {k: c * v for k, v in f.items() if c * v}


def _reduce_s(f: dict, quartic: dict) -> dict:
    # rewrite s^2 as the quartic in t until only s-degrees 0 and 1 remain
    out: dict = {}
    work = dict(f)
    while work:
        (i, j), c = work.popitem()
        if j < 2:
            out[(i, j)] = out.get((i, j), 0) + c
            continue
        for (qi, _), qc in quartic.items():
            key = (i + qi, j - 2)
            work[key] = work.get(key, 0) + c * qc
    return {k: v for k, v in out.items() if v}


def tau_phi_identity(c: FibreCurve) -> bool:
    """Exact check that tau after phi returns t^2 on the whole fibre.

    Works in Z[t, s] modulo s^2 - f(t): the numerator of tau(X(t,s)) - t^2
    must reduce to zero while the denominator does not.
    """
    g = c.gamma
    Xn = {(0, 1): 2 * g, (0, 0): 2 * g * g}  # numerator of X, over t^2
    Xd = {(2, 0): 1}
    quartic = {(4, 0): c.A, (2, 0): c.B, (0, 0): c.C}
    shifted = dict(Xn)  # Xn + B * Xd
    for k, v in Xd.items():
        shifted[k] = shifted.get(k, 0) + c.B * v
    den = _psub(_pmul(Xn, Xn), _pscale(_pmul(Xd, Xd), 4 * g**4))
    num = _psub(_pscale(_pmul(shifted, Xd), 4 * g * g), _pmul({(2, 0): 1}, den))
    return _reduce_s(num, quartic) == {} and _reduce_s(den, quartic) != {}
