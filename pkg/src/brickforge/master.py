"""Admissible tuples, Pythagorean triples, coupling norms and edges.

An admissible pair (a, b) has a > b > 0, gcd(a, b) = 1 and a - b odd;
it generates the primitive triple (a^2 - b^2, 2ab, a^2 + b^2).  Two
such pairs form a tuple (a, b, m, n), and the tuple is a hit when the
coupling norm M = (V1*U2)^2 + (U1*V2)^2 is a perfect square, in which
case the edges x = U1*U2, y = V1*U2, z = U1*V2 form a box with integer
face diagonals.
"""
from __future__ import annotations

from math import gcd
from typing import NamedTuple

from .ntkernel import is_perfect_square


class EuclidPair(NamedTuple):
    a: int
    b: int


class PythTriple(NamedTuple):
    U: int
    V: int
    W: int


class MasterTuple(NamedTuple):
    a: int
    b: int
    m: int
    n: int

    @property
    def first(self) -> EuclidPair:
        return EuclidPair(self.a, self.b)

    @property
    def second(self) -> EuclidPair:
        return EuclidPair(self.m, self.n)


class Brick(NamedTuple):
    x: int
    y: int
    z: int
    dxy: int
    dxz: int
    dyz: int | None = None  # present exactly when the tuple is a hit


def is_admissible(a: int, b: int, m: int, n: int):
    """(True, None) for an admissible quadruple, else (False, reason).

    The reason names the first violated condition: orderings, then
    coprimality, then parity.
    """
    if a <= b:
        return False, "a <= b"
    if b <= 0:
        return False, "b <= 0"
    if m <= n:
        return False, "m <= n"
    if n <= 0:
        return False, "n <= 0"
    if gcd(a, b) != 1:
        return False, f"gcd(a,b) = {gcd(a, b)}"
    if gcd(m, n) != 1:
        return False, f"gcd(m,n) = {gcd(m, n)}"
    if (a - b) % 2 == 0:
        return False, "a - b even"
    if (m - n) % 2 == 0:
        return False, "m - n even"
    return True, None


def require_admissible(t: MasterTuple) -> None:
    ok, reason = is_admissible(*t)
    if not ok:
        raise ValueError(f"inadmissible tuple {tuple(t)}: {reason}")


def triple_from_pair(p: EuclidPair) -> PythTriple:
    """Primitive Pythagorean triple (a^2 - b^2, 2ab, a^2 + b^2).

    >>> triple_from_pair(EuclidPair(2, 1))
    PythTriple(U=3, V=4, W=5)
    """
    a, b = p
    if not (a > b > 0 and gcd(a, b) == 1 and (a - b) % 2 == 1):
        raise ValueError(f"inadmissible pair ({a}, {b})")
    return PythTriple(a * a - b * b, 2 * a * b, a * a + b * b)


def triples(t: MasterTuple) -> tuple[PythTriple, PythTriple]:
    return triple_from_pair(t.first), triple_from_pair(t.second)


def master_norm(t: MasterTuple) -> int:
    require_admissible(t)
    t1, t2 = triples(t)
    return (t1.V * t2.U) ** 2 + (t1.U * t2.V) ** 2


def is_master_hit(t: MasterTuple) -> int | None:
    """The exact root of M when M is a perfect square, else None."""
    return is_perfect_square(master_norm(t))


def f1(t: MasterTuple) -> int:
    """The space-diagonal norm (W1*U2)^2 + (U1*V2)^2.  Always odd."""
    require_admissible(t)
    t1, t2 = triples(t)
    return (t1.W * t2.U) ** 2 + (t1.U * t2.V) ** 2


def edges(t: MasterTuple) -> Brick:
    require_admissible(t)
    t1, t2 = triples(t)
    return Brick(
        x=t1.U * t2.U,
        y=t1.V * t2.U,
        z=t1.U * t2.V,
        dxy=t1.W * t2.U,
        dxz=t1.U * t2.W,
        dyz=is_master_hit(t),
    )


def is_perfect_cuboid(t: MasterTuple) -> bool:
    """Whether the hit's space diagonal is an integer.  (None known.)"""
    if is_master_hit(t) is None:
        raise ValueError("is_perfect_cuboid expects a certified hit")
    e = edges(t)
    by_edges = is_perfect_square(e.x**2 + e.y**2 + e.z**2) is not None
    by_norm = is_perfect_square(f1(t)) is not None
    if by_edges != by_norm:
        raise AssertionError(f"space-diagonal verdicts disagree on {tuple(t)}")
    return by_edges


def canonical_expressions(t: MasterTuple) -> list[int]:
    """The ordered list of 29 expressions in (a, b, m, n).

    Six entries repeat the squared-difference abbreviations, so the
    value set is generically of size 23.
    """
    require_admissible(t)
    a, b, m, n = t
    (U1, V1, W1), (U2, V2, W2) = triples(t)
    return [
        a, b, m, n,
        a + b, a - b, m + n, m - n,
        a * a + b * b, a * a - b * b, m * m + n * n, m * m - n * n,
        a * b, m * n, 2 * a * b, 2 * m * n,
        W1 * U2, U1 * V2, W1 * V2, V1 * U2, U1 * U2, V1 * V2, W1 * W2,
        U1, V1, W1, U2, V2, W2,
    ]


def parameter_set(t: MasterTuple) -> set[int]:
    """Distinct values of the 29 canonical expressions (size measured,
    not assumed: degenerate tuples collide below 23)."""
    return set(canonical_expressions(t))


def sigma_canonical(t: MasterTuple) -> MasterTuple:
    """Lexicographic minimum of (a,b,m,n) and the slot swap (m,n,a,b)."""
    return MasterTuple(*min(tuple(t), (t.m, t.n, t.a, t.b)))


def _pair_from_triple(U: int, V: int) -> EuclidPair | None:
    # invert U = a^2 - b^2, V = 2ab: a^2 = (W+U)/2, b^2 = (W-U)/2
    W = is_perfect_square(U * U + V * V)
    if W is None or (W + U) % 2:
        return None
    a = is_perfect_square((W + U) // 2)
    b = is_perfect_square((W - U) // 2)
    if a is None or b is None or 2 * a * b != V:
        return None
    return EuclidPair(a, b)


def _recover_candidates(x: int, y: int, z: int) -> list[tuple[MasterTuple, int]]:
    """All (tuple, scale) with edges(tuple) == scale * (x, y, z) slotwise.

    Works on ratios: y/x reduces to V1/U1 and z/x to V2/U2 because both
    triples are primitive, so gcd(U1, V1) = gcd(U2, V2) = 1.  With exact
    input edges the scale comes out 1 and the first division is just
    U2 = gcd(x, y).
    """
    if min(x, y, z) <= 0:
        return []
    out: list[tuple[MasterTuple, int]] = []
    for xi in range(3):
        exs = [x, y, z]
        ex = exs.pop(xi)
        for ey, ez in (exs, exs[::-1]):
            d1 = gcd(ex, ey)
            u1, v1 = ex // d1, ey // d1
            d2 = gcd(ex, ez)
            u2, v2 = ex // d2, ez // d2
            p1 = _pair_from_triple(u1, v1)
            p2 = _pair_from_triple(u2, v2)
            if p1 is None or p2 is None:
                continue
            t = MasterTuple(p1.a, p1.b, p2.a, p2.b)
            if not is_admissible(*t)[0]:
                continue
            e = edges(t)
            if e.x % ex or (e.x // ex) * ey != e.y or (e.x // ex) * ez != e.z:
                continue
            rec = (t, e.x // ex)
            if rec not in out:
                out.append(rec)
    return out


def recover_master_tuple(x: int, y: int, z: int) -> list[MasterTuple]:
    """Tuples whose edges are exactly (x, y, z) up to reordering of the
    two even edges; empty when no decomposition exists."""
    return [t for t, scale in _recover_candidates(x, y, z) if scale == 1]


def recover_master_tuple_scaled(x: int, y: int, z: int) -> list[tuple[MasterTuple, int]]:
    """Tuples whose edges are an integer multiple of (x, y, z), with the
    multiplier.  Closed-form family bricks are primitive while the edges
    of a hit carry an intrinsic common factor, so family output is
    matched through this proportional form."""
    return _recover_candidates(x, y, z)
