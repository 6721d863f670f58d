"""Bounded enumeration of new hits fibre by fibre.

Seeds (points of presumed infinite order, independence never assumed)
come from a direct quartic scan, a stored database, or a file.  All
integer combinations with coefficients up to K, shifted through every
torsion point, are pushed through tau; positive square values lift to
candidate pairs and each candidate is re-certified with exact integer
arithmetic before it may be reported.  Soundness is total, completeness
is not claimed at any bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .ecq import INFINITY, CurvePoint, add, neg, on_curve, scalar_mul, torsion_subgroup
from .fibration import FibreCurve, lift_point, phi, quartic_rhs
from .master import EuclidPair, MasterTuple, is_master_hit, master_norm, sigma_canonical
from .ntkernel import is_perfect_square, is_square_rational

DIGIT_CAP = 10000  # skip combination points with larger coordinates
_CAP_BITS = int(DIGIT_CAP * 3.3220) + 8


@dataclass
class GeneratorSet:
    fibre: FibreCurve
    points: list[CurvePoint]
    source: str  # database_lift | naive_search | imported


@dataclass
class MwStats:
    candidates: int = 0
    lifted: int = 0
    certified: int = 0
    skipped_large: int = 0


@dataclass
class MwRun:
    fibre: FibreCurve
    K: int
    outputs: list[MasterTuple]
    stats: MwStats
    provenance: str
    seeds: list[CurvePoint] = field(default_factory=list)
    torsion_points: list[CurvePoint] = field(default_factory=list)


def naive_quartic_search(c: FibreCurve, height_bound: int) -> list[EuclidPair]:
    """Every admissible (a, b) with a <= bound that is a hit on this fibre."""
    if height_bound < 2:
        raise ValueError("height bound must be at least 2")
    out = []
    for a in range(2, height_bound + 1):
        for b in range(1 + (a % 2), a, 2):  # opposite parity to a
            if gcd(a, b) != 1:
                continue
            if is_perfect_square(master_norm(MasterTuple(a, b, c.m, c.n))) is not None:
                out.append(EuclidPair(a, b))
    return out


def seeds_from_hits(c: FibreCurve, hits, torsion=None, source="naive_search") -> GeneratorSet:
    """Map hit pairs onto the cubic and drop anything of finite order."""
    if torsion is None:
        torsion = torsion_subgroup(c)
    torsion_set = set(torsion.points)
    points: list[CurvePoint] = []
    for pair in hits:
        a, b = pair
        q = is_perfect_square(master_norm(MasterTuple(a, b, c.m, c.n)))
        if q is None:
            raise ValueError(f"({a},{b}) is not a hit on fibre ({c.m},{c.n})")
        P = phi(c, Fraction(a, b), Fraction(q, b * b))
        if P in torsion_set or P in points:
            continue
        points.append(P)
    return GeneratorSet(c, points, source)


def load_seed_file(path, c: FibreCurve, torsion=None) -> GeneratorSet:
    """Seed points from a text file: either `Xn/Xd Yn/Yd` or `t a/b` lines."""
    if torsion is None:
        torsion = torsion_subgroup(c)
    torsion_set = set(torsion.points)
    points: list[CurvePoint] = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split("#")[0].split()
            if not tokens:
                continue
            if tokens[0] == "t":
                t = Fraction(tokens[1])
                s = is_square_rational(quartic_rhs(c, t))
                if s is None:
                    raise ValueError(f"{path}:{lineno}: t = {t} is not on a hit")
                P = phi(c, t, s)
            else:
                if len(tokens) != 2:
                    raise ValueError(f"{path}:{lineno}: expected two fields")
                P = CurvePoint(Fraction(tokens[0]), Fraction(tokens[1]))
                if not on_curve(c, P):
                    raise ValueError(f"{path}:{lineno}: point not on fibre ({c.m},{c.n})")
            if P not in torsion_set and P not in points:
                points.append(P)
    return GeneratorSet(c, points, "imported")


def _coefficient_vectors(r: int, K: int) -> list[tuple[int, ...]]:
    # graded lex with the leading nonzero entry positive; -v would give
    # the mirror point, whose tau is identical
    vecs = []
    for v in product(range(-K, K + 1), repeat=r):
        nz = [x for x in v if x]
        if nz and nz[0] > 0:
            vecs.append(v)
    vecs.sort(key=lambda v: (sum(abs(x) for x in v), v))
    return vecs


def _too_large(P: CurvePoint) -> bool:
    if P.is_infinity:
        return False
    return max(
        P.X.numerator.bit_length(),
        P.X.denominator.bit_length(),
        P.Y.numerator.bit_length(),
        P.Y.denominator.bit_length(),
    ) > _CAP_BITS


def enumerate_and_certify(g: GeneratorSet, K: int, torsion) -> MwRun:
    """Run the bounded enumeration and keep only re-certified hits."""
    if K < 1:
        raise ValueError("K must be at least 1")
    c = g.fibre
    stats = MwStats()
    outputs: list[MasterTuple] = []
    seen: set[MasterTuple] = set()
    multiples = []
    for P in g.points:
        row = {0: INFINITY}
        for k in range(1, K + 1):
            row[k] = add(c, row[k - 1], P)
        for k in range(1, K + 1):
            row[-k] = neg(c, row[k])
        multiples.append(row)
    for vec in _coefficient_vectors(len(g.points), K):
        base = INFINITY
        for i, coeff in enumerate(vec):
            base = add(c, base, multiples[i][coeff])
        for T in torsion.points:
            stats.candidates += 1
            R = add(c, base, T)
            if _too_large(R):
                stats.skipped_large += 1
                continue
            pair = lift_point(c, R)
            if pair is None:
                continue
            stats.lifted += 1
            t = MasterTuple(pair.a, pair.b, c.m, c.n)
            if is_master_hit(t) is None:
                raise AssertionError(f"lifted pair {tuple(t)} failed certification")
            stats.certified += 1
            canon = sigma_canonical(t)
            if canon not in seen:
                seen.add(canon)
                outputs.append(canon)
    return MwRun(
        fibre=c,
        K=K,
        outputs=outputs,
        stats=stats,
        provenance=f"MW-{c.m}-{c.n}",
        seeds=list(g.points),
        torsion_points=list(torsion.points),
    )
