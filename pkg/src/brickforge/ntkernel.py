"""Integer utilities and the staged factorization engine.

Plain Python ints throughout.  The factor() pipeline is two-stage:
trial division by primes below 10**6, then Brent's cycle-finding
variant of Pollard rho with batched gcds.  Whatever survives the
time budget is returned as a composite residual and the result is
marked partial instead of raising.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

TRIAL_LIMIT = 10**6
DEFAULT_BUDGET = 600.0  # seconds, per factored integer

_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def isqrt(n: int) -> int:
    """Floor of the square root of n.

    >>> isqrt(15624)
    124
    """
    if n < 0:
        raise ValueError("isqrt of negative integer")
    return math.isqrt(n)


def is_perfect_square(n: int) -> int | None:
    """Return the nonnegative root when n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_square_rational(q: Fraction) -> Fraction | None:
    """Positive rational square root of q in lowest terms, or None.

    Zero is rejected on purpose (callers discard t = 0 lifts).

    >>> is_square_rational(Fraction(3025, 2304))
    Fraction(55, 48)
    """
    if q <= 0:
        return None
    rn = is_perfect_square(q.numerator)
    if rn is None:
        return None
    rd = is_perfect_square(q.denominator)
    if rd is None:
        return None
    return Fraction(rn, rd)


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n.  n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


# ---------------------------------------------------------------------------
# primality


def _mr_composite(n: int, a: int) -> bool:
    """One Miller-Rabin round; True means a witnesses compositeness."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge's parameters."""
    # pick D from 5, -7, 9, -11, ... with (D|n) = -1
    D = 5
    while True:
        j = _jacobi(D % n, n)
        if j == 0:
            return False  # shares a factor with n
        if j == -1:
            break
        D = -(D + 2) if D > 0 else -(D - 2)
        if D == 13 and is_perfect_square(n) is not None:
            return False
    P = 1
    Q = (1 - D) // 4
    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # compute U_d, V_d, Q^d by the binary chain
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = U * P + V, D * U + V * P  # pre-halving values (2U', 2V')
            if U % 2:
                U += n
            if V % 2:
                V += n
            U, V = U // 2 % n, V // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2**64 (fixed Miller-Rabin bases); Baillie-PSW
    probable-prime answer above that, which has no known counterexample."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < 2**64:
        return not any(_mr_composite(n, a) for a in _MR_BASES_64)
    return not _mr_composite(n, 2) and _strong_lucas_prp(n)


# ---------------------------------------------------------------------------
# factorization


@dataclass
class Factorization:
    """Prime-exponent list, possibly-composite residual, full/partial flag.

    Invariants: primes strictly increasing, every one certified by
    is_prime, residual == 1 exactly when status == "full", and
    product() reconstructs the original input.
    """

    factors: list[tuple[int, int]] = field(default_factory=list)
    residual: int = 1
    status: str = "full"

    def product(self) -> int:
        out = self.residual
        for p, e in self.factors:
            out *= p**e
        return out


_trial_primes_cache: list[int] | None = None


def _trial_primes() -> list[int]:
    global _trial_primes_cache
    if _trial_primes_cache is None:
        sieve = bytearray([1]) * TRIAL_LIMIT
        sieve[0] = sieve[1] = 0
        for i in range(2, math.isqrt(TRIAL_LIMIT) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _trial_primes_cache = [i for i in range(TRIAL_LIMIT) if sieve[i]]
    return _trial_primes_cache


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root, Newton iteration on ints."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int] | None:
    """(base, k) with base**k == n and k >= 2, or None."""
    for k in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
        if (1 << k) > n:
            break
        r = _iroot(n, k)
        if r**k == n:
            return r, k
    return None


def _brent_rho(n: int, deadline: float) -> int | None:
    """A nontrivial factor of composite odd n, or None on budget exhaustion.

    Brent's cycle finder with products of differences accumulated so a
    gcd is only taken once per batch; the polynomial constant is bumped
    whenever a run collapses to the trivial factor.
    """
    c = 1
    while time.monotonic() < deadline:
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        batch = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += batch
                if g == 1 and time.monotonic() >= deadline:
                    return None
            r *= 2
        if g == n:
            # batch overshot; replay one step at a time from the saved point
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1
    return None


def factor(n: int, budget: float = DEFAULT_BUDGET) -> Factorization:
    """Factor n within a wall-clock budget in seconds.

    Stage 1 is trial division by every prime below 10**6, stage 2 is
    Brent rho with recursive splitting; all emitted primes pass
    is_prime.  Budget exhaustion is not an error, the unsplit part
    becomes the residual and the status degrades to "partial".

    >>> factor(2021).factors
    [(43, 1), (47, 1)]
    """
    if n < 1:
        raise ValueError("factor() wants n >= 1")
    deadline = time.monotonic() + budget
    counts: dict[int, int] = {}
    rem = n
    for p in _trial_primes():
        if p * p > rem:
            break
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    if 1 < rem < TRIAL_LIMIT * TRIAL_LIMIT:
        # below the trial bound squared the leftover must be prime
        counts[rem] = counts.get(rem, 0) + 1
        rem = 1
    leftovers: list[int] = []
    stack: list[tuple[int, int]] = [(rem, 1)] if rem > 1 else []
    while stack:
        m, mult = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + mult
            continue
        pw = _perfect_power(m)
        if pw is not None:
            stack.append((pw[0], mult * pw[1]))
            continue
        d = None
        if time.monotonic() < deadline:
            d = _brent_rho(m, deadline)
        if d is None:
            leftovers.append(m**mult)
            continue
        stack.append((d, mult))
        stack.append((m // d, mult))
    residual = 1
    for m in leftovers:
        residual *= m
    return Factorization(
        factors=sorted(counts.items()),
        residual=residual,
        status="full" if residual == 1 else "partial",
    )
