"""Exact arithmetic over the multiplicity table that pins down a solenoid.

A compact solenoid (circle included, as the degenerate case) is determined up
to topological isomorphism by a table ``prime -> multiplicity`` with infinity
allowed: the multiplicity says how often the prime divides the defining
sequence.  The dual group of the solenoid is then the additive group of
rationals whose denominators respect that table, so membership, automorphism
and coefficient questions all reduce to valuation bookkeeping.  Everything in
this module is exact (ints and Fractions throughout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import DepthUnavailable, TermBudgetExceeded

#: multiplicity sentinel for "the prime divides the sequence infinitely often"
INFINITE = math.inf

Rational = Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _factor(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here are desk-scale."""
    out: dict[int, int] = {}
    n = abs(n)
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(x: Rational | int, p: int) -> int | float:
    """p-adic valuation v_p(x); +inf for x == 0.  p is assumed prime."""
    x = Fraction(x)
    if x == 0:
        return INFINITE
    v, n = 0, x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class SteinitzSpec:
    """Immutable prime -> multiplicity table.

    ``multiplicities`` is a sorted tuple of (prime, multiplicity) pairs where
    multiplicity is a positive int or INFINITE.  The empty table is the
    circle.
    """

    multiplicities: tuple[tuple[int, int | float], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.multiplicities, tuple):
            raise TypeError(
                "multiplicities must be a tuple of (prime, multiplicity) pairs; "
                "use SteinitzSpec.of(mapping) to build one from a dict"
            )

    @classmethod
    def of(cls, table: Mapping[int, int | float]) -> "SteinitzSpec":
        items = []
        for p in sorted(table):
            m = table[p]
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if m != INFINITE and (not isinstance(m, int) or m < 1):
                raise ValueError(f"multiplicity of {p} must be a positive int or INFINITE")
            items.append((p, m))
        return cls(tuple(items))

    def multiplicity(self, p: int) -> int | float:
        for q, m in self.multiplicities:
            if q == p:
                return m
        return 0

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.multiplicities)

    @property
    def infinite_primes(self) -> tuple[int, ...]:
        return tuple(p for p, m in self.multiplicities if m == INFINITE)

    @property
    def max_depth(self) -> int | float:
        """Length of the defining sequence (INFINITE when any prime is unbounded)."""
        if self.infinite_primes:
            return INFINITE
        return sum(int(m) for _, m in self.multiplicities)

    def tower_prefix(self, n: int) -> tuple[int, ...]:
        """First n terms of the canonical defining sequence.

        Primes are emitted round-robin in increasing order while their
        remaining multiplicity is positive, so {2: inf, 3: inf} yields
        2, 3, 2, 3, ...
        """
        if n > self.max_depth:
            raise DepthUnavailable(
                f"defining sequence has only {self.max_depth} terms, {n} requested"
            )
        return _tower_prefix(self, n)

    def level(self, n: int) -> int:
        """Product of the first n terms of the defining sequence (level 0 is 1)."""
        prefix = self.tower_prefix(n)
        return math.prod(prefix)

    def level_valuation(self, p: int, n: int) -> int:
        """How often p occurs among the first n terms."""
        return sum(1 for a in self.tower_prefix(n) if a == p)

    def depth_with_denominator(self, d: int) -> int:
        """Smallest depth whose level the positive integer d divides.

        Raises DepthUnavailable when no level works (prime outside the table
        or multiplicity exhausted).
        """
        need = _factor(d)
        for p, e in need.items():
            if self.multiplicity(p) < e:
                raise DepthUnavailable(f"no level is divisible by {d}")
        n = 0
        while self.level(n) % d != 0:
            n += 1
        return n


@lru_cache(maxsize=None)
def _tower_prefix(spec: SteinitzSpec, n: int) -> tuple[int, ...]:
    remaining = {p: m for p, m in spec.multiplicities}
    out: list[int] = []
    while len(out) < n:
        for p in sorted(remaining):
            if len(out) == n:
                break
            if remaining[p] > 0:
                out.append(p)
                if remaining[p] != INFINITE:
                    remaining[p] -= 1
    return tuple(out)


def in_dual_group(spec: SteinitzSpec, y: Rational | int) -> bool:
    """Whether y lies in the rational character group of the solenoid.

    True iff every prime r satisfies v_r(y) >= -multiplicity(r); only primes
    dividing the denominator can fail.
    """
    y = Fraction(y)
    for r, e in _factor(y.denominator).items():
        if spec.multiplicity(r) < e:
            return False
    return True


def is_automorphism(spec: SteinitzSpec, alpha: Rational | int) -> bool:
    """Whether multiplication by alpha is invertible on the character group.

    Requires alpha != 0 and every prime of numerator and denominator to carry
    infinite multiplicity; +-1 always qualify.
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        return False
    for n in (abs(alpha.numerator), alpha.denominator):
        for r in _factor(n):
            if spec.multiplicity(r) != INFINITE:
                return False
    return True


def sum_of_squares_is_one(coeffs: Iterable[Rational]) -> bool:
    """Exact check that the squared coefficients sum to one."""
    return sum(Fraction(c) ** 2 for c in coeffs) == 1


def solve_multiplicities(p: int, length: int) -> list[tuple[int, ...]]:
    """All nonnegative integer vectors (k_1..k_length) with sum k_j/p^(2j) = 1.

    Returned in lexicographic order.  Each solution necessarily has some
    entry k_j > p^j; this structural fact is asserted because downstream
    constructions depend on it.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if length < 1:
        raise ValueError("length must be >= 1")
    # clear denominators: sum k_j * p^(2*(length-j)) == p^(2*length)
    weights = [p ** (2 * (length - j)) for j in range(1, length + 1)]
    target = p ** (2 * length)
    out: list[tuple[int, ...]] = []

    def descend(j: int, remaining: int, acc: list[int]) -> None:
        if j == length - 1:
            out.append(tuple(acc + [remaining]))  # last weight is 1
            return
        w = weights[j]
        for k in range(remaining // w + 1):
            descend(j + 1, remaining - k * w, acc + [k])

    descend(0, target, [])
    for ks in out:
        assert any(k > p**j for j, k in enumerate(ks, start=1))
    return out


def coefficients_from_multiplicities(p: int, ks: Sequence[int]) -> tuple[Rational, ...]:
    """Expand a multiplicity vector into the coefficient list it encodes:
    k_j copies of 1/p^j."""
    out: list[Fraction] = []
    for j, k in enumerate(ks, start=1):
        out.extend([Fraction(1, p**j)] * k)
    return tuple(out)


@dataclass(frozen=True)
class TwoPrimeCoefficients:
    """Coefficient system over a two-prime solenoid with unit square sum.

    b copies of p/q^a and a single 1/q^a, where a is the multiplicative
    order of q^2 modulo p^2 and b = (q^(2a) - 1)/p^2.
    """

    base_prime: int
    partner_prime: int
    order: int
    count: int
    coefficients: tuple[Rational, ...]


def two_prime_coefficients(p: int, q: int, max_terms: int = 10**6) -> TwoPrimeCoefficients:
    if not (_is_prime(p) and _is_prime(q)) or p == q:
        raise ValueError("need two distinct primes")
    mod = p * p
    a, acc = 1, (q * q) % mod
    while acc != 1:
        acc = (acc * q * q) % mod
        a += 1
    b = (q ** (2 * a) - 1) // mod
    if b + 1 > max_terms:
        raise TermBudgetExceeded(
            f"system for ({p}, {q}) has {b + 1} coefficients, cap is {max_terms}"
        )
    coeffs = (Fraction(p, q**a),) * b + (Fraction(1, q**a),)
    assert sum_of_squares_is_one(coeffs)
    return TwoPrimeCoefficients(p, q, a, b, coeffs)


@dataclass(frozen=True)
class SolenoidClass:
    """Coarse classification by the number of infinite-multiplicity primes."""

    kind: str  # unique_infinite_prime | multiple_infinite_primes | no_infinite_prime
    infinite_primes: tuple[int, ...]

    @property
    def unique_prime(self) -> int | None:
        return self.infinite_primes[0] if self.kind == "unique_infinite_prime" else None

    @property
    def automorphism_note(self) -> str:
        if self.kind == "no_infinite_prime":
            return "automorphism group is {±1} only"
        monomials = " ".join(f"{p}^k" for p in self.infinite_primes)
        return f"automorphisms are the signed monomials ± {monomials}"


def classify_solenoid(spec: SteinitzSpec) -> SolenoidClass:
    inf = spec.infinite_primes
    if len(inf) == 1:
        return SolenoidClass("unique_infinite_prime", inf)
    if len(inf) > 1:
        return SolenoidClass("multiple_infinite_primes", inf)
    return SolenoidClass("no_infinite_prime", ())
