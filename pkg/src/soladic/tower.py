"""Points of a solenoid as finite-depth tower coordinates, with exact pairing.

A point is stored as (depth N, coordinate t_N in [0,1)); deeper coordinates
are filled in canonically by the small-digit section t_M = t_N / (A_M / A_N).
Under that convention the stored data is exactly the image of the real number
r = t_N * A_N under the line embedding, so the pairing against a character y
is the rational angle r*y (in turns) for every y in the dual group.  All
arithmetic is exact; nothing here touches floats except the complex-valued
convenience wrapper around the angle.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import CharacterOutsideGroup, DepthUnavailable, SpecMismatch
from .steinitz import Rational, SteinitzSpec, in_dual_group, is_automorphism


@dataclass(frozen=True, eq=False)
class SolenoidPoint:
    """Tower coordinate of a solenoid point at a fixed depth.

    Equality and hashing are semantic: two points are equal when they pair
    identically against every character, which under the canonical section
    means equal embedded real values.
    """

    spec: SteinitzSpec
    depth: int
    coord: Fraction

    def __post_init__(self):
        if self.depth < 0 or self.depth > self.spec.max_depth:
            raise DepthUnavailable(f"depth {self.depth} not available")
        if not (0 <= self.coord < 1):
            raise ValueError("coordinate must lie in [0, 1)")
        object.__setattr__(self, "coord", Fraction(self.coord))

    @property
    def real_value(self) -> Fraction:
        """The real number this point embeds, in [0, level(depth))."""
        return self.coord * self.spec.level(self.depth)

    def lift(self, depth: int) -> "SolenoidPoint":
        """Same point, re-expressed at a greater depth (canonical section)."""
        if depth < self.depth:
            raise ValueError("lift target must not be shallower")
        ratio = self.spec.level(depth) // self.spec.level(self.depth)
        return SolenoidPoint(self.spec, depth, self.coord / ratio)

    def project(self, depth: int) -> "SolenoidPoint":
        """Image under the bonding maps down to a shallower depth."""
        if depth > self.depth:
            raise ValueError("projection target must not be deeper")
        ratio = self.spec.level(self.depth) // self.spec.level(depth)
        return SolenoidPoint(self.spec, depth, (self.coord * ratio) % 1)

    def __eq__(self, other):
        if not isinstance(other, SolenoidPoint):
            return NotImplemented
        return self.spec == other.spec and self.real_value == other.real_value

    def __hash__(self):
        return hash((self.spec, self.real_value))

    def __add__(self, other: "SolenoidPoint") -> "SolenoidPoint":
        if not isinstance(other, SolenoidPoint):
            return NotImplemented
        if self.spec != other.spec:
            raise SpecMismatch("points live over different multiplicity tables")
        depth = max(self.depth, other.depth)
        a, b = self.lift(depth), other.lift(depth)
        return SolenoidPoint(self.spec, depth, (a.coord + b.coord) % 1)

    def __neg__(self) -> "SolenoidPoint":
        return SolenoidPoint(self.spec, self.depth, (-self.coord) % 1)

    def __sub__(self, other: "SolenoidPoint") -> "SolenoidPoint":
        return self + (-other)


def zero_point(spec: SteinitzSpec, depth: int = 0) -> SolenoidPoint:
    return SolenoidPoint(spec, depth, Fraction(0))


def embed_real(spec: SteinitzSpec, t: Rational | int, depth: int = 0) -> SolenoidPoint:
    """Image of the real number t on the line winding through the solenoid.

    The stored data keeps t modulo level(depth); pairings against characters
    whose denominator divides that level give exp(2 pi i y t) exactly.
    """
    t = Fraction(t)
    return SolenoidPoint(spec, depth, (t / spec.level(depth)) % 1)


def pair_angle(x: SolenoidPoint, y: Rational | int) -> Fraction:
    """Exact pairing angle in turns: (x, y) = exp(2 pi i * pair_angle(x, y))."""
    y = Fraction(y)
    if not in_dual_group(x.spec, y):
        raise CharacterOutsideGroup(f"{y} is not a character of this solenoid")
    return (x.real_value * y) % 1


def pair(x: SolenoidPoint, y: Rational | int) -> complex:
    """Complex value of the pairing (unit modulus)."""
    return cmath.exp(2j * cmath.pi * float(pair_angle(x, y)))


def apply_aut(x: SolenoidPoint, alpha: Rational | int) -> SolenoidPoint:
    """Image of x under the automorphism 'multiply characters by alpha'.

    Satisfies pair(apply_aut(x, alpha), y) = pair(x, alpha * y) for every
    character y whose denominator divides level(x.depth); the result is
    returned at x's own depth, so deeper characters read the canonical
    section.
    """
    alpha = Fraction(alpha)
    if not is_automorphism(x.spec, alpha):
        raise ValueError(f"{alpha} is not an automorphism of this solenoid")
    level = x.spec.level(x.depth)
    return SolenoidPoint(x.spec, x.depth, ((alpha * x.real_value) % level) / level)
