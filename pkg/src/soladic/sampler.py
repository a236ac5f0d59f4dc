"""Seeded Monte Carlo realization of solenoid laws, and equidistribution tests.

A sampling law is described by a small tree of variants (point mass, Haar
measure of an annihilator subgroup, pushed-forward line Gaussian, mixture,
shift, convolution).  Every variant knows its own exact characteristic
function, which is what the statistical checks compare against: draws are
depth-N circle coordinates in [0,1), reproducible bit-for-bit from
(law, depth, n, seed) via independent split random streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .charfun import StratifiedCF, SubgroupSpec, gaussian_cf, haar_cf
from .charfun import mixture as cf_mixture
from .errors import (
    BadWeights,
    CharacterOutsideGroup,
    CharacterTooDeep,
    DepthInsufficient,
    DepthUnavailable,
    SpecMismatch,
)
from .steinitz import Rational, SteinitzSpec, in_dual_group, is_automorphism
from .tower import SolenoidPoint

BIT_GENERATOR = "PCG64"


# ---------------------------------------------------------------------------
# sampling laws


class SamplerSpec:
    """Base class for sampling-law descriptions."""

    @property
    def ambient(self) -> SteinitzSpec:
        raise NotImplementedError

    def exact_cf(self) -> StratifiedCF:
        raise NotImplementedError

    def _draw(self, n: int, depth: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Degenerate(SamplerSpec):
    """Point mass at an exactly representable point."""

    x: SolenoidPoint

    @property
    def ambient(self) -> SteinitzSpec:
        return self.x.spec

    def exact_cf(self) -> StratifiedCF:
        return gaussian_cf(self.ambient, 0, self.x)

    def _draw(self, n, depth, rng):
        coord = float(self.x.real_value / self.ambient.level(depth) % 1)
        return np.full(n, coord)


@dataclass(frozen=True)
class HaarAnnihilator(SamplerSpec):
    """Haar measure of the closed subgroup annihilating E.

    The depth-N marginal is uniform on the fiber {j/d_N : 0 <= j < d_N} with
    d_N the least positive integer m such that m/A_N lies in E; when E is the
    zero subgroup the fiber degenerates to the whole circle and the draw is
    continuous uniform (the law is Haar measure of the full solenoid).
    """

    E: SubgroupSpec

    @property
    def ambient(self) -> SteinitzSpec:
        return self.E.spec

    def exact_cf(self) -> StratifiedCF:
        return haar_cf(self.E)

    def _draw(self, n, depth, rng):
        if self.E.trivial:
            return rng.random(n)
        d = fiber_order(self.E, depth)
        return rng.integers(0, d, size=n) / d


def fiber_order(subgroup: SubgroupSpec, depth: int) -> int:
    """Least positive m with m/A_depth inside the subgroup."""
    spec = subgroup.spec
    if subgroup.trivial:
        raise DepthInsufficient("the zero subgroup has no finite fiber at any depth")
    d = 1
    for p, t in subgroup.thresholds:
        e = t + spec.level_valuation(p, depth)
        if e > 0:
            d *= p**e
    return d


@dataclass(frozen=True)
class GaussianLine(SamplerSpec):
    """Pushforward of a real-line normal law through the canonical embedding.

    Parameterized by the rational decay sigma of its characteristic function
    exp(-sigma y^2); the line standard deviation is the derived float
    s = sqrt(sigma / (2 pi^2)), so sigma = 2 pi^2 s^2 holds exactly in the
    symbolic layer and to double precision in the sampling layer.
    """

    spec: SteinitzSpec
    sigma: Fraction
    mean: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        object.__setattr__(self, "mean", Fraction(self.mean))
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @property
    def ambient(self) -> SteinitzSpec:
        return self.spec

    @property
    def s(self) -> float:
        return math.sqrt(float(self.sigma) / (2 * math.pi**2))

    def exact_cf(self) -> StratifiedCF:
        return gaussian_cf(self.spec, self.sigma, self.mean)

    def _draw(self, n, depth, rng):
        z = float(self.mean) + self.s * rng.standard_normal(n)
        return np.mod(z / float(self.spec.level(depth)), 1.0)


@dataclass(frozen=True)
class Mixture(SamplerSpec):
    weights: tuple[Fraction, ...]
    parts: tuple[SamplerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.weights) != len(self.parts) or not self.parts:
            raise BadWeights("need matching, nonempty weights and parts")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise BadWeights("weights must be nonnegative rationals summing to 1")
        if any(p.ambient != self.parts[0].ambient for p in self.parts):
            raise SpecMismatch("mixture parts live over different solenoids")

    @property
    def ambient(self) -> SteinitzSpec:
        return self.parts[0].ambient

    def exact_cf(self) -> StratifiedCF:
        return cf_mixture(self.weights, [p.exact_cf() for p in self.parts])

    def _draw(self, n, depth, rng):
        probs = np.array([float(w) for w in self.weights])
        probs /= probs.sum()
        idx = rng.choice(len(self.parts), size=n, p=probs)
        out = np.empty(n)
        for j, (part, child) in enumerate(zip(self.parts, rng.spawn(len(self.parts)))):
            mask = idx == j
            out[mask] = part._draw(int(mask.sum()), depth, child)
        return out


@dataclass(frozen=True)
class Shifted(SamplerSpec):
    """A law translated by an exactly representable point."""

    x: SolenoidPoint
    law: SamplerSpec

    def __post_init__(self):
        if self.x.spec != self.law.ambient:
            raise SpecMismatch("shift point lives over a different solenoid")

    @property
    def ambient(self) -> SteinitzSpec:
        return self.law.ambient

    def exact_cf(self) -> StratifiedCF:
        return gaussian_cf(self.ambient, 0, self.x) * self.law.exact_cf()

    def _draw(self, n, depth, rng):
        offset = float(self.x.real_value / self.ambient.level(depth) % 1)
        return np.mod(self.law._draw(n, depth, rng) + offset, 1.0)


@dataclass(frozen=True)
class ConvolutionOf(SamplerSpec):
    """Sum of independent draws, one from each part."""

    parts: tuple[SamplerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("need at least one part")
        if any(p.ambient != self.parts[0].ambient for p in self.parts):
            raise SpecMismatch("convolution parts live over different solenoids")

    @property
    def ambient(self) -> SteinitzSpec:
        return self.parts[0].ambient

    def exact_cf(self) -> StratifiedCF:
        out = self.parts[0].exact_cf()
        for p in self.parts[1:]:
            out = out * p.exact_cf()
        return out

    def _draw(self, n, depth, rng):
        total = np.zeros(n)
        for part, child in zip(self.parts, rng.spawn(len(self.parts))):
            total += part._draw(n, depth, child)
        return np.mod(total, 1.0)


def exact_cf_of(law: SamplerSpec) -> StratifiedCF:
    """The true characteristic function of the sampling law."""
    return law.exact_cf()


# ---------------------------------------------------------------------------
# batches


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Depth-N circle coordinates of i.i.d. draws, with their seed record."""

    spec: SteinitzSpec
    depth: int
    coords: np.ndarray
    seed_record: str

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    def project(self, depth: int) -> "SampleBatch":
        """Push the batch down the tower to a shallower depth."""
        if depth > self.depth:
            raise DepthInsufficient(f"cannot project depth {self.depth} up to {depth}")
        if depth == self.depth:
            return self
        ratio = self.spec.level(self.depth) // self.spec.level(depth)
        return SampleBatch(self.spec, depth, np.mod(self.coords * float(ratio), 1.0), self.seed_record)


def sample(law: SamplerSpec, depth: int, n: int, seed) -> SampleBatch:
    """Draw n i.i.d. depth-N coordinates of the law, reproducibly from seed."""
    if n < 1:
        raise ValueError("need at least one draw")
    spec = law.ambient
    spec.level(depth)  # validates depth against the tower
    if isinstance(seed, np.random.SeedSequence):
        record = f"{BIT_GENERATOR}(entropy={seed.entropy}, spawn_key={seed.spawn_key})"
        rng = np.random.Generator(np.random.PCG64(seed))
    else:
        record = f"{BIT_GENERATOR}(seed={seed})"
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    coords = law._draw(n, depth, rng)
    return SampleBatch(spec, depth, coords, record)


# ---------------------------------------------------------------------------
# linear forms in independent draws


def required_depth(spec: SteinitzSpec, coeffs: Sequence[Rational], depth: int) -> int:
    """Sampling depth that makes a linear form exact down at `depth`.

    The unseen digits of a draw beyond its sampling depth M contribute
    alpha * A_M * (integer) to the sum; those terms vanish modulo A_depth
    exactly when every coefficient denominator divides A_M / A_depth.
    """
    need = math.lcm(*(Fraction(c).denominator for c in coeffs))
    m = depth
    ratio = 1
    while ratio % need:
        try:
            ratio *= spec.tower_prefix(m + 1)[m]
        except DepthUnavailable as exc:
            raise DepthInsufficient(
                f"tower cannot absorb coefficient denominators {need} above depth {depth}"
            ) from exc
        m += 1
    return m


def linear_form(batches: Sequence[SampleBatch], coeffs: Sequence[Rational], depth: int | None = None) -> SampleBatch:
    """Per-draw sum of coefficient-scaled batches, reported at a sound depth.

    All batches must share spec, depth and size.  The result's depth is the
    deepest level at which the truncated coordinate arithmetic agrees with
    the true law of the linear form; pass `depth` to pick a shallower one.
    """
    if not batches:
        raise ValueError("need at least one batch")
    if len(batches) != len(coeffs):
        raise ValueError("need one coefficient per batch")
    spec = batches[0].spec
    m_depth = batches[0].depth
    n = batches[0].n
    for b in batches:
        if b.spec != spec:
            raise SpecMismatch("batches live over different solenoids")
        if b.depth != m_depth or b.n != n:
            raise ValueError("batches must share depth and size")
    coeffs = [Fraction(c) for c in coeffs]
    for c in coeffs:
        if not is_automorphism(spec, c):
            raise ValueError(f"coefficient {c} is not an automorphism of this solenoid")
    need = math.lcm(*(c.denominator for c in coeffs))
    if depth is None:
        depth = next(
            (d for d in range(m_depth, -1, -1) if (spec.level(m_depth) // spec.level(d)) % need == 0),
            None,
        )
        if depth is None:
            raise DepthInsufficient(
                f"no depth at or below {m_depth} absorbs coefficient denominators {need}"
            )
    else:
        if depth > m_depth or (spec.level(m_depth) // spec.level(depth)) % need:
            raise DepthInsufficient(
                f"batches at depth {m_depth} are too shallow for an exact depth-{depth} linear form"
            )
    total = np.zeros(n)
    for b, c in zip(batches, coeffs):
        total += b.coords * float(c)
    combined = SampleBatch(spec, m_depth, np.mod(total, 1.0), batches[0].seed_record)
    return combined.project(depth)


# ---------------------------------------------------------------------------
# empirical characteristic function


@dataclass(frozen=True, eq=False)
class EmpiricalCF:
    chars: tuple[Fraction, ...]
    estimates: np.ndarray
    radius: float  # 3/sqrt(n) confidence disk around each estimate

    def gap_to(self, cf: StratifiedCF) -> float:
        return max(abs(est - cf(y)) for y, est in zip(self.chars, self.estimates))


def empirical_cf(batch: SampleBatch, ys: Sequence[Rational]) -> EmpiricalCF:
    """Mean of the character values over the batch, for each character."""
    ys = [Fraction(y) for y in ys]
    level = batch.spec.level(batch.depth)
    multipliers = []
    for y in ys:
        if not in_dual_group(batch.spec, y):
            raise CharacterOutsideGroup(f"{y} is not a character of this solenoid")
        m = y * level
        if m.denominator != 1:
            raise CharacterTooDeep(
                f"character {y} needs more than the batch's {batch.depth} levels"
            )
        multipliers.append(float(m))
    estimates = _kernels.cf_sums(batch.coords, np.array(multipliers))
    return EmpiricalCF(tuple(ys), estimates, 3.0 / math.sqrt(batch.n))


# ---------------------------------------------------------------------------
# Kuiper two-sample test


def _kuiper_p(v: float, n_eff: float) -> float:
    """Asymptotic tail probability for the Kuiper V statistic.

    The usual series with the finite-sample scale factor; conservative for
    heavily tied (lattice-valued) data, which only makes the test less
    likely to reject.
    """
    root = math.sqrt(n_eff)
    lam = (root + 0.155 + 0.24 / root) * v
    if lam < 0.4:
        return 1.0
    total = 0.0
    for m in range(1, 200):
        t = 2.0 * (m * lam) ** 2
        term = (2.0 * t - 1.0) * math.exp(-t)
        total += term
        if m > 3 and abs(term) < 1e-14:
            break
    return min(1.0, max(0.0, 2.0 * total))


_TIE_GRID = float(1 << 40)


def _snap(coords: np.ndarray) -> np.ndarray:
    """Quantize circle coordinates to a fixed binary grid.

    Lattice-valued laws produce atoms, and different arithmetic paths (direct
    sampling vs. a linear form) can land on the same atom one ulp apart;
    left unquantized, that splits ties and fabricates a huge ECDF gap.  The
    grid of 2^-40 is far below any statistical resolution yet far above
    accumulated rounding error, and the modulus keeps wrap-around values on
    the zero atom.
    """
    return np.mod(np.round(coords * _TIE_GRID), _TIE_GRID) / _TIE_GRID


def kuiper_two_sample(batch1: SampleBatch, batch2: SampleBatch) -> tuple[float, float]:
    """Kuiper V statistic and asymptotic p-value for two coordinate batches."""
    if batch1.depth != batch2.depth:
        raise ValueError("batches must share a depth")
    dplus, dminus = _kernels.kuiper_deltas(_snap(batch1.coords), _snap(batch2.coords))
    v = dplus + dminus
    n_eff = batch1.n * batch2.n / (batch1.n + batch2.n)
    return v, _kuiper_p(v, n_eff)


# ---------------------------------------------------------------------------
# Monte Carlo equidistribution check


@dataclass(frozen=True)
class CharacterGap:
    char: Fraction
    reference: complex
    combined: complex
    gap: float
    p_value: float
    adjusted_p: float


@dataclass(frozen=True)
class KuiperRow:
    depth: int
    statistic: float
    p_value: float
    adjusted_p: float


@dataclass(frozen=True, eq=False)
class EquidistReport:
    law: SamplerSpec
    coeffs: tuple[Fraction, ...]
    n: int
    depth: int
    seed: int
    alpha: float
    bit_generator: str
    character_rows: tuple[CharacterGap, ...]
    kuiper_rows: tuple[KuiperRow, ...]
    verdict: str  # "consistent" | "inconsistent"

    @property
    def min_adjusted_p(self) -> float:
        rows = list(self.character_rows) + list(self.kuiper_rows)
        return min(r.adjusted_p for r in rows)


def _two_sample_cf_p(n: int, gap: float) -> float:
    """Hoeffding bound on seeing this empirical cf gap between equal laws.

    Real and imaginary parts of each mean concentrate within
    2 exp(-n t^2 / 2); a union bound over both parts of both batches gives
    8 exp(-n gap^2 / 16).
    """
    return min(1.0, 8.0 * math.exp(-n * gap * gap / 16.0))


def default_charset(spec: SteinitzSpec, depth: int) -> tuple[Fraction, ...]:
    """Small deterministic character panel resolvable at the given depth."""
    ys = {Fraction(m) * Fraction(1, spec.level(d)) for d in range(depth + 1) for m in (1, 2, 3)}
    return tuple(sorted(ys))


def monte_carlo_equidist(
    law: SamplerSpec,
    coeffs: Sequence[Rational],
    n: int = 100_000,
    depth: int = 4,
    charset: Sequence[Rational] | None = None,
    seed: int = 0,
    alpha: float = 0.01,
) -> EquidistReport:
    """Compare one draw's law against the linear form of independent copies.

    Draws a reference batch of the law and an independent batch per
    coefficient, forms the linear form, and tests the two resulting samples
    for equality in law: empirical characteristic-function gaps on the
    character panel (Hoeffding p-values) plus Kuiper two-sample tests at
    every depth down the tower.  The verdict applies a Bonferroni correction
    across all tests at the given level.
    """
    coeffs = [Fraction(c) for c in coeffs]
    if not coeffs:
        raise ValueError("need at least one coefficient")
    spec = law.ambient
    for c in coeffs:
        if not is_automorphism(spec, c):
            raise ValueError(f"coefficient {c} is not an automorphism of this solenoid")
    deep = required_depth(spec, coeffs, depth)
    children = np.random.SeedSequence(seed).spawn(len(coeffs) + 1)
    reference = sample(law, depth, n, children[0])
    parts = [sample(law, deep, n, child) for child in children[1:]]
    combined = linear_form(parts, coeffs, depth=depth)

    chars = tuple(Fraction(y) for y in charset) if charset is not None else default_charset(spec, depth)
    ref_cf = empirical_cf(reference, chars)
    comb_cf = empirical_cf(combined, chars)
    kuiper_depths = list(range(1, depth + 1)) if depth >= 1 else [0]
    tests = len(chars) + len(kuiper_depths)

    char_rows = []
    for y, a, b in zip(chars, ref_cf.estimates, comb_cf.estimates):
        gap = abs(a - b)
        p = _two_sample_cf_p(n, gap)
        char_rows.append(CharacterGap(y, complex(a), complex(b), float(gap), p, min(1.0, p * tests)))
    kuiper_rows = []
    for d in kuiper_depths:
        v, p = kuiper_two_sample(reference.project(d), combined.project(d))
        kuiper_rows.append(KuiperRow(d, v, p, min(1.0, p * tests)))

    worst = min(r.adjusted_p for r in char_rows + kuiper_rows)
    verdict = "consistent" if worst >= alpha else "inconsistent"
    return EquidistReport(
        law,
        tuple(coeffs),
        n,
        depth,
        seed,
        alpha,
        BIT_GENERATOR,
        tuple(char_rows),
        tuple(kuiper_rows),
        verdict,
    )
