"""Monte Carlo sampler: exactness bridges, determinism, and test power.

Oracle strategy: each law's sampler is validated against its own exact
characteristic function (computed independently by the symbolic layer) at a
panel of characters, with the 3/sqrt(n) confidence radius as a hard bound
under fixed seeds.  The Kuiper test is calibrated against known-identical
and known-different laws.
"""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from soladic import SteinitzSpec, SubgroupSpec, embed_real, zero_point
from soladic.errors import (
    BadWeights,
    CharacterTooDeep,
    DepthInsufficient,
    SpecMismatch,
)
from soladic.sampler import (
    ConvolutionOf,
    Degenerate,
    EquidistReport,
    GaussianLine,
    HaarAnnihilator,
    Mixture,
    SampleBatch,
    Shifted,
    default_charset,
    empirical_cf,
    exact_cf_of,
    fiber_order,
    kuiper_two_sample,
    linear_form,
    monte_carlo_equidist,
    required_depth,
    sample,
)

DYADIC = SteinitzSpec.of({2: math.inf})
TWO_THREE = SteinitzSpec.of({2: math.inf, 3: math.inf})


def probe_chars(spec, depth):
    """Twenty deterministic characters resolvable at the given depth."""
    level = spec.level(depth)
    out = []
    m = 1
    while len(out) < 20:
        out.append(F(m, level))
        m += 1
    return out


ALL_VARIANTS = [
    Degenerate(embed_real(DYADIC, F(3, 8))),
    HaarAnnihilator(SubgroupSpec.of(DYADIC, {2: -1})),
    HaarAnnihilator(SubgroupSpec.zero(DYADIC)),
    GaussianLine(DYADIC, F(1, 2)),
    GaussianLine(DYADIC, 2, mean=F(1, 3)),
    Mixture(
        (F(1, 4), F(3, 4)),
        (
            HaarAnnihilator(SubgroupSpec.of(DYADIC, {2: 0})),
            GaussianLine(DYADIC, 1),
        ),
    ),
    Shifted(embed_real(DYADIC, F(1, 2)), GaussianLine(DYADIC, 1)),
    ConvolutionOf(
        (
            GaussianLine(DYADIC, F(1, 2)),
            HaarAnnihilator(SubgroupSpec.of(DYADIC, {2: 0})),
        )
    ),
]


class TestSampling:
    def test_degenerate_zero_all_coords_zero(self):
        batch = sample(Degenerate(zero_point(DYADIC)), depth=3, n=50, seed=1)
        assert np.all(batch.coords == 0.0)

    def test_haar_of_whole_dual_is_point_mass_at_zero(self):
        law = HaarAnnihilator(SubgroupSpec.whole(DYADIC))
        batch = sample(law, depth=3, n=50, seed=1)
        assert np.all(batch.coords == 0.0)

    def test_fiber_order_frozen(self):
        # E = {v_2 >= -1} on the dyadic solenoid: least m with m/2^N in E
        # is 2^(N-1)
        e = SubgroupSpec.of(DYADIC, {2: -1})
        for depth in (1, 2, 3, 5):
            assert fiber_order(e, depth) == 2 ** (depth - 1)
        assert fiber_order(SubgroupSpec.whole(DYADIC), 4) == 1
        # A_4 = 36 on the 2,3 tower: need v_2(m) >= 2 and v_3(m) >= 3
        assert fiber_order(SubgroupSpec.of(TWO_THREE, {2: 0, 3: 1}), 4) == 4 * 27

    def test_haar_fiber_support(self):
        e = SubgroupSpec.of(DYADIC, {2: -1})
        batch = sample(HaarAnnihilator(e), depth=4, n=400, seed=5)
        d = fiber_order(e, 4)
        assert d == 8
        scaled = batch.coords * d
        assert np.allclose(scaled, np.round(scaled))
        assert len(np.unique(batch.coords)) == d  # all fiber points seen

    def test_coords_always_in_unit_interval(self):
        for law in ALL_VARIANTS:
            batch = sample(law, depth=4, n=300, seed=9)
            assert np.all(batch.coords >= 0.0) and np.all(batch.coords < 1.0)

    def test_determinism(self):
        for law in ALL_VARIANTS:
            a = sample(law, depth=4, n=200, seed=123)
            b = sample(law, depth=4, n=200, seed=123)
            assert np.array_equal(a.coords, b.coords)
        c = sample(ALL_VARIANTS[3], depth=4, n=200, seed=124)
        assert not np.array_equal(a.coords, c.coords)

    def test_seed_record_mentions_generator(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=2, n=10, seed=7)
        assert "PCG64" in batch.seed_record and "7" in batch.seed_record

    def test_gaussian_scale_ties_to_sigma(self):
        g = GaussianLine(DYADIC, F(1, 2))
        assert abs(2 * math.pi**2 * g.s**2 - 0.5) < 1e-12

    def test_mixture_weight_validation(self):
        with pytest.raises(BadWeights):
            Mixture((F(1, 2), F(1, 3)), (GaussianLine(DYADIC, 1), GaussianLine(DYADIC, 2)))
        with pytest.raises(SpecMismatch):
            Mixture((F(1, 2), F(1, 2)), (GaussianLine(DYADIC, 1), GaussianLine(TWO_THREE, 1)))


class TestEmpiricalCF:
    def test_degenerate_exact_one(self):
        batch = sample(Degenerate(zero_point(DYADIC)), depth=2, n=100, seed=0)
        est = empirical_cf(batch, [F(1, 4), F(1, 2), 1])
        assert np.allclose(est.estimates, 1.0)

    def test_all_variants_match_exact_cf(self):
        # the central generative-symbolic bridge: sampled estimates must sit
        # inside the 3/sqrt(n) disk around the exact cf at 20 characters
        n = 10_000
        chars = probe_chars(DYADIC, 4)
        for law in ALL_VARIANTS:
            batch = sample(law, depth=4, n=n, seed=2024)
            est = empirical_cf(batch, chars)
            cf = exact_cf_of(law)
            for y, value in zip(chars, est.estimates):
                assert abs(value - cf(y)) <= est.radius, (law, y)

    def test_haar_vanishes_off_annihilated_characters(self):
        e = SubgroupSpec.of(DYADIC, {2: 0})
        batch = sample(HaarAnnihilator(e), depth=4, n=10_000, seed=3)
        est = empirical_cf(batch, [F(1, 2), F(1, 4), F(3, 8)])
        assert np.all(np.abs(est.estimates) <= est.radius)

    def test_character_too_deep(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=2, n=100, seed=1)
        with pytest.raises(CharacterTooDeep):
            empirical_cf(batch, [F(1, 8)])

    def test_radius(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=1, n=400, seed=1)
        assert empirical_cf(batch, [1]).radius == pytest.approx(3 / 20)


class TestLinearForm:
    def test_identity_coefficient(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=3, n=100, seed=4)
        out = linear_form([batch], [1])
        assert out.depth == 3
        assert np.array_equal(out.coords, batch.coords)

    def test_difference_of_identical_batches_is_zero(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=3, n=100, seed=4)
        out = linear_form([batch, batch], [1, -1])
        assert np.allclose(out.coords % 1.0, 0.0)

    def test_required_depth(self):
        assert required_depth(DYADIC, [F(1, 2)] * 4, 3) == 4
        assert required_depth(DYADIC, [F(1, 4)], 2) == 4
        assert required_depth(DYADIC, [3, -1], 2) == 2
        # {2:inf, 3:inf} tower alternates 2,3,2,3,...: the level right above
        # depth 1 contributes the needed factor of 3
        assert required_depth(TWO_THREE, [F(1, 3)], 1) == 2
        assert required_depth(TWO_THREE, [F(1, 9)], 1) == 4

    def test_required_depth_unreachable(self):
        spec = SteinitzSpec.of({2: 2})
        with pytest.raises(DepthInsufficient):
            required_depth(spec, [F(1, 2)] * 8, 2)

    def test_depth_projection_is_sound(self):
        # halves need one spare level: sampling at depth 4 supports an exact
        # depth-3 linear form but not depth 4
        batches = [sample(GaussianLine(DYADIC, 1), 4, 100, seed=s) for s in (1, 2, 3, 4)]
        out = linear_form(batches, [F(1, 2)] * 4)
        assert out.depth == 3
        with pytest.raises(DepthInsufficient):
            linear_form(batches, [F(1, 2)] * 4, depth=4)

    def test_gaussian_halves_reproduce_gaussian(self):
        # four independent copies scaled by 1/2 have the same law
        n = 20_000
        law = GaussianLine(DYADIC, F(2, 3))
        batches = [sample(law, 5, n, seed=100 + j) for j in range(4)]
        combined = linear_form(batches, [F(1, 2)] * 4, depth=3)
        est = empirical_cf(combined, probe_chars(DYADIC, 3))
        cf = exact_cf_of(law)
        for y, value in zip(est.chars, est.estimates):
            assert abs(value - cf(y)) <= est.radius

    def test_rejects_non_automorphism(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=3, n=10, seed=0)
        with pytest.raises(ValueError):
            linear_form([batch], [F(1, 3)])


class TestKuiper:
    def test_identical_batches(self):
        batch = sample(GaussianLine(DYADIC, 1), depth=3, n=500, seed=8)
        v, p = kuiper_two_sample(batch, batch)
        assert v == 0.0
        assert p == 1.0

    def test_uniform_vs_point_mass(self):
        uniform = sample(HaarAnnihilator(SubgroupSpec.zero(DYADIC)), 3, 1000, seed=1)
        point = sample(Degenerate(zero_point(DYADIC)), 3, 1000, seed=2)
        v, p = kuiper_two_sample(uniform, point)
        assert p < 1e-6

    def test_same_law_different_seeds_not_rejected(self):
        a = sample(GaussianLine(DYADIC, 1), 3, 5000, seed=21)
        b = sample(GaussianLine(DYADIC, 1), 3, 5000, seed=22)
        v, p = kuiper_two_sample(a, b)
        assert p > 0.01

    def test_calibration_reject_rate(self):
        # under the null the rejection rate at level alpha should be at most
        # a small multiple of alpha; the asymptotic p-value is conservative
        rejections = 0
        reps = 200
        for r in range(reps):
            a = sample(GaussianLine(DYADIC, 1), 2, 400, seed=1000 + 2 * r)
            b = sample(GaussianLine(DYADIC, 1), 2, 400, seed=1001 + 2 * r)
            _, p = kuiper_two_sample(a, b)
            rejections += p < 0.05
        assert rejections <= 0.1 * reps

    def test_tower_pushdown_matches_direct_haar(self):
        # projecting a depth-(N+1) Haar batch down one level is distributed
        # as a depth-N Haar batch
        e = SubgroupSpec.of(DYADIC, {2: -2})
        deep = sample(HaarAnnihilator(e), 5, 10_000, seed=31)
        shallow = sample(HaarAnnihilator(e), 4, 10_000, seed=32)
        v, p = kuiper_two_sample(deep.project(4), shallow)
        assert p > 0.01

    def test_depth_mismatch_rejected(self):
        a = sample(GaussianLine(DYADIC, 1), 3, 100, seed=1)
        b = sample(GaussianLine(DYADIC, 1), 2, 100, seed=1)
        with pytest.raises(ValueError):
            kuiper_two_sample(a, b)


class TestMonteCarloEquidist:
    def test_gaussian_consistent_case(self):
        report = monte_carlo_equidist(
            GaussianLine(DYADIC, 1), [F(1, 2)] * 4, n=20_000, depth=4, seed=11
        )
        assert report.verdict == "consistent"
        assert report.min_adjusted_p >= report.alpha

    def test_gaussian_broken_case(self):
        report = monte_carlo_equidist(
            GaussianLine(DYADIC, 1), [F(1, 2)] * 3, n=50_000, depth=4, seed=12
        )
        assert report.verdict == "inconsistent"
        assert min(r.p_value for r in report.character_rows) < 1e-6

    def test_haar_mixture_consistent_case(self):
        # the two-prime construction: coefficients [2/3, 2/3, 1/3] preserve
        # the mixture law c*Haar(ann L) + (1-c)*Haar(ann H)
        law = Mixture(
            (F(1, 2), F(1, 2)),
            (
                HaarAnnihilator(SubgroupSpec.of(TWO_THREE, {2: -1})),
                HaarAnnihilator(SubgroupSpec.of(TWO_THREE, {2: 0})),
            ),
        )
        report = monte_carlo_equidist(
            law, [F(2, 3), F(2, 3), F(1, 3)], n=20_000, depth=4, seed=13
        )
        assert report.verdict == "consistent"

    def test_report_structure(self):
        report = monte_carlo_equidist(
            GaussianLine(DYADIC, 1), [F(1, 2)] * 4, n=5_000, depth=3, seed=14
        )
        assert isinstance(report, EquidistReport)
        assert report.bit_generator == "PCG64"
        assert len(report.kuiper_rows) == 3
        assert [r.depth for r in report.kuiper_rows] == [1, 2, 3]
        assert report.character_rows[0].adjusted_p >= report.character_rows[0].p_value
        assert report.coeffs == (F(1, 2),) * 4

    def test_default_charset_is_resolvable(self):
        chars = default_charset(DYADIC, 3)
        assert all((F(y) * 8).denominator == 1 for y in chars)
        assert F(1, 8) in chars and F(1) in chars

    def test_identity_coefficient_consistent(self):
        report = monte_carlo_equidist(
            GaussianLine(DYADIC, F(1, 2)), [1], n=5_000, depth=3, seed=15
        )
        assert report.verdict == "consistent"
