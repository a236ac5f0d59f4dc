"""Exact characteristic-function arithmetic on a-adic solenoids.

The package decides, in exact rational arithmetic, whether a law on a
solenoid satisfies the equidistribution identity for a rational coefficient
system, decomposes the piecewise characteristic functions that do into a
Gaussian factor times the Haar measure of a compact subgroup, constructs the
classical two-prime counterexamples, and cross-checks everything by seeded
Monte Carlo simulation.
"""

from .charfun import (
    Comparison,
    Decomposition,
    EquationCheck,
    PositivityReport,
    StratifiedCF,
    Stratum,
    SubgroupSpec,
    SupportCheck,
    Term,
    build_cf,
    check_equidistribution,
    compare,
    decompose_gaussian_haar,
    gaussian_cf,
    haar_cf,
    mixture,
    positivity_report,
    subgroup_generated_by,
    support_as_subgroup,
)
from .errors import (
    BadWeights,
    CharacterOutsideGroup,
    CharacterTooDeep,
    ConfigError,
    DepthInsufficient,
    DepthUnavailable,
    PreconditionViolated,
    SoladicError,
    SoundnessError,
    SpecMismatch,
    TermBudgetExceeded,
)
from .sampler import (
    BIT_GENERATOR,
    ConvolutionOf,
    Degenerate,
    EmpiricalCF,
    EquidistReport,
    GaussianLine,
    HaarAnnihilator,
    Mixture,
    SampleBatch,
    SamplerSpec,
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
from .scenarios import (
    CircleCheck,
    CounterexampleBundle,
    ScenarioVerdict,
    blurred_counterexample,
    circle_check,
    classify_and_conclude,
    gaussian_haar_scenario,
    two_prime_counterexample,
)
from .steinitz import (
    INFINITE,
    SolenoidClass,
    SteinitzSpec,
    TwoPrimeCoefficients,
    classify_solenoid,
    coefficients_from_multiplicities,
    in_dual_group,
    is_automorphism,
    solve_multiplicities,
    sum_of_squares_is_one,
    two_prime_coefficients,
    valuation,
)
from .tower import (
    SolenoidPoint,
    apply_aut,
    embed_real,
    pair,
    pair_angle,
    zero_point,
)

__all__ = [
    "BIT_GENERATOR",
    "BadWeights",
    "CharacterOutsideGroup",
    "CharacterTooDeep",
    "CircleCheck",
    "Comparison",
    "ConfigError",
    "ConvolutionOf",
    "CounterexampleBundle",
    "Decomposition",
    "Degenerate",
    "DepthInsufficient",
    "DepthUnavailable",
    "EmpiricalCF",
    "EquationCheck",
    "EquidistReport",
    "GaussianLine",
    "HaarAnnihilator",
    "INFINITE",
    "Mixture",
    "PositivityReport",
    "PreconditionViolated",
    "SampleBatch",
    "SamplerSpec",
    "ScenarioVerdict",
    "Shifted",
    "SoladicError",
    "SolenoidClass",
    "SolenoidPoint",
    "SoundnessError",
    "SpecMismatch",
    "StratifiedCF",
    "Stratum",
    "SubgroupSpec",
    "SupportCheck",
    "SteinitzSpec",
    "Term",
    "TermBudgetExceeded",
    "TwoPrimeCoefficients",
    "apply_aut",
    "blurred_counterexample",
    "build_cf",
    "check_equidistribution",
    "circle_check",
    "classify_and_conclude",
    "classify_solenoid",
    "coefficients_from_multiplicities",
    "compare",
    "decompose_gaussian_haar",
    "default_charset",
    "embed_real",
    "empirical_cf",
    "exact_cf_of",
    "fiber_order",
    "gaussian_cf",
    "gaussian_haar_scenario",
    "haar_cf",
    "in_dual_group",
    "is_automorphism",
    "kuiper_two_sample",
    "linear_form",
    "mixture",
    "monte_carlo_equidist",
    "pair",
    "pair_angle",
    "positivity_report",
    "required_depth",
    "sample",
    "solve_multiplicities",
    "subgroup_generated_by",
    "sum_of_squares_is_one",
    "support_as_subgroup",
    "two_prime_counterexample",
    "two_prime_coefficients",
    "valuation",
    "zero_point",
]

__version__ = "0.1.0"
