"""Config-driven command line: classify, check, simulate, solve-coeffs, counterexample.

Each command takes one JSON config file as a positional argument, prints a
canonical report to stdout, and signals its verdict through the exit code:

* 0 - success (equation holds, simulation consistent, or nothing to decide)
* 1 - verdict-negative: the equation fails or the simulation is inconsistent
* 2 - usage or config error
* 3 - the checker could not decide (verdict unknown)

``--seed`` beats the SOLADIC_SEED environment variable, which beats the
config file.  ``--n``, ``--depth`` and ``--alpha`` override the config's
simulation block.  CSV artifacts (the sampled batches behind a simulation
report, or a counterexample bundle) are written next to the config file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .charfun import StratifiedCF
from .errors import ConfigError, PreconditionViolated, SoladicError, SoundnessError
from .sampler import SamplerSpec, linear_form, monte_carlo_equidist, required_depth, sample
from .scenarios import ScenarioVerdict, blurred_counterexample, classify_and_conclude, two_prime_counterexample
from .serialize import (
    batch_to_csv,
    cf_from_json,
    cf_to_json,
    dump_stable,
    equidist_report_to_json,
    law_from_json,
    law_to_json,
    rational_from_json,
    rational_to_json,
    spec_from_json,
    spec_to_json,
    subgroup_to_json,
)
from .steinitz import SteinitzSpec, classify_solenoid, solve_multiplicities

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_CONFIG = 2
EXIT_UNKNOWN = 3


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def _check_keys(doc: dict, required: set, optional: set, where: str = "config") -> None:
    missing = required - set(doc)
    if missing:
        raise ConfigError(f"{where} is missing keys {sorted(missing)}")
    unknown = set(doc) - required - optional
    if unknown:
        raise ConfigError(f"{where} has unknown keys {sorted(unknown)}")


def _int_field(doc: dict, key: str, where: str = "config") -> int:
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"{where}.{key} must be an integer")
    return v


def _coefficients(doc: dict) -> list[Fraction]:
    raw = doc.get("coefficients")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("config.coefficients must be a nonempty list of rationals")
    return [rational_from_json(c, f"coefficients[{i}]") for i, c in enumerate(raw)]


def _distribution(spec: SteinitzSpec, doc: dict) -> "StratifiedCF | SamplerSpec":
    dist = doc.get("distribution")
    if not isinstance(dist, dict) or len(dist) != 1 or next(iter(dist)) not in ("cf", "law"):
        raise ConfigError("config.distribution must be {'cf': [...]} or {'law': {...}}")
    if "cf" in dist:
        return cf_from_json(spec, dist["cf"], "distribution.cf")
    return law_from_json(spec, dist["law"], "distribution.law")


def _simulation_block(doc: dict) -> dict:
    sim = doc.get("simulation", {})
    if not isinstance(sim, dict):
        raise ConfigError("config.simulation must be an object")
    _check_keys(sim, set(), {"n", "depth", "charset", "seed", "alpha"}, "config.simulation")
    return sim


def _resolve_seed(args, sim: dict) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SOLADIC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"SOLADIC_SEED must be an integer, got {env!r}") from None
    if "seed" in sim:
        return _int_field(sim, "seed", "config.simulation")
    return 0


def _maybe_rational(x) -> "str | None":
    return None if x is None else rational_to_json(x)


def _verdict_to_json(v: ScenarioVerdict) -> dict:
    eq = v.equation
    dec = v.decomposition
    out = {
        "scenario": v.scenario,
        "class": {
            "kind": v.solenoid.kind,
            "infinite_primes": list(v.solenoid.infinite_primes),
            "automorphisms": v.solenoid.automorphism_note,
        },
        "coefficients": [rational_to_json(c) for c in v.coefficients],
        "coefficients_valid": v.coefficients_valid,
        "equation": None if eq is None else {
            "verdict": eq.verdict,
            "witness": _maybe_rational(eq.witness),
            "degenerate": eq.degenerate,
            "note": eq.note,
        },
        "decomposition": None if dec is None else {
            "kind": dec.kind,
            "shift": _maybe_rational(dec.shift),
            "sigma": _maybe_rational(dec.sigma),
            "subgroup": None if dec.subgroup is None else subgroup_to_json(dec.subgroup),
            "p_invariant": dec.p_invariant,
            "reason": dec.reason,
        },
        "conclusion": v.conclusion,
    }
    if v.simulation is not None:
        out["simulation"] = equidist_report_to_json(v.simulation)
    return out


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, "" if obj is None else obj))


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(dump_stable(report))
        return
    rows: list = []
    _flatten("", report, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    doc = _load_config(args.config)
    _check_keys(doc, {"solenoid"}, set())
    spec = spec_from_json(doc["solenoid"])
    klass = classify_solenoid(spec)
    _emit(
        {
            "command": "classify",
            "solenoid": spec_to_json(spec),
            "class": klass.kind,
            "infinite_primes": list(klass.infinite_primes),
            "automorphisms": klass.automorphism_note,
        },
        args.format,
    )
    return EXIT_OK


def cmd_check(args) -> int:
    doc = _load_config(args.config)
    _check_keys(doc, {"solenoid", "coefficients", "distribution"}, set())
    spec = spec_from_json(doc["solenoid"])
    coeffs = _coefficients(doc)
    dist = _distribution(spec, doc)
    f = dist if isinstance(dist, StratifiedCF) else dist.exact_cf()
    verdict = classify_and_conclude(spec, coeffs, f)
    report = {"command": "check", "solenoid": spec_to_json(spec), **_verdict_to_json(verdict)}
    _emit(report, args.format)
    if verdict.equation is None or verdict.equation.verdict == "unknown":
        return EXIT_UNKNOWN
    return EXIT_OK if verdict.equation.verdict == "holds" else EXIT_NEGATIVE


def cmd_simulate(args) -> int:
    doc = _load_config(args.config)
    _check_keys(doc, {"solenoid", "coefficients", "distribution"}, {"simulation"})
    spec = spec_from_json(doc["solenoid"])
    coeffs = _coefficients(doc)
    dist = _distribution(spec, doc)
    if isinstance(dist, StratifiedCF):
        raise ConfigError("simulate needs a sampling law; give distribution.law, not distribution.cf")
    sim = _simulation_block(doc)
    n = args.n if args.n is not None else sim.get("n", 100_000)
    depth = args.depth if args.depth is not None else sim.get("depth", 4)
    alpha = args.alpha if args.alpha is not None else sim.get("alpha", 0.01)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError("simulation n must be a positive integer")
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 0:
        raise ConfigError("simulation depth must be a nonnegative integer")
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool) or not 0 < alpha < 1:
        raise ConfigError(
            "simulation alpha must be a JSON number in (0, 1), e.g. 0.01; "
            "the significance level is approximate, not an exact rational"
        )
    charset = sim.get("charset")
    if charset is not None:
        if not isinstance(charset, list) or not charset:
            raise ConfigError("simulation charset must be a nonempty list of rationals")
        charset = [rational_from_json(y, f"simulation.charset[{i}]") for i, y in enumerate(charset)]
    seed = _resolve_seed(args, sim)

    report = monte_carlo_equidist(dist, coeffs, n=n, depth=depth, charset=charset, seed=seed, alpha=float(alpha))

    # Regenerate the exact batches behind the report and drop them beside the
    # config, so the CSVs correspond to the printed statistics draw for draw.
    children = np.random.SeedSequence(seed).spawn(len(coeffs) + 1)
    reference = sample(dist, depth, n, children[0])
    deep = required_depth(spec, coeffs, depth)
    parts = [sample(dist, deep, n, child) for child in children[1:]]
    combined = linear_form(parts, coeffs, depth=depth)
    base = Path(args.config)
    ref_path = base.with_suffix(".reference.csv")
    comb_path = base.with_suffix(".combined.csv")
    ref_path.write_text(batch_to_csv(reference))
    comb_path.write_text(batch_to_csv(combined))

    out = {
        "command": "simulate",
        "solenoid": spec_to_json(spec),
        "artifacts": {"reference": ref_path.name, "combined": comb_path.name},
        **equidist_report_to_json(report),
    }
    _emit(out, args.format)
    return EXIT_OK if report.verdict == "consistent" else EXIT_NEGATIVE


def cmd_solve_coeffs(args) -> int:
    doc = _load_config(args.config)
    _check_keys(doc, {"p", "l"}, set())
    p = _int_field(doc, "p")
    length = _int_field(doc, "l")
    try:
        table = solve_multiplicities(p, length)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    _emit(
        {
            "command": "solve-coeffs",
            "p": p,
            "l": length,
            "count": len(table),
            "solutions": [list(k) for k in table],
        },
        args.format,
    )
    return EXIT_OK


def cmd_counterexample(args) -> int:
    doc = _load_config(args.config)
    _check_keys(doc, {"p", "q", "c"}, {"sigma", "solenoid"})
    p = _int_field(doc, "p")
    q = _int_field(doc, "q")
    c = rational_from_json(doc["c"], "config.c")
    sigma = rational_from_json(doc.get("sigma", 0), "config.sigma")
    if "solenoid" in doc:
        spec = spec_from_json(doc["solenoid"])
    else:
        spec = SteinitzSpec.of({p: float("inf"), q: float("inf")})
    try:
        if sigma:
            bundle = blurred_counterexample(spec, p, q, c, sigma)
        else:
            bundle = two_prime_counterexample(spec, p, q, c)
    except (PreconditionViolated, ValueError) as err:
        raise ConfigError(str(err)) from None

    bundle_doc = {
        "base_prime": bundle.base_prime,
        "partner_prime": bundle.partner_prime,
        "mixing_weight": rational_to_json(bundle.mixing_weight),
        "sigma": rational_to_json(bundle.sigma),
        "solenoid": spec_to_json(spec),
        "coefficients": [rational_to_json(a) for a in bundle.coefficients],
        "cf": cf_to_json(bundle.cf),
        "law": law_to_json(bundle.sampler),
        **_verdict_to_json(bundle.verdict),
    }
    bundle_path = Path(args.config).with_suffix(".bundle.json")
    bundle_path.write_text(dump_stable(bundle_doc))
    _emit({"command": "counterexample", "bundle": bundle_path.name, **bundle_doc}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soladic",
        description="Exact and Monte Carlo equidistribution checks for laws on a-adic solenoids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "classify": (cmd_classify, "Print the solenoid class and its automorphism group."),
        "check": (cmd_check, "Exact functional-equation verdict plus gaussian-times-haar decomposition."),
        "simulate": (cmd_simulate, "Monte Carlo comparison of a law against its coefficient combination."),
        "solve-coeffs": (cmd_solve_coeffs, "Enumerate exponent vectors whose squared coefficients sum to one."),
        "counterexample": (cmd_counterexample, "Build the two-prime mixture bundle and verify it end to end."),
    }
    for name, (fn, help_text) in handlers.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to a JSON config file")
        cmd.add_argument("--seed", type=int, default=None, help="RNG seed (beats SOLADIC_SEED and the config)")
        cmd.add_argument("--n", type=int, default=None, help="sample size override")
        cmd.add_argument("--depth", type=int, default=None, help="tower depth override")
        cmd.add_argument("--alpha", type=float, default=None, help="significance level override")
        cmd.add_argument("--format", choices=("json", "csv"), default="json", help="stdout report format")
        cmd.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except SoundnessError:
        raise  # an internal invariant broke; a traceback is the honest report
    except SoladicError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
