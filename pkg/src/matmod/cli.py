"""Command line interface: ``matmod fit|test|simulate``.

Exit codes: 0 success, 1 internal or numerical error (or a failed simulation
check), 2 user or input error. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import hypothesis as ht
from . import montecarlo
from .dataset import Dataset, parse_csv
from .errors import (
    ArgumentError,
    DegreesOfFreedomError,
    InputError,
    MatmodError,
    NonUniquenessError,
)
from .linear_models import ModelSpec, fit, one_way_layout, regression_coefficients, regression_design
from .random_arrays import RNG_ALGORITHM, check_seed
from .report import to_json, to_tsv
from .submodules import Submodule, from_rows

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
MIN_REPLICATES = ht.MIN_REPLICATES


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    replicates: int = 10000
    alpha: float = 0.05
    output_format: str = "json"

    def __post_init__(self):
        check_seed(self.seed)
        if self.replicates < MIN_REPLICATES:
            raise ArgumentError(f"--replicates must be >= {MIN_REPLICATES}, got {self.replicates}")
        if not 0.0 < self.alpha < 1.0:
            raise ArgumentError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.output_format not in ("json", "tsv"):
            raise ArgumentError(f"unknown format {self.output_format!r}")


def model_for(dataset: Dataset) -> ModelSpec:
    if dataset.layout == "one-way":
        return one_way_layout(dataset.group_sizes, dataset.group_names)
    if dataset.layout == "regression":
        return regression_design(dataset.regressors, dataset.regressor_names)
    return ModelSpec(Submodule.mean(dataset.n), ("mean",), np.ones((1, dataset.n)))


def _rows(a: np.ndarray) -> list:
    return np.asarray(a).tolist()


def cmd_fit(dataset: Dataset, config: RunConfig) -> dict:
    model = model_for(dataset)
    result = fit(dataset.array, model)
    if result.dof < 1:
        raise DegreesOfFreedomError(
            f"saturated model: n={result.n} observations and model dimension m={result.m}; "
            "the covariance estimate needs n - m >= 1"
        )
    report = {
        "command": "fit",
        "layout": dataset.layout,
        "dims": {"n": result.n, "m": result.m, "p": result.p},
        "responses": list(dataset.response_names),
        "order": list(dataset.order),
    }
    if dataset.layout == "one-way":
        starts = np.cumsum((0,) + dataset.group_sizes[:-1])
        report["group_means"] = {
            g: _rows(result.m_hat.data[:, s]) for g, s in zip(dataset.group_names, starts)
        }
    elif dataset.layout == "regression":
        try:
            coef = regression_coefficients(result, dataset.regressors)
            report["coefficients"] = {
                name: _rows(coef[:, i]) for i, name in enumerate(dataset.regressor_names)
            }
        except NonUniquenessError as exc:
            report["coefficients"] = None
            report["coefficients_note"] = str(exc)
    else:
        report["mean"] = _rows(result.m_hat.data[:, 0])
    report["m_hat"] = _rows(result.m_hat.data.T)
    report["residual_square"] = _rows(result.residual_square)
    report["sigma_hat"] = _rows(result.sigma_hat)
    return report


def hypothesis_submodule(dataset: Dataset, hypothesis: str | None) -> tuple[Submodule, str]:
    """Resolve the ``--hypothesis`` flag to the submodule ``L1``.

    ``equal-means`` (one-way data, the default there): all groups share one
    mean. ``zero`` (the default for a plain sample): the expectation is zero.
    For regression data, a comma-separated list of regressor names keeps
    those regressors and drops the rest.
    """
    n = dataset.n
    if hypothesis is None:
        if dataset.layout == "one-way":
            hypothesis = "equal-means"
        elif dataset.layout == "sample":
            hypothesis = "zero"
        else:
            raise InputError("regression data need --hypothesis naming the retained regressors (or 'zero')")
    if hypothesis == "zero":
        return Submodule.zero(n), hypothesis
    if hypothesis == "equal-means":
        if dataset.layout != "one-way":
            raise InputError("'equal-means' applies to data with a group column")
        return Submodule.mean(n), hypothesis
    if dataset.layout != "regression":
        raise InputError(f"hypothesis {hypothesis!r} needs regressor columns")
    names = [h.strip() for h in hypothesis.split(",") if h.strip()]
    unknown = [h for h in names if h not in dataset.regressor_names]
    if unknown or not names:
        raise InputError(f"unknown regressors in --hypothesis: {unknown or hypothesis!r}")
    idx = [dataset.regressor_names.index(h) for h in names]
    return from_rows(dataset.regressors[idx], n), ",".join(names)


def cmd_test(dataset: Dataset, hypothesis: str | None, config: RunConfig) -> dict:
    model = model_for(dataset)
    l1, label = hypothesis_submodule(dataset, hypothesis)
    spec = ht.HypothesisSpec(model.l, l1)
    report = ht.test_statistics(dataset.array, spec)
    report = ht.monte_carlo_pvalues(report, spec, config.replicates, config.seed)
    return {
        "command": "test",
        "layout": dataset.layout,
        "hypothesis": label,
        "dims": report.dims,
        "responses": list(dataset.response_names),
        "order": list(dataset.order),
        "s1": _rows(report.s1),
        "s2": _rows(report.s2),
        "roots": _rows(report.roots),
        "statistics": report.stats,
        "pvalues": report.pvalues,
        "reject": {k: bool(v <= config.alpha) for k, v in report.pvalues.items()},
        "alpha": config.alpha,
        "replicates": report.replicates,
        "seed": report.seed,
        "rng": RNG_ALGORITHM,
    }


def cmd_simulate(
    scenario: str, config: RunConfig, replicates: int | None = None, seed: int | None = None
) -> dict:
    """Run a named check; ``replicates``/``seed`` left as None use the scenario's own."""
    if scenario not in montecarlo.SCENARIOS:
        raise InputError(f"unknown scenario {scenario!r}; choose from {sorted(montecarlo.SCENARIOS)}")
    result = montecarlo.run_scenario(scenario, replicates=replicates, seed=seed)
    return {
        "command": "simulate",
        "scenario": result.name,
        "passed": result.passed,
        "deviation": result.deviation,
        "tolerance": result.tolerance,
        "replicates": result.replicates,
        "seed": result.seed,
        "details": result.details,
        "rng": RNG_ALGORITHM,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matmod", description="Fit and test gaussian multivariate linear models.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed (default 0)")
    common.add_argument("--alpha", type=float, default=0.05)
    common.add_argument("--format", choices=("json", "tsv"), default="json", dest="output_format")

    p_fit = sub.add_parser("fit", parents=[common], help="fit the gaussian linear model")
    p_fit.add_argument("--input", required=True, help="CSV file")

    p_test = sub.add_parser("test", parents=[common], help="test a linear hypothesis")
    p_test.add_argument("--input", required=True, help="CSV file")
    p_test.add_argument("--replicates", type=int, default=10000)
    p_test.add_argument("--hypothesis", default=None, help="equal-means | zero | x1,x2,...")

    p_sim = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo check")
    p_sim.add_argument("scenario", choices=sorted(montecarlo.SCENARIOS))
    p_sim.add_argument("--replicates", type=int, default=None, help="default: scenario's own")
    return parser


def run(args: argparse.Namespace) -> tuple[dict, int]:
    replicates = getattr(args, "replicates", None)
    config = RunConfig(
        seed=args.seed if args.seed is not None else 0,
        replicates=replicates if replicates is not None else RunConfig.replicates,
        alpha=args.alpha,
        output_format=args.output_format,
    )
    if args.command == "fit":
        return cmd_fit(parse_csv(args.input), config), EXIT_OK
    if args.command == "test":
        return cmd_test(parse_csv(args.input), args.hypothesis, config), EXIT_OK
    report = cmd_simulate(args.scenario, config, replicates, args.seed)
    return report, EXIT_OK if report["passed"] else EXIT_INTERNAL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        report, code = run(args)
    except (InputError, ArgumentError, DegreesOfFreedomError, OSError) as exc:
        print(f"matmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatmodError as exc:
        print(f"matmod: numerical error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"matmod: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = to_json(report) + "\n" if args.output_format == "json" else to_tsv(report)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
