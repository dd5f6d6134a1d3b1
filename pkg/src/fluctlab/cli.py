"""Command-line front end: run single scenarios, parameter sweeps and
randomized batch campaigns.

Exit codes: 0 when every identity residual stays below the threshold,
2 when a residual (or a unital-batch gamma check) violates it, 1 on any
input or validation error. Outputs are byte-deterministic for a given
scenario file and seed: floats are printed at 17 significant digits and
row order is fixed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .channels import is_unital
from .distributions import write_distribution_csv
from .errors import FluctLabError, ScenarioError, UnknownParam
from .scenario import (
    BatchSpec,
    Scenario,
    batch_from_dict,
    parse_channel,
    random_scenario,
    scenario_from_dict,
)
from .thermo import (
    FluctuationReport,
    fmt,
    report_csv_header,
    report_csv_row,
    report_to_json,
    scenario_artifacts,
)

SWEEPABLE_PRESETS = ("dephasing", "depolarizing", "amplitude_damping", "thermal_attenuator")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors: exit 1, keeping 2 for residual violations
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc


def _threshold(args, scenario: Scenario | None = None) -> float:
    if args.tol is not None:
        return float(args.tol)
    if scenario is not None:
        return scenario.identity_rtol
    return 1e-8


def _summary_text(scenario: Scenario, report: FluctuationReport,
                  threshold: float) -> str:
    check = is_unital(scenario.channel)
    lines = [
        f"scenario: {scenario.name}",
        f"dim: {scenario.dim}",
        f"beta: {fmt(scenario.beta)}",
        f"channel: {scenario.channel.label or 'explicit'} "
        f"({scenario.channel.n_kraus} Kraus ops)",
        f"unital: {str(check.unital).lower()} (deviation {fmt(check.deviation)})",
        "",
    ]
    for name in ("delta_u", "delta_u_moment", "delta_f", "gamma", "x", "kl",
                 "excess_energy", "delta_s", "delta_s_v", "s_r_final"):
        lines.append(f"{name:24s} = {fmt(getattr(report, name))}")
    lines.append("")
    lines.append(f"residuals (threshold {fmt(threshold)}):")
    for name in sorted(report.residuals):
        value = report.residuals[name]
        verdict = "PASS" if value < threshold else "FAIL"
        lines.append(f"  {name:24s} {fmt(value):26s} {verdict}")
    overall = "PASS" if report.max_residual() < threshold else "FAIL"
    lines.append(f"overall: {overall}")
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    doc = _load_json(args.scenario_file)
    scenario = scenario_from_dict(doc)
    if args.seed is not None:
        doc["seed"] = int(args.seed)
        scenario = scenario_from_dict(doc)
    threshold = _threshold(args, scenario)

    artifacts = scenario_artifacts(scenario)
    report = artifacts.report

    os.makedirs(args.out, exist_ok=True)
    header = {"name": scenario.name, "dim": scenario.dim,
              "beta": float(scenario.beta), "seed": scenario.seed,
              "unital": bool(is_unital(scenario.channel).unital)}
    with open(os.path.join(args.out, "report.json"), "w", newline="") as fh:
        fh.write(report_to_json(report, header=header))
    write_distribution_csv(artifacts.forward, os.path.join(args.out, "pf.csv"))
    write_distribution_csv(artifacts.backward, os.path.join(args.out, "pb.csv"))
    summary = _summary_text(scenario, report, threshold)
    with open(os.path.join(args.out, "summary.txt"), "w", newline="") as fh:
        fh.write(summary)

    if not args.quiet:
        sys.stdout.write(summary)
    return 0 if report.max_residual() < threshold else 2


def _sweep_scenarios(base: Scenario, param: str, values: list) -> list:
    if not values:
        raise UnknownParam("sweep needs a non-empty list of values")
    out = []
    if param == "beta":
        for v in values:
            if not np.isfinite(v) or v <= 0:
                raise UnknownParam(f"beta sweep values must be positive, got {v!r}")
            out.append(base.with_beta(v))
        return out
    if param == "channel.p":
        spec = base.channel_spec
        if not spec or spec.get("preset") not in SWEEPABLE_PRESETS:
            raise UnknownParam(
                "channel.p sweeps need a preset channel with a leading "
                f"probability parameter (one of {', '.join(SWEEPABLE_PRESETS)})"
            )
        for v in values:
            new_spec = dict(spec)
            params = list(spec.get("params", []))
            if params:
                params[0] = float(v)
            else:
                params = [float(v)]
            new_spec["params"] = params
            channel = parse_channel(new_spec, base.dim, base.seed)
            out.append(Scenario(
                name=base.name, dim=base.dim, beta=base.beta,
                h_initial=base.h_initial, h_final=base.h_final,
                channel=channel, seed=base.seed,
                identity_rtol=base.identity_rtol,
                bin_tol_scale=base.bin_tol_scale, channel_spec=new_spec,
            ))
        return out
    raise UnknownParam(f"unknown sweep parameter {param!r} (use 'beta' or 'channel.p')")


def cmd_sweep(args) -> int:
    doc = _load_json(args.scenario_file)
    base = scenario_from_dict(doc)
    if args.seed is not None:
        doc["seed"] = int(args.seed)
        base = scenario_from_dict(doc)
    threshold = _threshold(args, base)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UnknownParam(f"bad sweep values {args.values!r}: {exc}") from exc
    scenarios = _sweep_scenarios(base, args.param, values)

    os.makedirs(args.out, exist_ok=True)
    worst = 0.0
    path = os.path.join(args.out, "sweep.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(report_csv_header(extra=("param", "value")))
        for value, scenario in zip(values, scenarios):
            report = scenario_artifacts(scenario).report
            worst = max(worst, report.max_residual())
            writer.writerow(report_csv_row(report, extra=(args.param, fmt(value))))
    if not args.quiet:
        print(f"sweep: {len(values)} runs of '{args.param}' -> {path}")
        print(f"max residual: {fmt(worst)}")
    return 0 if worst < threshold else 2


def cmd_batch(args) -> int:
    doc = _load_json(args.spec_file)
    spec = batch_from_dict(doc)
    if args.seed is not None:
        spec = BatchSpec(count=spec.count, dim_range=spec.dim_range,
                         n_kraus_range=spec.n_kraus_range, beta_set=spec.beta_set,
                         seed=int(args.seed), unital_only=spec.unital_only)
    threshold = _threshold(args)

    rng = np.random.default_rng(spec.seed)
    seeds = [int(s) for s in rng.integers(0, 2**63 - 1, size=spec.count)]

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "batch.csv")
    worst = 0.0
    failures = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["seed", "dim", "unital", "gamma", "x", "kl",
                         "delta_u", "delta_s", "max_residual"])
        for seed in seeds:
            scenario = random_scenario(
                seed, dim_range=spec.dim_range, n_kraus_range=spec.n_kraus_range,
                beta_set=spec.beta_set, unital_only=spec.unital_only,
            )
            try:
                report = scenario_artifacts(scenario).report
            except FluctLabError as exc:
                raise ScenarioError(
                    f"scenario seed={seed} failed: {exc}"
                ) from exc
            unital = is_unital(scenario.channel).unital
            max_res = report.max_residual()
            if spec.unital_only and abs(report.gamma - 1.0) > 1e-10:
                failures += 1
            if max_res >= threshold:
                failures += 1
            worst = max(worst, max_res)
            writer.writerow([
                str(seed), str(scenario.dim), str(unital).lower(),
                fmt(report.gamma), fmt(report.x), fmt(report.kl),
                fmt(report.delta_u), fmt(report.delta_s), fmt(max_res),
            ])
    aggregate = (f"scenarios: {spec.count}\n"
                 f"max_residual: {fmt(worst)}\n"
                 f"threshold: {fmt(threshold)}\n"
                 f"result: {'PASS' if failures == 0 else 'FAIL'}\n")
    with open(os.path.join(args.out, "batch_summary.txt"), "w", newline="") as fh:
        fh.write(aggregate)
    if not args.quiet:
        sys.stdout.write(aggregate)
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fluctlab",
        description="Energy-fluctuation identities of finite-dimensional "
                    "quantum channels: compute two-point-measurement "
                    "distributions and verify every identity to tolerance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--tol", type=float, default=None,
                       help="residual threshold (default 1e-8 or scenario override)")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--quiet", action="store_true", help="suppress stdout")

    p_run = sub.add_parser("run", help="evaluate one scenario file")
    p_run.add_argument("scenario_file")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter of a scenario")
    p_sweep.add_argument("scenario_file")
    p_sweep.add_argument("--param", required=True,
                         help="parameter to sweep: beta or channel.p")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list of values")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_batch = sub.add_parser("batch", help="run a randomized scenario campaign")
    p_batch.add_argument("spec_file")
    common(p_batch)
    p_batch.set_defaults(func=cmd_batch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FluctLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
