"""Thermodynamic bookkeeping of one open-process scenario.

Assembles the internal-energy change (trace formula and first moment), the
free-energy difference, the non-unitality correction gamma and its energy
counterpart X = -log(gamma)/beta, the forward/backward KL divergence K,
the excess energy K/beta + X, the entropy change K + beta X and the von
Neumann entropy change, together with the residual of every identity that
ties them together. Residuals are reported, never silently asserted, so a
report doubles as a regression check.

Dissipated work and heat are deliberately not reported as separate
numbers: for a map alone only their sum is well defined (unital channels
exchange heat while X stays zero), so the pair (K, X) and the combined
excess energy are what the report carries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import KrausChannel, backward_of
from .distributions import (
    EnergyDistribution,
    backward_distribution,
    crooks_residual,
    exp_average,
    forward_distribution,
    gamma_of,
    kl_divergence,
    renormalize_backward,
)
from .errors import DimensionMismatch
from .scenario import Scenario
from .states import (
    Hamiltonian,
    ThermalState,
    gibbs_state,
    nonequilibrium_entropy,
    von_neumann_entropy,
)

REPORT_FIELDS = (
    "delta_u",
    "delta_u_moment",
    "delta_f",
    "gamma",
    "x",
    "kl",
    "excess_energy",
    "delta_s",
    "delta_s_v",
    "s_r_final",
)


@dataclass(frozen=True)
class FluctuationReport:
    """All derived quantities of a scenario plus identity residuals (nats/energy units)."""

    delta_u: float
    delta_u_moment: float
    delta_f: float
    gamma: float
    x: float
    kl: float
    excess_energy: float
    delta_s: float
    delta_s_v: float
    s_r_final: float
    residuals: dict

    def max_residual(self) -> float:
        return max(self.residuals.values())

    def as_dict(self) -> dict:
        out = {name: getattr(self, name) for name in REPORT_FIELDS}
        out["residuals"] = dict(self.residuals)
        return out


def internal_energy_change(c: KrausChannel, init: ThermalState,
                           h_final: Hamiltonian) -> float:
    """DeltaU = tr(H_f rho') - tr(H_i rho_eq); matches the P_F first moment."""
    if c.dim != init.dim or c.dim != h_final.dim:
        raise DimensionMismatch(
            f"channel dim {c.dim}, state dim {init.dim}, final Hamiltonian dim "
            f"{h_final.dim} must agree"
        )
    rho_out = c.apply(init.state)
    return float(np.trace(h_final.matrix @ rho_out).real
                 - np.trace(init.hamiltonian.matrix @ init.state).real)


def excess_energy(kl: float, x: float, beta: float) -> float:
    """K/beta + X, the part of DeltaU beyond the free-energy difference.

    Always non-negative for unital dynamics (X = 0 there); non-unital
    channels can push it negative, cooling being the physical example.
    """
    return kl / beta + x


def entropy_change(kl: float, x: float, beta: float) -> float:
    """DeltaS = K + beta X, the microscopic entropy-change law."""
    return kl + beta * x


def von_neumann_change(c: KrausChannel, init: ThermalState, h_final: Hamiltonian,
                       final_eq: ThermalState) -> float:
    """Direct DeltaS_V = S_V(rho') - S_V(rho_eq).

    The companion identity DeltaS_V = K + beta X - S_R(rho' || rho'_eq) is
    checked as a residual by build_report; this direct spectral computation
    is the ground truth.
    """
    if final_eq.dim != c.dim:
        raise DimensionMismatch(
            f"final equilibrium dim {final_eq.dim} does not match channel dim {c.dim}"
        )
    rho_out = c.apply(init.state)
    return von_neumann_entropy(rho_out) - von_neumann_entropy(init.state)


class ScenarioArtifacts(NamedTuple):
    report: FluctuationReport
    forward: EnergyDistribution
    backward_raw: EnergyDistribution
    backward: EnergyDistribution


def scenario_artifacts(scenario: Scenario) -> ScenarioArtifacts:
    """Report plus the three distributions it was computed from.

    Residual keys: forward_norm, backward_mass_vs_gamma, jarzynski_forward,
    jarzynski_backward, crooks_max, eq11 (energy decomposition), eq16
    (entropy law against the independently computed beta (DeltaU - DeltaF)),
    eq17 (von Neumann identity against the direct spectral computation),
    helmholtz (DeltaU - DeltaS/beta - DeltaF with the entropy change taken
    along the state route) and moment_vs_trace.
    """
    beta = scenario.beta
    init_eq = gibbs_state(scenario.h_initial, beta)
    final_eq = gibbs_state(scenario.h_final, beta)
    channel = scenario.channel

    pf = forward_distribution(channel, init_eq, scenario.h_final,
                              bin_tol_scale=scenario.bin_tol_scale)
    bwd = backward_of(channel)
    pb_raw = backward_distribution(bwd, final_eq, scenario.h_initial,
                                   bin_tol_scale=scenario.bin_tol_scale)
    pb = renormalize_backward(pb_raw)

    gamma = gamma_of(channel, final_eq)
    x = float(-np.log(gamma) / beta)
    delta_f = final_eq.free_energy - init_eq.free_energy
    kl = kl_divergence(pf, pb)

    du_trace = internal_energy_change(channel, init_eq, scenario.h_final)
    du_moment = pf.first_moment()

    rho_out = channel.apply(init_eq.state)
    s_v_out = von_neumann_entropy(rho_out)
    s_v_in = von_neumann_entropy(init_eq.state)
    # Stable at any beta: the thermal log-populations are exact, unlike a
    # generic relative-entropy call whose support threshold can clip them.
    s_r_final = nonequilibrium_entropy(rho_out, final_eq) - s_v_out
    ds_state = (nonequilibrium_entropy(rho_out, final_eq)
                - nonequilibrium_entropy(init_eq.state, init_eq))

    ds = entropy_change(kl, x, beta)
    dsv = s_v_out - s_v_in

    residuals = {
        "forward_norm": abs(pf.total_mass - 1.0),
        "backward_mass_vs_gamma": abs(pb_raw.total_mass - gamma),
        "jarzynski_forward": abs(exp_average(pf, -beta, beta * delta_f) - gamma),
        "jarzynski_backward": abs(exp_average(pb_raw, beta, -beta * delta_f) - 1.0),
        "crooks_max": crooks_residual(pf, pb, beta, delta_f, x),
        "eq11": abs(du_trace - kl / beta - x - delta_f),
        "eq16": abs(beta * (du_trace - delta_f) - ds),
        "eq17": abs(dsv - (kl + beta * x - s_r_final)),
        "helmholtz": abs(du_trace - ds_state / beta - delta_f),
        "moment_vs_trace": abs(du_trace - du_moment),
    }
    residuals = {k: float(v) for k, v in residuals.items()}
    report = FluctuationReport(
        delta_u=du_trace,
        delta_u_moment=du_moment,
        delta_f=delta_f,
        gamma=gamma,
        x=x,
        kl=kl,
        excess_energy=excess_energy(kl, x, beta),
        delta_s=ds,
        delta_s_v=dsv,
        s_r_final=s_r_final,
        residuals=residuals,
    )
    return ScenarioArtifacts(report=report, forward=pf, backward_raw=pb_raw, backward=pb)


def build_report(scenario: Scenario) -> FluctuationReport:
    """Compute every report quantity and identity residual for a scenario."""
    return scenario_artifacts(scenario).report


# ---------------------------------------------------------------------------
# Serialization (17 significant digits, round-trip exact for doubles)
# ---------------------------------------------------------------------------

def fmt(value: float) -> str:
    return format(float(value), ".17g")


def report_to_json(report: FluctuationReport, header: dict | None = None) -> str:
    """Flat JSON document: header strings/ints, report fields, residual_* keys."""
    lines = ["{"]
    items = []
    for key, value in (header or {}).items():
        items.append(f'  {json.dumps(key)}: {json.dumps(value)}')
    for name in REPORT_FIELDS:
        items.append(f'  "{name}": {fmt(getattr(report, name))}')
    for name in sorted(report.residuals):
        items.append(f'  "residual_{name}": {fmt(report.residuals[name])}')
    lines.append(",\n".join(items))
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_csv_header(extra: tuple = ()) -> list:
    names = list(extra) + list(REPORT_FIELDS)
    names += ["residual_" + k for k in sorted(_RESIDUAL_KEYS)]
    return names


def report_csv_row(report: FluctuationReport, extra: tuple = ()) -> list:
    row = [str(v) for v in extra]
    row += [fmt(getattr(report, name)) for name in REPORT_FIELDS]
    row += [fmt(report.residuals[k]) for k in sorted(_RESIDUAL_KEYS)]
    return row


_RESIDUAL_KEYS = (
    "backward_mass_vs_gamma",
    "crooks_max",
    "eq11",
    "eq16",
    "eq17",
    "forward_norm",
    "helmholtz",
    "jarzynski_backward",
    "jarzynski_forward",
    "moment_vs_trace",
)
