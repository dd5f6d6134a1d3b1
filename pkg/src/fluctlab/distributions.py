"""Two-point-measurement energy-change distributions.

The forward process measures the initial energy, applies the channel and
measures the final energy; the induced change DeltaU = E'_n - E_m carries a
delta-atom of weight p(n|m) <E_m|rho_eq|E_m> with

    p(n|m) = sum_l |<E'_n| A_l |E_m>|^2.

The backward process runs the adjoint construction from the thermal state
of the final Hamiltonian; its atoms live on the same DeltaU axis so the
two distributions align index-to-index, and its total mass is gamma, the
non-unitality correction tr[sum_l A_l A_l^dag rho'_eq].

Delta-distributions are represented as finite atom lists. Floating-point
gaps are merged deterministically: sorted values chain into one bin while
consecutive gaps stay within the bin tolerance, and each bin sits at the
mass-weighted mean of its members (which keeps first moments exact).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .channels import BackwardChannel, KrausChannel
from .errors import DimensionMismatch, SupportMismatch, ZeroMass
from .states import Hamiltonian, ThermalState

# An atom mass below ABSENT_MASS counts as zero, above PRESENT_MASS as
# definitely there; the gap between the two prevents flapping near round-off.
ABSENT_MASS = 1e-14
PRESENT_MASS = 1e-12

BIN_TOL_BASE = 1e-9


@dataclass(frozen=True)
class EnergyDistribution:
    """Discrete distribution over energy-change atoms, sorted ascending.

    Zero-mass atoms are kept: they record the transition lattice shared by
    the forward and backward constructions, where a mass vanishes on one
    side iff it vanishes on the other.
    """

    delta_u: np.ndarray
    mass: np.ndarray
    total_mass: float
    bin_tolerance: float

    @property
    def n_atoms(self) -> int:
        return int(self.delta_u.shape[0])

    def atoms(self) -> list:
        return [(float(x), float(w)) for x, w in zip(self.delta_u, self.mass)]

    def first_moment(self) -> float:
        return float((self.delta_u * self.mass).sum())


@dataclass(frozen=True)
class TransitionTable:
    """Eigenbasis transition data behind a distribution.

    probs[n, m] = p(n|m); each column sums to 1 by trace preservation.
    gaps[n, m] = E'_n - E_m. initial_pops are the thermal weights of the
    measured initial eigenstates.
    """

    probs: np.ndarray
    initial_pops: np.ndarray
    gaps: np.ndarray


def default_bin_tolerance(h_initial: Hamiltonian, h_final: Hamiltonian,
                          scale: float = 1.0) -> float:
    span = h_initial.spectral_range() + h_final.spectral_range()
    return BIN_TOL_BASE * max(1.0, span) * float(scale)


def _bin_atoms(gaps: np.ndarray, weights: np.ndarray, tol: float):
    """Merge delta-atoms whose positions chain within tol of each other."""
    order = np.argsort(gaps, kind="stable")
    g = gaps[order]
    w = weights[order]
    starts = [0]
    for i in range(1, len(g)):
        if g[i] - g[i - 1] > tol:
            starts.append(i)
    starts.append(len(g))
    positions = np.empty(len(starts) - 1)
    masses = np.empty(len(starts) - 1)
    for k in range(len(starts) - 1):
        lo, hi = starts[k], starts[k + 1]
        total = float(w[lo:hi].sum())
        masses[k] = max(total, 0.0)
        if total > 0.0:
            positions[k] = float((g[lo:hi] * w[lo:hi]).sum()) / total
        else:
            positions[k] = float(g[lo:hi].mean())
    return positions, masses


def _distribution(gaps: np.ndarray, weights: np.ndarray, tol: float) -> EnergyDistribution:
    positions, masses = _bin_atoms(gaps.ravel(), weights.ravel(), tol)
    return EnergyDistribution(
        delta_u=positions,
        mass=masses,
        total_mass=float(masses.sum()),
        bin_tolerance=tol,
    )


def transition_table(c: KrausChannel, init: ThermalState,
                     h_final: Hamiltonian) -> TransitionTable:
    """Transition probabilities and gaps between the two measured eigenbases."""
    if c.dim != init.dim or c.dim != h_final.dim:
        raise DimensionMismatch(
            f"channel dim {c.dim}, initial state dim {init.dim}, "
            f"final Hamiltonian dim {h_final.dim} must agree"
        )
    vi = init.hamiltonian.spectrum.eigenvectors
    vf = h_final.spectrum.eigenvectors
    probs = np.zeros((c.dim, c.dim))
    for a in c.kraus_ops:
        m = vf.conj().T @ a @ vi
        probs += np.abs(m) ** 2
    gaps = np.subtract.outer(h_final.energies, init.hamiltonian.energies)
    return TransitionTable(probs=probs, initial_pops=init.populations.copy(), gaps=gaps)


def forward_distribution(c: KrausChannel, init: ThermalState, h_final: Hamiltonian,
                         bin_tol_scale: float = 1.0) -> EnergyDistribution:
    """Forward two-point-measurement distribution P_F; total mass 1."""
    table = transition_table(c, init, h_final)
    weights = table.probs * table.initial_pops[np.newaxis, :]
    tol = default_bin_tolerance(init.hamiltonian, h_final, bin_tol_scale)
    return _distribution(table.gaps, weights, tol)


def backward_distribution(b: BackwardChannel, final_eq: ThermalState,
                          h_initial: Hamiltonian,
                          bin_tol_scale: float = 1.0) -> EnergyDistribution:
    """Unnormalized backward distribution; total mass equals gamma.

    Atoms are stored on the forward DeltaU axis (at E'_n - E_m, not its
    negative) so that forward and backward supports align index-to-index.
    """
    if b.dim != final_eq.dim or b.dim != h_initial.dim:
        raise DimensionMismatch(
            f"backward channel dim {b.dim}, final state dim {final_eq.dim}, "
            f"initial Hamiltonian dim {h_initial.dim} must agree"
        )
    vi = h_initial.spectrum.eigenvectors
    vf = final_eq.hamiltonian.spectrum.eigenvectors
    probs = np.zeros((b.dim, b.dim))
    for op in b.ops:
        m = vf.conj().T @ op @ vi
        probs += np.abs(m) ** 2
    weights = probs * final_eq.populations[:, np.newaxis]
    gaps = np.subtract.outer(final_eq.hamiltonian.energies, h_initial.energies)
    tol = default_bin_tolerance(h_initial, final_eq.hamiltonian, bin_tol_scale)
    return _distribution(gaps, weights, tol)


def gamma_of(c: KrausChannel, final_eq: ThermalState) -> float:
    """gamma = tr[sum_l A_l A_l^dag rho'_eq]; equals 1 for unital channels."""
    if c.dim != final_eq.dim:
        raise DimensionMismatch(
            f"channel dim {c.dim} does not match state dim {final_eq.dim}"
        )
    return float(np.trace(c.kraus_sum() @ final_eq.state).real)


def renormalize_backward(p: EnergyDistribution) -> EnergyDistribution:
    """Divide the backward masses by gamma so they sum to one."""
    if p.total_mass <= 0.0:
        raise ZeroMass("cannot renormalize a distribution with no mass")
    mass = p.mass / p.total_mass
    return EnergyDistribution(
        delta_u=p.delta_u.copy(),
        mass=mass,
        total_mass=float(mass.sum()),
        bin_tolerance=p.bin_tolerance,
    )


def exp_average(p: EnergyDistribution, coefficient: float, offset: float = 0.0) -> float:
    """sum over atoms of mass * exp(coefficient * DeltaU + offset).

    With coefficient -beta and offset beta DeltaF on P_F this evaluates the
    exponential average that equals gamma; with +beta and -beta DeltaF on
    the raw backward distribution it equals 1.
    """
    live = p.mass > 0.0
    if not live.any():
        return 0.0
    return float((p.mass[live] * np.exp(coefficient * p.delta_u[live] + offset)).sum())


def _match_atoms(pf: EnergyDistribution, pb: EnergyDistribution):
    """Pair atoms of two distributions by position within bin tolerance.

    Yields (position, forward mass or None, backward mass or None); a None
    marks an atom with no partner on the other side.
    """
    tol = max(pf.bin_tolerance, pb.bin_tolerance)
    i = j = 0
    pairs = []
    while i < pf.n_atoms and j < pb.n_atoms:
        xf, xb = pf.delta_u[i], pb.delta_u[j]
        if abs(xf - xb) <= tol:
            pairs.append((float(xf), float(pf.mass[i]), float(pb.mass[j])))
            i += 1
            j += 1
        elif xf < xb:
            pairs.append((float(xf), float(pf.mass[i]), None))
            i += 1
        else:
            pairs.append((float(xb), None, float(pb.mass[j])))
            j += 1
    for k in range(i, pf.n_atoms):
        pairs.append((float(pf.delta_u[k]), float(pf.mass[k]), None))
    for k in range(j, pb.n_atoms):
        pairs.append((float(pb.delta_u[k]), None, float(pb.mass[k])))
    return pairs


def crooks_residual(pf: EnergyDistribution, pb: EnergyDistribution,
                    beta: float, delta_f: float, x: float) -> float:
    """Max over common atoms of |log(P_F/P_B) - beta (DeltaU - DeltaF - X)|.

    pb must be the renormalized backward distribution. Atoms absent on both
    sides are skipped; an atom clearly present on one side but absent on
    the other raises SupportMismatch, which signals either a bug or a
    non-canonical backward channel.
    """
    if abs(pb.total_mass - 1.0) > 1e-6:
        raise ZeroMass(
            f"backward distribution must be renormalized, total mass {pb.total_mass!r}"
        )
    worst = 0.0
    for pos, mf, mb in _match_atoms(pf, pb):
        f = 0.0 if mf is None else mf
        b = 0.0 if mb is None else mb
        if f < ABSENT_MASS and b < ABSENT_MASS:
            continue
        if f < ABSENT_MASS or b < ABSENT_MASS:
            if max(f, b) > PRESENT_MASS:
                raise SupportMismatch(
                    f"atom at DeltaU={pos!r} has mass {max(f, b):.3e} on one side only"
                )
            continue
        residual = abs(np.log(f / b) - beta * (pos - delta_f - x))
        worst = max(worst, residual)
    return worst


def kl_divergence(pf: EnergyDistribution, pb: EnergyDistribution) -> float:
    """K[P_F || P_B] = sum P_F log(P_F/P_B) over atoms with forward mass.

    Both inputs must be normalized. Forward mass where the backward side is
    absent raises SupportMismatch (the divergence would be infinite).
    """
    total = 0.0
    for pos, mf, mb in _match_atoms(pf, pb):
        f = 0.0 if mf is None else mf
        if f < ABSENT_MASS:
            continue
        if mb is None or mb < ABSENT_MASS:
            if f > PRESENT_MASS:
                raise SupportMismatch(
                    f"forward mass {f:.3e} at DeltaU={pos!r} without backward support"
                )
            continue
        total += f * np.log(f / mb)
    return float(total)


def write_distribution_csv(p: EnergyDistribution, path) -> None:
    """Two-column CSV (delta_u, mass) at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta_u", "mass"])
        for x, w in zip(p.delta_u, p.mass):
            writer.writerow([format(float(x), ".17g"), format(float(w), ".17g")])
