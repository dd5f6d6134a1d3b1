"""CPTP channels in Kraus form.

Validation, unitality detection, application to density matrices, unitary
(Stinespring-type) dilation, the canonical backward process and a preset
catalog including non-unital cooling channels.

Conventions: the composite space is ordered system (x) ancilla, the ancilla
starts in |0>, and the Kraus operators of a dilation U are A_l = <l|U|0>
(ancilla indices). The canonical backward process reuses the forward
dilation, which makes it the adjoint channel rho -> sum_l A_l^dag rho A_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotTracePreserving,
    ParamOutOfRange,
    UnknownPreset,
)
from .linalg import as_complex_matrix

TP_TOL = 1e-10
UNITAL_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Validated trace-preserving channel rho -> sum_l A_l rho A_l^dag."""

    kraus_ops: tuple
    dim: int
    label: str = ""

    @property
    def n_kraus(self) -> int:
        return len(self.kraus_ops)

    def apply(self, rho) -> np.ndarray:
        """Channel action on a density matrix (linear, trace preserving)."""
        a = as_complex_matrix(rho)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"state shape {a.shape} does not match channel dimension {self.dim}"
            )
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k in self.kraus_ops:
            out += k @ a @ k.conj().T
        return out

    def kraus_sum(self) -> np.ndarray:
        """sum_l A_l A_l^dag, the operator whose identity-deviation measures non-unitality."""
        s = np.zeros((self.dim, self.dim), dtype=complex)
        for k in self.kraus_ops:
            s += k @ k.conj().T
        return s


@dataclass(frozen=True)
class BackwardChannel:
    """Backward (time-reversed) process rho' -> sum_l B_l^dag rho' B_l.

    Always unital as a dual map (sum_l B_l^dag B_l = identity when built
    from a trace-preserving forward channel); trace preserving exactly when
    the forward channel is unital.
    """

    ops: tuple
    trace_preserving: bool

    @property
    def dim(self) -> int:
        return int(self.ops[0].shape[0])

    @property
    def n_ops(self) -> int:
        return len(self.ops)

    def apply(self, rho_final) -> np.ndarray:
        a = as_complex_matrix(rho_final)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"state shape {a.shape} does not match channel dimension {self.dim}"
            )
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.ops:
            out += b.conj().T @ a @ b
        return out


class UnitalityCheck(NamedTuple):
    unital: bool
    deviation: float


def validate_channel(ops: Sequence, label: str = "") -> KrausChannel:
    """Check a Kraus list for trace preservation and wrap it.

    Complete positivity is automatic for any Kraus list; only
    sum_l A_l^dag A_l = identity needs verifying. Minimality is not
    required: lists longer than dim^2 are accepted as-is.
    """
    mats = [as_complex_matrix(op) for op in ops]
    if not mats:
        raise DimensionMismatch("a channel needs at least one Kraus operator")
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise DimensionMismatch(
                f"Kraus operators must all be {d}x{d}, got shape {m.shape}"
            )
    s = np.zeros((d, d), dtype=complex)
    for m in mats:
        s += m.conj().T @ m
    dev = float(np.max(np.abs(s - np.eye(d))))
    if dev > TP_TOL:
        raise NotTracePreserving(
            f"sum A^dag A deviates from identity by {dev:.3e} (tolerance {TP_TOL:.0e})"
        )
    return KrausChannel(kraus_ops=tuple(m.copy() for m in mats), dim=d, label=label)


def is_unital(c: KrausChannel) -> UnitalityCheck:
    """True iff sum_l A_l A_l^dag = identity; the deviation is always reported."""
    dev = float(np.max(np.abs(c.kraus_sum() - np.eye(c.dim))))
    return UnitalityCheck(unital=dev < UNITAL_TOL, deviation=dev)


@dataclass(frozen=True)
class Dilation:
    """Unitary on system (x) ancilla reproducing the channel from ancilla |0>."""

    unitary: np.ndarray
    d_sys: int
    d_anc: int

    def recovered_kraus(self) -> tuple:
        """Read back A_l = <l|U|0> from the dilation unitary."""
        u = self.unitary.reshape(self.d_sys, self.d_anc, self.d_sys, self.d_anc)
        return tuple(u[:, ell, :, 0].copy() for ell in range(self.d_anc))


def _complete_isometry(w: np.ndarray) -> np.ndarray:
    """Extend orthonormal columns w (D x k) to a full D x D unitary.

    Gram-Schmidt over the standard basis, pivoting on the candidate with
    the largest remaining norm, with one re-orthogonalization pass per
    accepted column for stability near degenerate Kraus lists.
    """
    big_d, k = w.shape
    cols = np.zeros((big_d, big_d), dtype=complex)
    cols[:, :k] = w
    resid = np.eye(big_d, dtype=complex)
    resid -= w @ (w.conj().T @ resid)
    resid -= w @ (w.conj().T @ resid)
    avail = np.ones(big_d, dtype=bool)
    for t in range(k, big_d):
        norms = np.linalg.norm(resid, axis=0)
        norms[~avail] = -1.0
        pick = int(np.argmax(norms))
        q = resid[:, pick] / norms[pick]
        q = q - cols[:, :t] @ (cols[:, :t].conj().T @ q)
        q /= np.linalg.norm(q)
        cols[:, t] = q
        avail[pick] = False
        resid -= np.outer(q, q.conj() @ resid)
    return cols


def dilate(c: KrausChannel) -> Dilation:
    """Unitary dilation of the channel with the ancilla starting in |0>.

    The isometry column block sends |psi>(x)|0> to sum_l (A_l|psi>)(x)|l>
    and is completed to a full unitary by orthonormal extension; the
    remaining columns (ancilla inputs other than |0>) are arbitrary and
    filled in ascending column order.
    """
    d, d_anc = c.dim, c.n_kraus
    big_d = d * d_anc
    w = np.zeros((big_d, d), dtype=complex)
    w3 = w.reshape(d, d_anc, d)
    for ell, a in enumerate(c.kraus_ops):
        w3[:, ell, :] = a
    anchors = [j * d_anc for j in range(d)]
    u = np.zeros((big_d, big_d), dtype=complex)
    u[:, anchors] = w
    if big_d > d:
        extra = _complete_isometry(w)[:, d:]
        others = [j for j in range(big_d) if j % d_anc != 0]
        u[:, others] = extra
    return Dilation(unitary=u, d_sys=d, d_anc=d_anc)


def backward_of(c: KrausChannel) -> BackwardChannel:
    """Canonical backward process of a channel.

    Reusing the forward dilation unitary yields B_l = A_l, i.e. the adjoint
    (dual) channel rho' -> sum_l A_l^dag rho' A_l. This choice needs no
    extra data and meets the consistency requirement
    tr[sum_l B_l B_l^dag rho'_eq] = gamma identically. Externally supplied
    op lists can be wrapped in BackwardChannel directly for experimentation.
    """
    flag = is_unital(c).unital
    return BackwardChannel(ops=tuple(k.copy() for k in c.kraus_ops), trace_preserving=flag)


# ---------------------------------------------------------------------------
# Preset catalog
# ---------------------------------------------------------------------------

def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary via QR of a seeded complex Gaussian matrix.

    The R diagonal is phase-fixed, which makes the distribution exactly
    Haar and the draw reproducible for a given seed.
    """
    rng = np.random.default_rng(int(seed))
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return q * (diag / np.abs(diag))


def random_channel(dim: int, n_kraus: int, seed: int) -> KrausChannel:
    """Seeded random channel from the <l|U|0> blocks of a Haar unitary.

    Trace preservation is automatic because the blocks are the orthonormal
    columns of a unitary on dim * n_kraus dimensions.
    """
    if n_kraus < 1:
        raise ParamOutOfRange(f"n_kraus must be >= 1, got {n_kraus}")
    u = haar_unitary(dim * n_kraus, seed)
    u4 = u.reshape(dim, n_kraus, dim, n_kraus)
    ops = [u4[:, ell, :, 0] for ell in range(n_kraus)]
    return validate_channel(ops, label=f"random(seed={seed}, n_kraus={n_kraus})")


def unitary_mixture(dim: int, n_ops: int, seed: int) -> KrausChannel:
    """Random mixture of Haar unitaries: sqrt(w_k) U_k, always unital."""
    if n_ops < 1:
        raise ParamOutOfRange(f"n_ops must be >= 1, got {n_ops}")
    rng = np.random.default_rng(int(seed))
    weights = rng.random(n_ops) + 0.1
    weights /= weights.sum()
    sub_seeds = rng.integers(0, 2**63 - 1, size=n_ops)
    ops = [np.sqrt(w) * haar_unitary(dim, s) for w, s in zip(weights, sub_seeds)]
    return validate_channel(ops, label=f"unitary_mixture(seed={seed}, n_ops={n_ops})")


def _check_probability(p: float, name: str) -> float:
    p = float(p)
    if not np.isfinite(p) or not 0.0 <= p <= 1.0:
        raise ParamOutOfRange(f"{name} must lie in [0, 1], got {p!r}")
    return p


def _clock_matrix(dim: int) -> np.ndarray:
    phases = np.exp(2j * np.pi * np.arange(dim) / dim)
    return np.diag(phases)


def _shift_matrix(dim: int) -> np.ndarray:
    x = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        x[(k + 1) % dim, k] = 1.0
    return x


def _need_params(params: Sequence[float], n: int, name: str) -> Sequence[float]:
    if len(params) != n:
        raise ParamOutOfRange(
            f"preset '{name}' takes {n} parameter(s), got {len(params)}"
        )
    return params


def preset(name: str, params: Sequence[float] = (), dim: int = 2) -> KrausChannel:
    """Channel catalog.

    identity                 no params
    unitary                  (seed,)           seeded Haar unitary
    dephasing                (p,)              off-diagonal decay, unital
    depolarizing             (p,)              rho -> (1-p) rho + p I/d, unital
    amplitude_damping        (p,)              decay towards the ground state
    thermal_attenuator       (p, nbar)         qubit damping towards a thermal
                                               environment with mean occupation
                                               nbar (nbar=0 is pure damping)
    random                   (seed, n_kraus)   Haar dilation blocks

    Probabilities must lie in [0, 1]; nbar must be >= 0. Seeded presets are
    bit-reproducible for a fixed seed on a given build.
    """
    if dim < 1:
        raise ParamOutOfRange(f"dimension must be >= 1, got {dim}")
    eye = np.eye(dim, dtype=complex)

    if name == "identity":
        _need_params(params, 0, name)
        return validate_channel([eye], label="identity")

    if name == "unitary":
        _need_params(params, 1, name)
        return validate_channel(
            [haar_unitary(dim, int(params[0]))], label=f"unitary(seed={int(params[0])})"
        )

    if name == "dephasing":
        (p,) = _need_params(params, 1, name)
        p = _check_probability(p, "p")
        if dim < 2:
            raise ParamOutOfRange("dephasing needs dim >= 2")
        z = _clock_matrix(dim)
        ops = [np.sqrt(1.0 - p) * eye]
        ops += [np.sqrt(p / (dim - 1)) * np.linalg.matrix_power(z, j)
                for j in range(1, dim)]
        return validate_channel(ops, label=f"dephasing(p={p})")

    if name == "depolarizing":
        (p,) = _need_params(params, 1, name)
        p = _check_probability(p, "p")
        x, z = _shift_matrix(dim), _clock_matrix(dim)
        ops = [np.sqrt(1.0 - p + p / dim**2) * eye]
        for a in range(dim):
            for b in range(dim):
                if a == 0 and b == 0:
                    continue
                w = np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
                ops.append(np.sqrt(p) / dim * w)
        return validate_channel(ops, label=f"depolarizing(p={p})")

    if name == "amplitude_damping":
        (p,) = _need_params(params, 1, name)
        p = _check_probability(p, "p")
        a0 = eye.copy()
        a0[1:, 1:] *= np.sqrt(1.0 - p)
        ops = [a0]
        for k in range(1, dim):
            ak = np.zeros((dim, dim), dtype=complex)
            ak[0, k] = np.sqrt(p)
            ops.append(ak)
        return validate_channel(ops, label=f"amplitude_damping(p={p})")

    if name == "thermal_attenuator":
        p, nbar = _need_params(params, 2, name)
        p = _check_probability(p, "p")
        nbar = float(nbar)
        if not np.isfinite(nbar) or nbar < 0.0:
            raise ParamOutOfRange(f"nbar must be >= 0, got {nbar!r}")
        if dim != 2:
            raise DimensionMismatch("thermal_attenuator is a qubit preset (dim=2)")
        # excited-level occupation of the attached two-level environment
        q = nbar / (2.0 * nbar + 1.0)
        down = np.sqrt(1.0 - q)
        up = np.sqrt(q)
        ops = [
            down * np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex),
            down * np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex),
            up * np.array([[np.sqrt(1.0 - p), 0.0], [0.0, 1.0]], dtype=complex),
            up * np.array([[0.0, 0.0], [np.sqrt(p), 0.0]], dtype=complex),
        ]
        return validate_channel(ops, label=f"thermal_attenuator(p={p}, nbar={nbar})")

    if name == "random":
        seed, n_kraus = _need_params(params, 2, name)
        return random_channel(dim, int(n_kraus), int(seed))

    raise UnknownPreset(f"unknown channel preset '{name}'")
