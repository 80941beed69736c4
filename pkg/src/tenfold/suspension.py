"""Gapped interpolations, their symmetric extension, and the pump invariant.

An interpolation ``h(k, theta)`` runs from a flattened Hamiltonian ``Q_1(k)``
at ``theta = 0`` to a reference ``Q_ref`` at ``theta = pi`` along the
flattened straight line.  The half family is closed into a loop over
``theta in [-pi, pi)`` with the symmetry partner

    h(k, theta) = -[C^dagger h(-k, -theta) C]^T      (particle-hole)
    h(k, theta) =  [T^dagger h(-k, -theta) T]^T      (time reversal)

and the Chern number over the ``(k, theta)`` torus is the pumped invariant.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import bott
from .errors import EndpointAsymmetry, GapClosed, Obstruction
from .invariants import InvariantResult, lattice_chern
from .model import DEFAULT_GAP_TOL, FlattenedSample, KGrid, flatten_matrices

DEFAULT_STEPS = 32
JUMP_TOL = 1.0
SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class InterpolationFamily:
    """Samples ``values[i, j] = h(k_i, thetas[j])`` of an interpolation.

    Half families cover ``theta in [0, pi]`` (both ends included); full
    families cover ``[-pi, pi)`` and are periodic in ``theta``.
    """

    grid: KGrid
    thetas: np.ndarray
    values: np.ndarray = field(repr=False)
    filled: int
    min_gap: float
    full: bool = False
    sym_kind: str | None = None
    sym_unitary: np.ndarray | None = field(default=None, repr=False)
    extension_residual: float | None = None
    form_discrepancy: float | None = None

    @property
    def steps(self):
        return len(self.thetas) - 1 if not self.full else len(self.thetas) // 2


def _as_stack(ref, base):
    if isinstance(ref, FlattenedSample):
        if ref.grid != base.grid:
            raise ValueError("reference sample lives on a different grid")
        return ref.Q
    ref = np.asarray(ref, dtype=complex)
    if ref.shape != base.Q.shape[-2:]:
        raise ValueError(f"reference has shape {ref.shape}, bands are {base.bands}")
    if np.max(np.abs(ref - ref.conj().T)) > 1e-12:
        raise ValueError("reference is not Hermitian")
    if np.max(np.abs(ref @ ref - np.eye(len(ref)))) > 1e-10:
        raise ValueError("reference must be flat (Q_ref^2 = I)")
    return np.broadcast_to(ref, base.Q.shape)


def _largest_jump(values):
    """Max-norm difference between grid neighbours along k and theta."""
    dk = np.abs(values - np.roll(values, -1, axis=0)).max(axis=(-2, -1))
    dt = np.abs(values[:, 1:] - values[:, :-1]).max(axis=(-2, -1))
    return dk, dt


def build_interpolation(base, ref, theta_steps=DEFAULT_STEPS,
                        gap_tol=DEFAULT_GAP_TOL, jump_tol=JUMP_TOL):
    """Half family ``h(k, t pi) = flatten((1-t) Q_1(k) + t Q_ref)``, ``t in [0, 1]``.

    ``ref`` is a constant flat matrix or a flattened sample on the same grid.

    A gap closing between samples is caught by continuity: neighbouring
    flattened samples further apart than ``jump_tol`` (max norm) are treated
    as straddling a zero of the spectrum.

    Raises
    ------
    Obstruction
        If the straight path cannot be flattened somewhere on the grid.
    """
    Q1 = base.Q
    Qr = _as_stack(ref, base)
    t = np.linspace(0.0, 1.0, theta_steps + 1)
    thetas = np.pi * t
    A = (1 - t)[None, :, None, None] * Q1[:, None] + t[None, :, None, None] * Qr[:, None]
    E = np.linalg.eigvalsh(A)
    absE = np.abs(E).min(axis=-1)
    pts = base.grid.points
    i, j = np.unravel_index(int(np.argmin(absE)), absE.shape)
    if absE[i, j] <= gap_tol:
        raise Obstruction(pts[i], thetas[j], absE[i, j])
    neg = (E < 0).sum(axis=-1)
    if np.any(neg != base.filled):
        i, j = np.argwhere(neg != base.filled)[0]
        raise Obstruction(pts[i], thetas[j], absE[i, j])
    try:
        values, _, filled, gap = flatten_matrices(A, gap_tol)
    except GapClosed as exc:  # pragma: no cover - caught above
        raise Obstruction(pts[0], 0.0, exc.gap) from exc
    dk, dt = _largest_jump(values)
    for jumps, along_k in ((dk, True), (dt, False)):
        if jumps.max() > jump_tol:
            i, j = np.unravel_index(int(np.argmax(jumps)), jumps.shape)
            i2 = (i + 1) % len(pts) if along_k else i
            j2 = j if along_k else j + 1
            raise Obstruction(pts[i], thetas[j], min(absE[i, j], absE[i2, j2]))
    return InterpolationFamily(base.grid, thetas, values, filled, float(absE.min()))


def _partner(h, U, kind):
    """Printed partner map applied slice-wise: ``sigma [U^dagger h U]^T``."""
    sigma = 1.0 if kind == "T" else -1.0
    return sigma * np.swapaxes(U.conj().T @ h @ U, -1, -2)


def _conjugation_partner(h, U, kind):
    sigma = 1.0 if kind == "T" else -1.0
    return sigma * (U @ h.conj() @ U.conj().T)


def endpoint_residual(values_at_theta, grid, U, kind):
    """How far a fixed-theta slice (theta = 0 or pi) is from its own partner."""
    return float(np.max(np.abs(
        values_at_theta - _partner(values_at_theta[grid.minus_index()], U, kind))))


def partner_residual(family, U=None, kind=None):
    """``max |h(k, theta) - partner(h)(k, theta)|`` over a full family."""
    U = family.sym_unitary if U is None else np.asarray(U, dtype=complex)
    kind = family.sym_kind if kind is None else kind
    if not family.full:
        raise ValueError("partner residual needs a full family")
    n = len(family.thetas)
    S = n // 2
    # theta index j <-> theta = pi (j - S)/S; -theta -> index (2S - j) mod 2S
    minus_theta = (2 * S - np.arange(n)) % n
    mirrored = family.values[family.grid.minus_index()][:, minus_theta]
    return float(np.max(np.abs(family.values - _partner(mirrored, U, kind))))


def extend_symmetric(half, kind, U, tol=SYMMETRY_TOL):
    """Close a half family into a loop over ``theta in [-pi, pi)``.

    The lower half is filled from the upper one by the partner formula.  Both
    endpoints must already be symmetric, otherwise the loop would be
    discontinuous there.
    """
    if kind not in ("T", "C"):
        raise ValueError(f"kind must be 'T' or 'C', got {kind!r}")
    if half.full:
        raise ValueError("family is already extended")
    U = np.asarray(U, dtype=complex)
    S = len(half.thetas) - 1
    grid = half.grid
    for j, name in ((0, "0"), (S, "pi")):
        r = endpoint_residual(half.values[:, j], grid, U, kind)
        if r >= tol:
            raise EndpointAsymmetry(name, r)
    # theta_j for j = -S..-1 reads theta_{-j} = S..1 of the half family
    upper = half.values[grid.minus_index()][:, S:0:-1]
    lower = _partner(upper, U, kind)
    values = np.concatenate([lower, half.values[:, :S]], axis=1)
    thetas = np.pi * np.arange(-S, S) / S
    full = replace(half, thetas=thetas, values=values, full=True,
                   sym_kind=kind, sym_unitary=U)
    # the stored theta = pi slice is dropped; continuity across it is part
    # of the residual
    wrap = float(np.max(np.abs(values[:, 0] - half.values[:, S])))
    res = max(partner_residual(full), wrap)
    mirrored = values[grid.minus_index()]
    disc = float(np.max(np.abs(_partner(mirrored, U, kind)
                               - _conjugation_partner(mirrored, U, kind))))
    return replace(full, extension_residual=res, form_discrepancy=disc)


def pump_family_from_model(model, m=None, theta_points=61, gap_tol=DEFAULT_GAP_TOL):
    """Read a 2D model as a loop of 1D Hamiltonians with ``theta := k_y``."""
    if model.dim != 2:
        raise ValueError("pump family needs a 2D model")
    m = m if m is not None else theta_points
    grid = KGrid(1, m)
    thetas = -np.pi + 2 * np.pi * np.arange(theta_points) / theta_points
    kk, tt = np.meshgrid(grid.axis, thetas, indexing="ij")
    H = model.evaluate_many(np.stack([kk.ravel(), tt.ravel()], axis=-1))
    values, _, filled, gap = flatten_matrices(H, gap_tol)
    shape = (m, theta_points) + values.shape[-2:]
    return InterpolationFamily(grid, thetas, values.reshape(shape), filled, gap, full=True)


def family_from_loop(loop, m, theta_points, gap_tol=DEFAULT_GAP_TOL):
    """Full family from a callable ``theta -> BlochModel`` (1D)."""
    grid = KGrid(1, m)
    thetas = -np.pi + 2 * np.pi * np.arange(theta_points) / theta_points
    H = np.stack([loop(th).evaluate_many(grid.points) for th in thetas], axis=1)
    values, _, filled, gap = flatten_matrices(H, gap_tol)
    return InterpolationFamily(grid, thetas, values.reshape(H.shape), filled, gap, full=True)


def reverse_theta(family):
    """The family reparametrised by ``theta -> -theta``."""
    n = len(family.thetas)
    # theta_j = -pi + 2 pi j/n, so -theta_j = theta_{(n - j) mod n}
    idx = (n - np.arange(n)) % n
    if not np.allclose(np.exp(1j * family.thetas[idx]), np.exp(-1j * family.thetas)):
        raise ValueError("theta grid is not symmetric under negation")
    return replace(family, values=family.values[:, idx])


def pump_chern(family, gap_tol=DEFAULT_GAP_TOL):
    """Chern number of a full family over the ``(k, theta)`` torus, k first."""
    if not family.full:
        raise ValueError("pump invariant needs a closed (full) family")
    if family.grid.dim != 1:
        raise ValueError("pump invariant is implemented for 1D bases only")
    shape = family.values.shape
    flat = family.values.reshape(-1, *shape[-2:])
    _, frames, _, _ = flatten_matrices(flat, gap_tol)
    frames = frames.reshape(shape[0], shape[1], *frames.shape[-2:])
    raw = lattice_chern(frames)
    value = int(np.rint(raw))
    return InvariantResult("chern", value, abs(raw - value))


@dataclass(frozen=True)
class SuspensionReport:
    family: str
    s: int
    d: int
    base_group: bott.InvariantGroup
    pump_group: bott.InvariantGroup
    looped_group: bott.InvariantGroup

    @property
    def consistent(self):
        return self.base_group == self.looped_group


def suspension_consistency(az, d):
    """Check that loops one dimension up classify the base at dimension ``d``.

    ``base_group`` is the table entry at ``(s, d)``; ``pump_group`` the entry
    at ``(s, d+1)`` where the pumped families live; ``looped_group`` the entry
    of the loop space ``(s+1, d+1)``, which must equal ``base_group``.
    """
    idx = bott.TableIndex(az.family, az.s, d)
    up = bott.suspend_shift(idx)
    return SuspensionReport(az.family, az.s, d, idx.group, up.group,
                            bott.loop_shift(up).group)
