"""Topological invariants realising the Z and Z2 entries of the table.

Sign conventions (all examples and tests use these):

* Chern number: ``C = (1/2 pi i) sum_plaquettes log(U_x(k) U_y(k+x) U_x(k+y)^* U_y(k)^*)``
  with normalised filled-band link determinants ``U_mu``, principal branch,
  plaquettes traversed +x, +y, -x, -y.
* Winding: in the eigenbasis of the chiral operator (+1 block first),
  ``H = [[0, q], [q^dagger, 0]]`` and ``nu`` counts the turns of ``det q(k)``
  around the origin as ``k`` runs from 0 to ``2 pi``.
* Majorana number: ``sign(Pf A(0) Pf A(pi))``, ``A = i H`` in the basis where
  particle-hole acts as bare complex conjugation; ``-1`` is topological.
* Kane-Mele Z2: parity of Wannier-centre crossings of the largest-gap line for
  ``k_y`` in ``[0, pi]``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import bott
from .errors import (ChiralViolation, GapClosed, GridTooCoarse, SingularLink,
                     SymmetryViolation)
from .model import KGrid, flatten, grid_for
from .symmetry import (DEFAULT_TOL, residual_antiunitary, residual_chiral,
                       square_sign)

LINK_TOL = 1e-10


@dataclass(frozen=True)
class InvariantResult:
    kind: str
    value: int
    residual: float
    group: bott.InvariantGroup | None = None


@dataclass(frozen=True)
class NoInvariant:
    """The table group is trivial; there is nothing to compute."""

    group: bott.InvariantGroup = bott.ZERO
    kind: str = "none"


@dataclass(frozen=True)
class Unsupported:
    """A nontrivial (or unhandled) table entry without an implemented invariant."""

    group: bott.InvariantGroup
    reason: str = ""
    kind: str = "unsupported"


def _rounded(kind, raw, group=None):
    value = int(np.rint(raw))
    return InvariantResult(kind, value, float(abs(raw - value)), group)


# -- Chern number -------------------------------------------------------------

def _links(frames, axis):
    nxt = np.roll(frames, -1, axis=axis)
    overlap = np.einsum("...ia,...ib->...ab", frames.conj(), nxt)
    return np.linalg.det(overlap)


def lattice_chern(frames):
    """Lattice field-strength Chern number of filled frames on a periodic 2D mesh.

    ``frames`` has shape ``(m1, m2, n, filled)``; axis 0 is traversed first.
    Returns the unrounded sum (an integer up to rounding error).
    """
    if frames.shape[-1] == 0:
        return 0.0
    Ux, Uy = _links(frames, 0), _links(frames, 1)
    weakest = min(np.abs(Ux).min(), np.abs(Uy).min())
    if weakest < LINK_TOL:
        raise SingularLink(f"link overlap |det| = {weakest:.3g}; refine the grid")
    Ux, Uy = Ux / np.abs(Ux), Uy / np.abs(Uy)
    loop = Ux * np.roll(Uy, -1, axis=0) * np.roll(Ux, -1, axis=1).conj() * Uy.conj()
    return float(np.angle(loop).sum() / (2 * np.pi))


def chern(sample):
    """Chern number of the filled bands of a flattened 2D sample."""
    if sample.grid.dim != 2:
        raise ValueError("chern needs a 2D sample")
    frames = sample.frames.reshape(*sample.grid.shape, *sample.frames.shape[-2:])
    return _rounded("chern", lattice_chern(frames))


# -- winding number -----------------------------------------------------------

def chiral_basis(U_S):
    """Unitary whose columns are the +1 then -1 eigenvectors of ``U_S``.

    ``U_S`` is rescaled by a global phase so that ``U_S^2 = I``.
    """
    U_S = np.asarray(U_S, dtype=complex)
    sq = U_S @ U_S
    phase = np.sqrt(sq[0, 0] if abs(sq[0, 0]) > 0.5 else np.trace(sq) / len(sq))
    S = U_S / phase
    if np.max(np.abs(S @ S - np.eye(len(S)))) > 1e-8:
        raise ChiralViolation("chiral operator does not square to a phase")
    w, V = np.linalg.eigh((S + S.conj().T) / 2)
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    n_plus = int((w > 0).sum())
    return V, n_plus


def winding(model, U_S, grid=None, tol=DEFAULT_TOL, max_step=np.pi / 2):
    """Winding number of a chiral 1D model.

    The phase of ``det q(k)`` is accumulated segment by segment; a step
    larger than ``max_step`` means the grid cannot resolve the branch and
    raises :class:`GridTooCoarse`.
    """
    if model.dim != 1:
        raise ValueError("winding needs a 1D model")
    grid = grid if grid is not None else grid_for(model)
    r = residual_chiral(model, U_S, grid)
    if r >= tol:
        raise ChiralViolation(f"chiral residual {r:.3g} >= {tol:g}")
    V, n_plus = chiral_basis(U_S)
    if 2 * n_plus != model.bands:
        raise ChiralViolation("chiral blocks are unbalanced; q(k) is not square")
    H = V.conj().T @ model.evaluate_many(grid.points) @ V
    det_q = np.linalg.det(H[:, :n_plus, n_plus:])
    worst = int(np.argmin(np.abs(det_q)))
    if abs(det_q[worst]) < 1e-12:
        raise GapClosed(grid.points[worst], abs(det_q[worst]))
    steps = np.angle(np.roll(det_q, -1) / det_q)
    if np.max(np.abs(steps)) > max_step:
        raise GridTooCoarse(
            f"phase of det q jumps by {np.max(np.abs(steps)):.3g} between samples")
    return _rounded("winding", steps.sum() / (2 * np.pi))


# -- Pfaffian and Majorana number --------------------------------------------

def pfaffian(A, tol=1e-10):
    """Pfaffian of an antisymmetric matrix by Parlett-Reid elimination.

    The matrix is reduced to tridiagonal form with row/column pivoting; each
    interchange flips the sign and the result is the product of the
    super-diagonal pivots ``A[k, k+1]`` for even ``k``.
    """
    A = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("pfaffian needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(A)))) if n else 1.0
    if n and np.max(np.abs(A + A.T)) >= tol * scale:
        raise ValueError("matrix is not antisymmetric")
    if n % 2:
        return A.dtype.type(0)
    pf = A.dtype.type(1)
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.abs(A[k + 1:, k]).argmax())
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0:
            return A.dtype.type(0)
        pf = pf * A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def majorana_basis(U_C):
    """``W`` with ``W W^T = U_C``; in the basis ``W^dagger H W`` particle-hole
    acts as plain conjugation, so ``i H`` becomes real antisymmetric."""
    T, Z = scipy.linalg.schur(np.asarray(U_C, dtype=complex), output="complex")
    return Z @ np.diag(np.sqrt(np.diag(T))) @ Z.conj().T


def majorana_z2(model, U_C, grid=None, tol=DEFAULT_TOL):
    """Majorana number ``sign(Pf A(0) Pf A(pi))`` of a 1D particle-hole model."""
    if model.dim != 1:
        raise ValueError("majorana_z2 needs a 1D model")
    grid = grid if grid is not None else KGrid(1, 2 * (grid_for(model).m // 2))
    r = residual_antiunitary(model, U_C, "C", grid)
    if r >= tol:
        raise SymmetryViolation(f"particle-hole residual {r:.3g} >= {tol:g}")
    if square_sign(U_C) != 1:
        raise SymmetryViolation("majorana_z2 needs C^2 = +1")
    W = majorana_basis(U_C)
    raw = 1.0
    for k in (0.0, np.pi):
        H = model.evaluate([k])
        E = np.linalg.eigvalsh(H)
        if np.min(np.abs(E)) < 1e-10:
            raise GapClosed([k], np.min(np.abs(E)))
        A = 1j * (W.conj().T @ H @ W)
        if np.max(np.abs(A.imag)) > 1e-8:
            raise SymmetryViolation(f"i H is not real in the Majorana basis at k={k}")
        raw *= pfaffian(A.real)
    value = int(np.sign(raw))
    return InvariantResult("majorana_z2", value, 0.0)


# -- Kane-Mele Z2 via Wannier-centre flow ------------------------------------

def wannier_centers(frames_line):
    """Wilson-loop Wannier centres in [0, 1) for frames along one closed line.

    ``frames_line`` has shape ``(m, n, filled)``.
    """
    W = np.eye(frames_line.shape[-1], dtype=complex)
    m = frames_line.shape[0]
    for j in range(m):
        F, G = frames_line[j], frames_line[(j + 1) % m]
        W = W @ (F.conj().T @ G)
    phases = np.angle(np.linalg.eigvals(W))
    return np.sort((phases / (2 * np.pi)) % 1.0)


def largest_gap_midpoint(centers):
    """Midpoint of the widest gap between neighbouring centres on the circle."""
    c = np.sort(centers)
    gaps = np.diff(np.append(c, c[0] + 1.0))
    j = int(np.argmax(gaps))
    return (c[j] + gaps[j] / 2) % 1.0, float(gaps[j])


def _crossings(z0, z1, centers):
    """Number of centres strictly inside the short arc from ``z0`` to ``z1``."""
    d = (z1 - z0 + 0.5) % 1.0 - 0.5
    if d == 0:
        return 0
    offset = ((centers - z0) if d > 0 else (z0 - centers)) % 1.0
    return int(np.sum((offset > 0) & (offset < abs(d))))


def wcc_flow(sample):
    """Wannier centres for every ``k_y`` line in ``[0, pi]`` of an even 2D grid."""
    m = sample.grid.m
    if sample.grid.dim != 2 or m % 2:
        raise ValueError("Wannier-centre flow needs a 2D grid with an even point count")
    frames = sample.frames.reshape(m, m, *sample.frames.shape[-2:])
    kys = sample.grid.axis[: m // 2 + 1]
    return kys, [wannier_centers(frames[:, j]) for j in range(m // 2 + 1)]


def kane_mele_z2(sample, U_T, model=None, tol=DEFAULT_TOL, min_gap=1e-6):
    """Time-reversal Z2 index (0 or 1) from the Wannier-centre flow.

    ``model`` is used to verify the time-reversal residual when given.
    """
    if square_sign(U_T) != -1:
        raise SymmetryViolation("kane_mele_z2 needs T^2 = -1")
    if sample.bands % 2:
        raise SymmetryViolation("kane_mele_z2 needs an even band count")
    if model is not None:
        r = residual_antiunitary(model, U_T, "T", sample.grid)
        if r >= tol:
            raise SymmetryViolation(f"time-reversal residual {r:.3g} >= {tol:g}")
    _, flow = wcc_flow(sample)
    count = 0
    z_prev, gap = largest_gap_midpoint(flow[0])
    for centers in flow[1:]:
        z, gap = largest_gap_midpoint(centers)
        if gap < min_gap:
            raise GridTooCoarse("Wannier centres fill the circle; refine the grid")
        count += _crossings(z_prev, z, centers)
        z_prev = z
    return InvariantResult("kane_mele_z2", count % 2, 0.0)


# -- 0D -----------------------------------------------------------------------

def negative_count(H, gap_tol=1e-10):
    """Number of negative eigenvalues of a 0D Hermitian matrix."""
    H = np.asarray(H, dtype=complex)
    E = np.linalg.eigvalsh(H)
    if np.min(np.abs(E)) < gap_tol:
        raise GapClosed((), np.min(np.abs(E)))
    return InvariantResult("negative_count", int((E < 0).sum()), 0.0)


# -- dispatch -----------------------------------------------------------------

KINDS = ("chern", "winding", "majorana_z2", "kane_mele_z2", "negative_count")


def invariant_for(model, az, d=None, spec=None, grid=None, chiral=None):
    """Compute the invariant matching the table entry of ``(az, d)``.

    ``spec`` supplies the symmetry matrices; ``chiral`` overrides the chiral
    operator (otherwise ``spec.implied_chiral``).  Returns an
    :class:`InvariantResult`, :class:`NoInvariant` for trivial entries, or
    :class:`Unsupported`.
    """
    d = model.dim if d is None else d
    group = bott.group_at(az.family, az.s, d)
    if group is bott.ZERO:
        return NoInvariant()
    if d != model.dim:
        return Unsupported(group, f"model has dimension {model.dim}, not {d}")
    result = None
    if group is bott.Z:
        if d == 0:
            result = negative_count(model.evaluate(()))
        elif d == 1 and az.chiral:
            U_S = chiral if chiral is not None else (spec.implied_chiral if spec else None)
            if U_S is None:
                return Unsupported(group, "no chiral operator supplied")
            result = winding(model, U_S, grid)
        elif d == 2:
            result = chern(flatten(model, grid))
    elif group is bott.Z2:
        if d == 1 and az.label == "D":
            result = majorana_z2(model, spec.ph)
        elif d == 2 and az.label == "AII":
            sample = flatten(model, grid if grid is not None else KGrid(2, 200))
            result = kane_mele_z2(sample, spec.tr, model)
    if result is None:
        return Unsupported(group, f"no invariant implemented for {az.label} in d={d}")
    return InvariantResult(result.kind, result.value, result.residual, group)
