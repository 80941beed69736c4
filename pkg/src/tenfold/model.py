"""Bloch Hamiltonian families on a uniformly sampled Brillouin zone.

A :class:`BlochModel` stores real-space hopping matrices ``H_R`` and evaluates

    H(k) = sum_R exp(i k.R) H_R

with no orbital-position phases, so ``H(k)`` is exactly ``2*pi`` periodic in
every component.  The Fermi level is pinned at energy 0.
"""
import itertools
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import GapClosed, InconsistentFilling, ModelValidationError

HERMITIAN_TOL = 1e-13
DEFAULT_GAP_TOL = 1e-6
DEFAULT_POINTS = {0: 1, 1: 201, 2: 61}


def default_points(dim):
    """Default number of k-points per axis; ``TENFOLD_GRID`` overrides it."""
    env = os.environ.get("TENFOLD_GRID")
    if env and dim > 0:
        return int(env)
    return DEFAULT_POINTS.get(dim, 21)


class BlochModel:
    """Tight-binding Bloch Hamiltonian in ``dim`` dimensions with ``bands`` bands.

    Parameters
    ----------
    dim : int
        Spatial dimension (0..7).
    bands : int
        Number of orbitals per unit cell.
    hoppings : mapping
        ``{R: H_R}`` with ``R`` an integer tuple of length ``dim`` and ``H_R``
        an ``bands x bands`` complex matrix.  Closure ``H_{-R} = H_R^dagger``
        is required and checked, never repaired.
    """

    def __init__(self, dim, bands, hoppings):
        dim, bands = int(dim), int(bands)
        if not 0 <= dim <= 7:
            raise ModelValidationError(f"dimension {dim} outside 0..7")
        if bands < 1:
            raise ModelValidationError("need at least one band")
        hop = {}
        for R, H in hoppings.items():
            R = tuple(int(x) for x in R)
            if len(R) != dim:
                raise ModelValidationError(
                    f"displacement {R} has length {len(R)}, expected {dim}", R)
            H = np.array(H, dtype=complex)
            if H.shape != (bands, bands):
                raise ModelValidationError(
                    f"hopping at R={R} has shape {H.shape}", R)
            hop[R] = H
        if dim == 0 and list(hop) != [()]:
            raise ModelValidationError("a 0D model needs exactly one entry R=()")
        for R, H in hop.items():
            mR = tuple(-x for x in R)
            if mR not in hop:
                raise ModelValidationError(f"missing partner -R for R={R}", R)
            if np.max(np.abs(hop[mR] - H.conj().T)) >= HERMITIAN_TOL:
                raise ModelValidationError(
                    f"H(-R) != H(R)^dagger at R={R}", R)
        self.dim = dim
        self.bands = bands
        self.hoppings = hop
        keys = sorted(hop)
        self._R = np.array(keys, dtype=float).reshape(len(keys), dim)
        self._H = np.array([hop[R] for R in keys]).reshape(len(keys), bands, bands)

    def __repr__(self):
        return (f"BlochModel(dim={self.dim}, bands={self.bands}, "
                f"terms={len(self.hoppings)})")

    def evaluate(self, k=()):
        """Return the ``bands x bands`` Hermitian matrix H(k)."""
        k = np.asarray(k, dtype=float).reshape(-1)
        if k.shape[0] != self.dim:
            raise ValueError(f"k has length {k.shape[0]}, model dimension is {self.dim}")
        return self.evaluate_many(k[None, :])[0]

    def evaluate_many(self, ks):
        """Vectorised evaluation; ``ks`` has shape ``(K, dim)``."""
        ks = np.asarray(ks, dtype=float)
        if ks.ndim != 2 or ks.shape[1] != self.dim:
            raise ValueError(f"expected k array of shape (K, {self.dim}), got {ks.shape}")
        phases = np.exp(1j * ks @ self._R.T)
        return np.einsum("kr,rij->kij", phases, self._H)

    def transformed(self, V):
        """The model ``V H(k) V^dagger`` for a k-independent unitary ``V``."""
        V = np.asarray(V, dtype=complex)
        return BlochModel(self.dim, self.bands,
                          {R: V @ H @ V.conj().T for R, H in self.hoppings.items()})

    # file format -----------------------------------------------------------

    def to_dict(self, symmetries=None):
        out = {
            "dim": self.dim,
            "bands": self.bands,
            "hoppings": [
                {"R": list(R), "re": H.real.tolist(), "im": H.imag.tolist()}
                for R, H in sorted(self.hoppings.items())
            ],
        }
        if symmetries:
            out["symmetries"] = {
                key: matrix_to_json(U) for key, U in symmetries.items() if U is not None
            }
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            hop = {}
            for entry in data["hoppings"]:
                R = tuple(entry["R"])
                if R in hop:
                    raise ModelValidationError(f"duplicate displacement R={R}", R)
                hop[R] = matrix_from_json(entry)
            return cls(data["dim"], data["bands"], hop)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ModelValidationError):
                raise
            raise ModelValidationError(f"malformed model document: {exc}") from exc


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj):
    re = np.array(obj["re"], dtype=float)
    im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ModelValidationError("real and imaginary parts must be matching 2D arrays")
    return re + 1j * im


def load_model(path):
    """Read a model file.  Returns ``(model, symmetries)``; the latter maps
    ``"T"``, ``"C"``, ``"S"`` to matrices for whichever entries are present."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelValidationError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelValidationError("model document must be a JSON object")
    model = BlochModel.from_dict(data)
    syms = {}
    for key, obj in (data.get("symmetries") or {}).items():
        if key not in ("T", "C", "S"):
            raise ModelValidationError(f"unknown symmetry key {key!r}")
        try:
            syms[key] = matrix_from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelValidationError(f"malformed symmetry {key}: {exc}") from exc
    return model, syms


def dump_model(model, path, symmetries=None):
    with open(path, "w") as fh:
        json.dump(model.to_dict(symmetries), fh, indent=1)


@dataclass(frozen=True)
class KGrid:
    """Uniform torus grid ``k = 2*pi*(j_1, ..., j_d)/m``, axis 0 varying slowest."""

    dim: int
    m: int

    def __post_init__(self):
        if self.dim > 0 and self.m < 2:
            raise ValueError("need at least 2 points per axis")

    @property
    def shape(self):
        return (self.m,) * self.dim

    @property
    def axis(self):
        return 2 * np.pi * np.arange(self.m) / self.m

    @property
    def points(self):
        if self.dim == 0:
            return np.zeros((1, 0))
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        return np.stack([g.reshape(-1) for g in mesh], axis=-1)

    def __len__(self):
        return self.m ** self.dim

    def minus_index(self):
        """Flat index of ``-k`` for every flat index of ``k``."""
        if self.dim == 0:
            return np.zeros(1, dtype=int)
        idx = np.indices(self.shape).reshape(self.dim, -1)
        return np.ravel_multi_index((-idx) % self.m, self.shape)

    def trim_indices(self):
        """Flat indices of the time-reversal-invariant momenta on the grid."""
        if self.dim == 0:
            return [0]
        if self.m % 2:
            return [0]
        half = self.m // 2
        return [np.ravel_multi_index(c, self.shape)
                for c in itertools.product((0, half), repeat=self.dim)]


def grid_for(model, m=None):
    return KGrid(model.dim, m if m is not None else default_points(model.dim))


@dataclass(frozen=True)
class FlattenedSample:
    """Spectrally flattened Hamiltonian ``Q(k) = I - 2 P(k)`` on a grid.

    ``frames[i]`` holds an orthonormal basis (columns) of the filled subspace
    at grid point ``i``; ``gap`` is the smallest |E| found on the grid.
    """

    grid: KGrid
    Q: np.ndarray
    filled: int
    frames: np.ndarray = field(repr=False)
    gap: float = float("inf")

    @property
    def bands(self):
        return self.Q.shape[-1]


def _spectrum(model, grid):
    H = model.evaluate_many(grid.points)
    return np.linalg.eigh(H)


def min_gap(model, grid):
    """Smallest |eigenvalue| of H(k) over the grid."""
    E, _ = _spectrum(model, grid)
    return float(np.min(np.abs(E)))


def flatten_matrices(H, gap_tol=DEFAULT_GAP_TOL, points=None):
    """Flatten a stack of Hermitian matrices; returns ``(Q, frames, filled, gap)``."""
    E, V = np.linalg.eigh(H)
    absE = np.abs(E).min(axis=-1).reshape(-1)
    worst = int(np.argmin(absE))
    if absE[worst] <= gap_tol:
        k = points[worst] if points is not None else (worst,)
        raise GapClosed(k, absE[worst])
    neg = (E < 0).sum(axis=-1).reshape(-1)
    if np.any(neg != neg[0]):
        bad = int(np.argmax(neg != neg[0]))
        raise InconsistentFilling(
            f"filled band count changes from {neg[0]} to {neg[bad]} over the grid")
    filled = int(neg[0])
    signs = np.sign(E)
    Q = np.einsum("...ij,...j,...kj->...ik", V, signs, V.conj())
    # eigh sorts ascending, so the filled states are the first columns
    return Q, V[..., :filled], filled, float(absE.min())


def flatten(model, grid=None, gap_tol=DEFAULT_GAP_TOL):
    """Spectrally flatten ``model`` on ``grid``.

    Raises
    ------
    GapClosed
        If some |E(k)| <= gap_tol.
    InconsistentFilling
        If the number of negative eigenvalues varies over the grid.
    """
    if grid is None:
        grid = grid_for(model)
    pts = grid.points
    Q, frames, filled, gap = flatten_matrices(model.evaluate_many(pts), gap_tol, pts)
    return FlattenedSample(grid, Q, filled, frames, gap)
