"""Anticommuting orthogonal complex structures and their minimal geodesics.

``generate(k)`` builds ``J_1..J_k`` on ``R^N`` with ``N = 2**k`` from the
tensor chain

    J_i = rho^(i-1) (x) eps (x) I^(k-i),   eps = [[0,-1],[1,0]],  rho = diag(1,-1)

so ``J_i J_j + J_j J_i = -2 delta_ij I`` holds exactly in floating point.
Geodesics are evaluated in closed form: every generator squares to ``-I``, so
``exp(lam A) = cos(lam) I + sin(lam) A``.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np

EPS = np.array([[0.0, -1.0], [1.0, 0.0]])
RHO = np.array([[1.0, 0.0], [0.0, -1.0]])
MAX_K = 10


def _max(M):
    return float(np.max(np.abs(M))) if M.size else 0.0


@dataclass(frozen=True)
class ComplexStructureSet:
    N: int
    J: tuple

    def __len__(self):
        return len(self.J)


def generate(k):
    """Return ``J_1..J_k`` as a :class:`ComplexStructureSet` with ``N = 2**k``."""
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must lie in 1..{MAX_K}, got {k}")
    I2 = np.eye(2)
    J = []
    for i in range(1, k + 1):
        factors = [RHO] * (i - 1) + [EPS] + [I2] * (k - i)
        J.append(reduce(np.kron, factors))
    return ComplexStructureSet(2 ** k, tuple(J))


def clifford_residual(cs):
    """``max_ij |J_i J_j + J_j J_i + 2 delta_ij I|``."""
    I = np.eye(cs.N)
    worst = 0.0
    for i, Ji in enumerate(cs.J):
        for j in range(i, len(cs.J)):
            Jj = cs.J[j]
            worst = max(worst, _max(Ji @ Jj + Jj @ Ji + (2.0 * I if i == j else 0.0)))
    return worst


def orthogonality_residual(cs):
    I = np.eye(cs.N)
    return max((_max(J.T @ J - I) for J in cs.J), default=0.0)


def generator(cs, i):
    """Geodesic generator: ``J_1`` for ``i = 0``, else ``A_i = J_i^{-1} J_{i+1} = -J_i J_{i+1}``."""
    if i < 0 or i + 1 > len(cs.J):
        raise IndexError(f"geodesic index {i} needs J_{i + 1}, set has {len(cs.J)}")
    if i == 0:
        return cs.J[0]
    return -cs.J[i - 1] @ cs.J[i]


def geodesic(cs, i, lam):
    """Evaluate the curve ``L(lam)``.

    ``i = 0``: ``exp(lam J_1)``, running from ``I`` to ``-I`` through ``J_1``.
    ``i >= 1``: ``J_i exp(lam A_i)``, running from ``J_i`` to ``-J_i`` through
    ``J_{i+1}``.
    """
    A = generator(cs, i)
    E = np.cos(lam) * np.eye(cs.N) + np.sin(lam) * A
    return E if i == 0 else cs.J[i - 1] @ E


@dataclass(frozen=True)
class GeodesicCurve:
    """A sampled geodesic together with its generator identities."""

    index: int
    A: np.ndarray
    square_residual: float
    anticommute_residual: float
    commute_residual: float

    @classmethod
    def build(cls, cs, i):
        A = generator(cs, i)
        sq = _max(A @ A + np.eye(cs.N))
        anti = comm = 0.0
        if i >= 1:
            Ji = cs.J[i - 1]
            anti = _max(A @ Ji + Ji @ A)
            comm = max((_max(A @ Jj - Jj @ A) for Jj in cs.J[:i - 1]), default=0.0)
        return cls(i, A, sq, anti, comm)


def midpoint_residual(cs, i):
    """Distance of ``L(pi/2)`` from ``J_{i+1}`` (``J_1`` when ``i = 0``)."""
    target = cs.J[i] if i >= 1 else cs.J[0]
    if i >= 1 and i + 1 > len(cs.J):
        raise IndexError(f"midpoint {i} needs J_{i + 1}")
    return _max(geodesic(cs, i, np.pi / 2) - target)


@dataclass(frozen=True)
class StructureCheck:
    ok: bool
    orthogonal: float
    square: float
    anticommute: float

    def __bool__(self):
        return self.ok


def is_complex_structure(J, prefix=(), tol=1e-10):
    """Is ``J`` an orthogonal complex structure anticommuting with ``prefix``?"""
    J = np.asarray(J, dtype=float)
    I = np.eye(J.shape[0])
    orth = _max(J.T @ J - I)
    sq = _max(J @ J + I)
    anti = max((_max(J @ P + P @ J) for P in prefix), default=0.0)
    return StructureCheck(max(orth, sq, anti) < tol, orth, sq, anti)
