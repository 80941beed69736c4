"""Verification of supplied symmetry representations and AZ classification.

Antiunitary symmetries act as ``U K`` (``K`` complex conjugation) and are
checked in conjugation form

    U conj(H(-k)) U^dagger = +H(k)   (time reversal, T)
    U conj(H(-k)) U^dagger = -H(k)   (particle-hole, C)

while a chiral symmetry is unitary, ``U_S H(k) U_S^dagger = -H(k)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import bott
from .errors import ClassificationConflict, InvalidRepresentation, NonUnitary
from .model import grid_for

UNITARY_TOL = 1e-12
SQUARE_TOL = 1e-10
DEFAULT_TOL = 1e-8

# (t_sq, c_sq, chiral) -> label; 0 marks an absent antiunitary symmetry
AZ_PATTERNS = {
    (0, 0, False): "A",
    (0, 0, True): "AIII",
    (1, 0, False): "AI",
    (1, 1, True): "BDI",
    (0, 1, False): "D",
    (-1, 1, True): "DIII",
    (-1, 0, False): "AII",
    (-1, -1, True): "CII",
    (0, -1, False): "C",
    (1, -1, True): "CI",
}
PATTERN_OF = {label: pattern for pattern, label in AZ_PATTERNS.items()}


@dataclass(frozen=True)
class AZClass:
    label: str
    family: str
    s: int
    t_sq: int | None
    c_sq: int | None

    @classmethod
    def from_label(cls, label):
        t, c, _ = PATTERN_OF[label]
        family = "complex" if label in bott.LABELS["complex"] else "real"
        s = bott.LABELS[family].index(label)
        return cls(label, family, s, t or None, c or None)

    @property
    def chiral(self):
        return PATTERN_OF[self.label][2]

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class SymmetrySpec:
    """Candidate representation matrices; any subset may be ``None``."""

    tr: np.ndarray | None = None
    ph: np.ndarray | None = None
    chiral: np.ndarray | None = None

    def __post_init__(self):
        for name in ("tr", "ph", "chiral"):
            U = getattr(self, name)
            if U is not None:
                U = np.asarray(U, dtype=complex)
                check_unitary(U)
                object.__setattr__(self, name, U)

    @classmethod
    def from_dict(cls, syms):
        return cls(syms.get("T"), syms.get("C"), syms.get("S"))

    def as_dict(self):
        return {k: v for k, v in (("T", self.tr), ("C", self.ph), ("S", self.chiral))
                if v is not None}

    @property
    def implied_chiral(self):
        if self.chiral is not None:
            return self.chiral
        if self.tr is not None and self.ph is not None:
            return self.tr @ self.ph.conj()
        return None

    def transformed(self, V):
        """Representation after the basis change ``H -> V H V^dagger``."""
        V = np.asarray(V, dtype=complex)
        anti = lambda U: None if U is None else V @ U @ V.T
        uni = lambda U: None if U is None else V @ U @ V.conj().T
        return SymmetrySpec(anti(self.tr), anti(self.ph), uni(self.chiral))


def check_unitary(U, tol=UNITARY_TOL):
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NonUnitary(f"representation must be square, got shape {U.shape}")
    dev = np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))
    if dev >= tol:
        raise NonUnitary(f"matrix is not unitary (|U U^dagger - I| = {dev:.3g})")


def _hamiltonians(model, grid):
    grid = grid if grid is not None else grid_for(model)
    H = model.evaluate_many(grid.points)
    return H, H[grid.minus_index()]


def residual_antiunitary(model, U, kind, grid=None):
    """``max_k |U conj(H(-k)) U^dagger - sigma H(k)|`` with sigma = +1 (T), -1 (C)."""
    if kind not in ("T", "C"):
        raise ValueError(f"kind must be 'T' or 'C', got {kind!r}")
    U = np.asarray(U, dtype=complex)
    check_unitary(U)
    sigma = 1.0 if kind == "T" else -1.0
    H, Hm = _hamiltonians(model, grid)
    lhs = U @ Hm.conj() @ U.conj().T
    return float(np.max(np.abs(lhs - sigma * H)))


def residual_chiral(model, U, grid=None):
    U = np.asarray(U, dtype=complex)
    check_unitary(U)
    H, _ = _hamiltonians(model, grid)
    return float(np.max(np.abs(U @ H @ U.conj().T + H)))


def square_sign(U, tol=SQUARE_TOL):
    """Sign of ``(U K)^2 = U conj(U)``."""
    U = np.asarray(U, dtype=complex)
    sq = U @ U.conj()
    I = np.eye(U.shape[0])
    for sign in (1, -1):
        if np.max(np.abs(sq - sign * I)) < tol:
            return sign
    raise InvalidRepresentation("U conj(U) is neither +I nor -I")


@dataclass
class ClassificationReport:
    az: AZClass
    residuals: dict = field(default_factory=dict)
    rejected: list = field(default_factory=list)
    chiral_matrix: np.ndarray | None = None


def classify_report(model, spec, grid=None, tol=DEFAULT_TOL):
    """Classify and keep the per-symmetry residuals and rejected symmetries."""
    grid = grid if grid is not None else grid_for(model)
    res = {}
    if spec.tr is not None:
        res["T"] = residual_antiunitary(model, spec.tr, "T", grid)
    if spec.ph is not None:
        res["C"] = residual_antiunitary(model, spec.ph, "C", grid)
    if spec.chiral is not None:
        res["S"] = residual_chiral(model, spec.chiral, grid)
    passed = {k for k, r in res.items() if r < tol}
    rejected = sorted(set(res) - passed)

    t_sq = square_sign(spec.tr) if "T" in passed else 0
    c_sq = square_sign(spec.ph) if "C" in passed else 0
    chiral = None
    if "T" in passed and "C" in passed:
        if spec.chiral is not None and "S" not in passed:
            raise ClassificationConflict(
                f"T and C hold but the supplied chiral operator fails "
                f"(residual {res['S']:.3g})")
        chiral = spec.implied_chiral
    elif "S" in passed:
        chiral = spec.chiral
        # one antiunitary plus chiral implies the other antiunitary
        if t_sq or c_sq:
            if t_sq:
                U = chiral @ spec.tr
            else:
                U = chiral @ spec.ph
            try:
                implied = square_sign(U)
            except InvalidRepresentation as exc:
                raise ClassificationConflict(
                    "chiral and antiunitary representations are incompatible") from exc
            if t_sq:
                c_sq = implied
            else:
                t_sq = implied

    label = AZ_PATTERNS[t_sq, c_sq, chiral is not None]
    return ClassificationReport(AZClass.from_label(label), res, rejected, chiral)


def classify(model, spec, grid=None, tol=DEFAULT_TOL):
    """Altland-Zirnbauer class of ``model`` given candidate symmetries ``spec``.

    Symmetries whose residual is ``>= tol`` are treated as absent.
    """
    return classify_report(model, spec, grid, tol).az


def expected_group(az, d):
    return bott.group_at(az.family, az.s, d)


def class_representation(label, n=4):
    """Reference ``SymmetrySpec`` realising ``label`` on ``n`` bands.

    A 2-dim internal factor (4-dim for CII) is tensored with the identity on
    the remaining orbitals, so ``n`` must be a multiple of its size.
    """
    s0, sx = np.eye(2), np.array([[0, 1], [1, 0]])
    isy, sz = np.array([[0, 1], [-1, 0]]), np.diag([1, -1])
    antis = {
        "A": (None, None), "AIII": (None, None),
        "AI": (s0, None), "AII": (isy, None),
        "D": (None, s0), "C": (None, isy),
        "BDI": (s0, sz), "CI": (s0, isy),
        "DIII": (isy, sx), "CII": (np.kron(isy, s0), np.kron(isy, sz)),
    }
    t, c = antis[label]
    size = 4 if label == "CII" else 2
    if n % size:
        raise ValueError(f"class {label} needs a multiple of {size} bands")
    I = np.eye(n // size)
    kron = lambda a: None if a is None else np.kron(a, I)
    chiral = np.kron(sz, I) if label == "AIII" else None
    return SymmetrySpec(kron(t), kron(c), chiral)
