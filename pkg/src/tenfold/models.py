"""Built-in Bloch models with their canonical symmetry representations."""
import numpy as np

from .model import BlochModel
from .symmetry import SymmetrySpec

s0 = np.eye(2, dtype=complex)
sx = np.array([[0, 1], [1, 0]], dtype=complex)
sy = np.array([[0, -1j], [1j, 0]])
sz = np.diag([1.0, -1.0]).astype(complex)


def _hop(dim, terms):
    """Complete ``{R: H_R}`` with the Hermitian partners ``H_{-R} = H_R^dagger``."""
    hop = {}
    for R, H in terms.items():
        H = np.asarray(H, dtype=complex)
        hop[R] = hop.get(R, 0) + H
        mR = tuple(-x for x in R)
        if mR != R:
            hop[mR] = hop.get(mR, 0) + H.conj().T
    return hop


def ssh(v=0.5, w=1.0):
    """SSH chain, ``H(k) = [[0, v + w e^{ik}], [v + w e^{-ik}, 0]]``."""
    return BlochModel(1, 2, _hop(1, {(0,): v * sx,
                                     (1,): w * np.array([[0, 1], [0, 0]])}))


def qwz(m=1.0):
    """Qi-Wu-Zhang model ``sin kx sx + sin ky sy + (m + cos kx + cos ky) sz``."""
    return BlochModel(2, 2, _hop(2, {
        (0, 0): m * sz,
        (1, 0): (sx / 1j + sz) / 2,
        (0, 1): (sy / 1j + sz) / 2,
    }))


def kitaev(t=1.0, delta=1.0, mu=1.0):
    """Kitaev chain in BdG form ``(-2t cos k - mu) tz + 2 delta sin k ty``."""
    return BlochModel(1, 2, _hop(1, {
        (0,): -mu * sz,
        (1,): -t * sz - 1j * delta * sy,
    }))


def bhz(m=1.0):
    """BHZ model: the QWZ block and its time-reversed partner.

    ``H(k) = diag(h(k), conj(h(-k)))`` with ``h`` the QWZ Hamiltonian; the
    first tensor factor is spin.
    """
    h = qwz(m)
    up, down = np.diag([1, 0]), np.diag([0, 1])
    return BlochModel(2, 4, {
        R: np.kron(up, H) + np.kron(down, H.conj())
        for R, H in h.hoppings.items()
    })


def rice_mele(phi=0.25 * np.pi, t=1.0, dt=0.5, delta=0.5):
    """Rice-Mele chain on the standard pump cycle.

    Intracell hopping ``t + dt cos phi``, intercell ``t - dt cos phi`` and
    staggered potential ``delta sin phi``.
    """
    return BlochModel(1, 2, _hop(1, {
        (0,): (t + dt * np.cos(phi)) * sx + delta * np.sin(phi) * sz,
        (1,): (t - dt * np.cos(phi)) * np.array([[0, 1], [0, 0]]),
    }))


def ssh_symmetries():
    return SymmetrySpec(tr=s0, ph=sz, chiral=sz)


def qwz_symmetries():
    return SymmetrySpec()


def kitaev_symmetries():
    return SymmetrySpec(ph=sx)


def bhz_symmetries():
    return SymmetrySpec(tr=np.kron(1j * sy, s0))


def rice_mele_symmetries():
    return SymmetrySpec()


BUILTINS = {
    "ssh": (ssh, ssh_symmetries, {"v": 0.5, "w": 1.0}),
    "qwz": (qwz, qwz_symmetries, {"m": 1.0}),
    "kitaev": (kitaev, kitaev_symmetries, {"t": 1.0, "delta": 1.0, "mu": 1.0}),
    "bhz": (bhz, bhz_symmetries, {"m": 1.0}),
    "rice-mele": (rice_mele, rice_mele_symmetries,
                  {"phi": 0.25 * np.pi, "t": 1.0, "dt": 0.5, "delta": 0.5}),
}


def builtin(name, **params):
    """Return ``(model, spec)`` for a built-in model; unknown parameters raise."""
    try:
        factory, symmetries, defaults = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"{name} has no parameter(s) {sorted(unknown)}")
    return factory(**{**defaults, **params}), symmetries()


def random_class_model(label, bands=4, dim=1, rng=None, scale=1.0):
    """Random model realising AZ class ``label`` with its reference representation.

    Random hoppings on ``R in {-1, 0, 1}^dim`` are projected onto the
    symmetric subspace by averaging over the symmetry group.  Returns
    ``(model, spec)``.
    """
    from .symmetry import class_representation

    rng = np.random.default_rng(rng)
    spec = class_representation(label, bands)
    hop = {}
    for R in np.ndindex(*(3,) * dim):
        R = tuple(int(x) - 1 for x in R)
        if R in hop:
            continue
        H = scale * (rng.normal(size=(bands, bands)) + 1j * rng.normal(size=(bands, bands)))
        if R == tuple(-x for x in R):
            H = (H + H.conj().T) / 2
        hop[R] = H
        hop[tuple(-x for x in R)] = H.conj().T

    def average(hop, U, sign, anti):
        out = {}
        for R, H in hop.items():
            image = U @ (H.conj() if anti else H) @ U.conj().T
            out[R] = (H + sign * image) / 2
        return out

    if spec.tr is not None:
        hop = average(hop, spec.tr, 1, True)
    if spec.ph is not None:
        hop = average(hop, spec.ph, -1, True)
    if spec.chiral is not None:
        hop = average(hop, spec.chiral, -1, False)
    # restore exact closure after rounding in the averages
    hop = {R: (H + hop[tuple(-x for x in R)].conj().T) / 2 for R, H in hop.items()}
    return BlochModel(dim, bands, hop), spec
