import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import ortho_group, unitary_group

from tenfold import models
from tenfold.errors import (ChiralViolation, GapClosed, GridTooCoarse,
                            SymmetryViolation)
from tenfold.invariants import (InvariantResult, NoInvariant, Unsupported, chern,
                                invariant_for, kane_mele_z2, lattice_chern,
                                majorana_basis, majorana_z2, negative_count,
                                pfaffian, winding)
from tenfold.model import BlochModel, KGrid, flatten
from tenfold.models import s0, sx, sy, sz
from tenfold.symmetry import AZClass, SymmetrySpec


# -- oracles ------------------------------------------------------------------

def ray_winding(model, U_S, points=4001):
    """Count signed crossings of det q(k) through the positive real axis."""
    w, V = np.linalg.eigh(U_S)
    V = V[:, ::-1]
    n = model.bands // 2
    ks = np.linspace(0, 2 * np.pi, points)
    H = V.conj().T @ model.evaluate_many(ks[:, None]) @ V
    # a generic ray direction avoids crossings exactly at the grid endpoints
    z = np.exp(0.7j) * np.linalg.det(H[:, :n, n:])
    count = 0
    for a, b in zip(z[:-1], z[1:]):
        if a.imag < 0 <= b.imag and (a.real + b.real) > 0:
            count += 1
        elif b.imag < 0 <= a.imag and (a.real + b.real) > 0:
            count -= 1
    return count


def loop_fhs(model, m):
    """Plaquette-by-plaquette Chern number from lower-band eigenvectors."""
    ks = 2 * np.pi * np.arange(m) / m
    filled = None
    u = {}
    for i, j in itertools.product(range(m), repeat=2):
        E, V = np.linalg.eigh(model.evaluate([ks[i], ks[j]]))
        filled = int((E < 0).sum())
        u[i, j] = V[:, :filled]

    def link(a, b):
        d = np.linalg.det(u[a].conj().T @ u[b])
        return d / abs(d)

    total = 0.0
    for i, j in itertools.product(range(m), repeat=2):
        i1, j1 = (i + 1) % m, (j + 1) % m
        F = link((i, j), (i1, j)) * link((i1, j), (i1, j1)) \
            * link((i1, j1), (i, j1)) * link((i, j1), (i, j))
        total += np.angle(F)
    return total / (2 * np.pi)


def skyrmion_number(m, points=400):
    """(1/4 pi) int d.(dx d x dy d) for the QWZ vector d(k), midpoint rule."""
    ks = 2 * np.pi * (np.arange(points) + 0.5) / points
    kx, ky = np.meshgrid(ks, ks, indexing="ij")
    d = np.stack([np.sin(kx), np.sin(ky), m + np.cos(kx) + np.cos(ky)])
    dx = np.stack([np.cos(kx), 0 * kx, -np.sin(kx)])
    dy = np.stack([0 * ky, np.cos(ky), -np.sin(ky)])
    density = np.einsum("i...,i...->...", d, np.cross(dx, dy, axis=0))
    norm = np.linalg.norm(d, axis=0) ** 3
    return (density / norm).sum() * (2 * np.pi / points) ** 2 / (4 * np.pi)


def pf_expansion(A):
    """Pfaffian by expansion along the first row."""
    n = len(A)
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        rest = [i for i in range(n) if i not in (0, j)]
        total += (-1) ** (j + 1) * A[0, j] * pf_expansion(A[np.ix_(rest, rest)])
    return total


def random_antisymmetric(rng, n, complex_=False):
    M = rng.standard_normal((n, n))
    if complex_:
        M = M + 1j * rng.standard_normal((n, n))
    return M - M.T


# -- winding ------------------------------------------------------------------

class TestWinding:
    @pytest.mark.parametrize("v,w", [(0.5, 1.0), (1.5, 1.0), (0.1, 2.0), (1.9, 0.2)])
    def test_matches_ray_count(self, v, w):
        model = models.ssh(v, w)
        assert winding(model, sz).value == ray_winding(model, sz)

    def test_values(self):
        assert winding(models.ssh(0.5, 1.0), sz).value == 1
        assert winding(models.ssh(1.5, 1.0), sz).value == 0

    def test_block_swap_flips_sign(self):
        model = models.ssh(0.5, 1.0)
        assert winding(model, -sz).value == -winding(model, sz).value

    def test_longer_range_winding_two(self):
        model = BlochModel(1, 2, {(0,): 0.1 * sx, (2,): np.array([[0, 1], [0, 0]]),
                                  (-2,): np.array([[0, 0], [1, 0]])})
        assert winding(model, sz).value == 2 == ray_winding(model, sz)

    def test_gap_closed(self):
        with pytest.raises(GapClosed):
            winding(models.ssh(1.0, 1.0), sz, KGrid(1, 200))

    def test_not_chiral(self):
        with pytest.raises(ChiralViolation):
            winding(models.ssh(0.5, 1.0), sx)

    def test_coarse_grid(self):
        model = BlochModel(1, 2, {(0,): 0.1 * sx, (3,): np.array([[0, 0], [1, 0]]),
                                  (-3,): np.array([[0, 1], [0, 0]])})
        with pytest.raises(GridTooCoarse):
            winding(model, sz, KGrid(1, 8))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_invariant_under_basis_change(self, seed):
        V = unitary_group.rvs(2, random_state=seed)
        model = models.ssh(0.5, 1.0).transformed(V)
        assert winding(model, V @ sz @ V.conj().T).value == 1


# -- Chern --------------------------------------------------------------------

class TestChern:
    @pytest.mark.parametrize("m", [-3.0, -1.0, 1.0, 3.0])
    def test_matches_loop_oracle(self, m):
        model = models.qwz(m)
        got = chern(flatten(model, KGrid(2, 24)))
        assert got.value == round(loop_fhs(model, 24))
        assert got.residual < 1e-6

    @pytest.mark.parametrize("m", [-1.5, -0.5, 0.5, 1.5, 2.5])
    def test_matches_skyrmion_number(self, m):
        # with the lower band filled, C = -(skyrmion number of d)
        assert chern(flatten(models.qwz(m), KGrid(2, 41))).value == -round(skyrmion_number(m))

    def test_gauge_invariance(self):
        sample = flatten(models.qwz(1.0), KGrid(2, 21))
        frames = sample.frames.reshape(21, 21, 2, 1)
        base = lattice_chern(frames)
        rng = np.random.default_rng(4)
        for _ in range(10):
            phases = np.exp(2j * np.pi * rng.random((21, 21, 1, 1)))
            assert abs(lattice_chern(frames * phases) - base) < 1e-9

    @pytest.mark.parametrize("m", [-1.0, 1.0, 3.0])
    def test_grid_refinement(self, m):
        a = chern(flatten(models.qwz(m), KGrid(2, 21))).value
        b = chern(flatten(models.qwz(m), KGrid(2, 41))).value
        assert a == b

    def test_multiband_sum(self):
        # two decoupled QWZ copies with opposite mass
        sample = flatten(models.bhz(1.0), KGrid(2, 30))
        assert chern(sample).value == 0

    def test_needs_2d(self):
        with pytest.raises(ValueError):
            chern(flatten(models.ssh(), KGrid(1, 10)))


# -- Pfaffian and Majorana ----------------------------------------------------

class TestPfaffian:
    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_against_expansion(self, n):
        rng = np.random.default_rng(n)
        for complex_ in (False, True):
            A = random_antisymmetric(rng, n, complex_)
            assert abs(pfaffian(A) - pf_expansion(A)) < 1e-10 * max(1, abs(pf_expansion(A)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
    def test_square_is_determinant(self, half, seed):
        rng = np.random.default_rng(seed)
        A = random_antisymmetric(rng, 2 * half)
        assert abs(pfaffian(A) ** 2 - np.linalg.det(A)) < 1e-8 * max(1, abs(np.linalg.det(A)))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
    def test_congruence(self, half, seed):
        rng = np.random.default_rng(seed)
        n = 2 * half
        A = random_antisymmetric(rng, n)
        V = rng.standard_normal((n, n))
        lhs = pfaffian(V.T @ A @ V)
        assert abs(lhs - np.linalg.det(V) * pfaffian(A)) < 1e-8 * max(1, abs(lhs))

    def test_odd_and_canonical(self):
        assert pfaffian(np.zeros((3, 3))) == 0
        J = np.kron(np.eye(3), np.array([[0, 1], [-1, 0]]))
        assert pfaffian(J) == pytest.approx(1.0)

    def test_rejects_symmetric(self):
        with pytest.raises(ValueError):
            pfaffian(np.eye(2))


class TestMajorana:
    def test_basis_squares_to_operator(self):
        for U in (sx, s0, 1j * sy @ sy, ortho_group.rvs(4, random_state=1)):
            U = np.asarray(U, dtype=complex)
            if np.max(np.abs(U - U.T)) > 1e-12:
                continue
            W = majorana_basis(U)
            assert np.max(np.abs(W @ W.T - U)) < 1e-12

    @pytest.mark.parametrize("mu", [0.0, 0.5, 1.5, 1.9, 2.1, 2.5, 3.0, -1.0, -3.0])
    def test_kitaev_band_sign_oracle(self, mu):
        # oracle: the Majorana number equals sign(eps(0) eps(pi)) with
        # eps(k) = -2t cos k - mu
        eps = (-2 - mu) * (2 - mu)
        assert majorana_z2(models.kitaev(1.0, 1.0, mu), sx).value == int(np.sign(eps))

    def test_independent_of_pairing(self):
        for delta in (0.3, 1.0, 2.0):
            assert majorana_z2(models.kitaev(1.0, delta, 1.0), sx).value == -1

    def test_requires_c_squared_plus_one(self):
        with pytest.raises(SymmetryViolation):
            majorana_z2(models.ssh(0.5, 1.0), 1j * sy)

    def test_gap_closed(self):
        with pytest.raises(GapClosed):
            majorana_z2(models.kitaev(1.0, 1.0, 2.0), sx)


# -- Kane-Mele ----------------------------------------------------------------

def spin_chern_parity(m):
    """Oracle: BHZ is two decoupled QWZ blocks; Z2 is the upper block's Chern parity."""
    return chern(flatten(models.qwz(m), KGrid(2, 40))).value % 2


class TestKaneMele:
    grid = KGrid(2, 60)

    @pytest.mark.parametrize("m", [-3.0, -1.0, 1.0, 1.9, 2.1, 3.0])
    def test_matches_spin_chern_parity(self, m):
        U_T = models.bhz_symmetries().tr
        got = kane_mele_z2(flatten(models.bhz(m), self.grid), U_T, models.bhz(m))
        assert got.value == spin_chern_parity(m)

    def test_robust_to_spin_mixing(self):
        # sy (x) sy commutes with the time-reversal operator i sy (x) I composed
        # with conjugation, so adding it keeps the model in class AII
        base = models.bhz(1.0)
        hop = dict(base.hoppings)
        hop[(0, 0)] = hop[(0, 0)] + 0.3 * np.kron(sy, sy)
        model = BlochModel(2, 4, hop)
        U_T = models.bhz_symmetries().tr
        got = kane_mele_z2(flatten(model, self.grid), U_T, model)
        assert got.value == 1

    def test_atomic_limit(self):
        model = BlochModel(2, 4, {(0, 0): np.kron(s0, sz)})
        got = kane_mele_z2(flatten(model, KGrid(2, 10)), np.kron(1j * sy, s0), model)
        assert got.value == 0

    def test_needs_kramers(self):
        with pytest.raises(SymmetryViolation):
            kane_mele_z2(flatten(models.bhz(1.0), self.grid), np.eye(4))


# -- 0D and dispatch ----------------------------------------------------------

def test_negative_count():
    assert negative_count(np.diag([-1.0, -2.0, 3.0])).value == 2
    with pytest.raises(GapClosed):
        negative_count(np.diag([0.0, 1.0]))


class TestDispatch:
    def test_ssh(self):
        model, spec = models.builtin("ssh")
        r = invariant_for(model, AZClass.from_label("BDI"), 1, spec)
        assert isinstance(r, InvariantResult) and r.kind == "winding" and r.value == 1

    def test_qwz(self):
        model, spec = models.builtin("qwz")
        r = invariant_for(model, AZClass.from_label("A"), 2, spec)
        assert (r.kind, r.value) == ("chern", 1)

    def test_trivial_entry(self):
        model, spec = models.builtin("ssh")
        assert isinstance(invariant_for(model, AZClass.from_label("A"), 1, spec), NoInvariant)

    def test_unsupported_dimension(self):
        model, spec = models.builtin("ssh")
        # BDI in d=5 is a Z entry, but the model is one-dimensional
        r = invariant_for(model, AZClass.from_label("BDI"), 5, spec)
        assert isinstance(r, Unsupported)

    def test_zero_dim(self):
        model = BlochModel(0, 3, {(): np.diag([-1.0, 2.0, -3.0])})
        r = invariant_for(model, AZClass.from_label("A"), 0)
        assert (r.kind, r.value) == ("negative_count", 2)

    def test_kitaev(self):
        model, spec = models.builtin("kitaev")
        r = invariant_for(model, AZClass.from_label("D"), 1, spec)
        assert (r.kind, r.value) == ("majorana_z2", -1)

    def test_chiral_override(self):
        model = models.ssh(0.5, 1.0)
        r = invariant_for(model, AZClass.from_label("AIII"), 1, SymmetrySpec(), chiral=sz)
        assert (r.kind, r.value) == ("winding", 1)
