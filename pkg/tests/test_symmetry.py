import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from tenfold import bott, models
from tenfold.errors import ClassificationConflict, InvalidRepresentation, NonUnitary
from tenfold.model import BlochModel, KGrid
from tenfold.models import s0, sx, sz
from tenfold.symmetry import (AZ_PATTERNS, AZClass, SymmetrySpec, classify,
                              classify_report, expected_group, residual_antiunitary,
                              residual_chiral, square_sign)

GRID1 = KGrid(1, 64)
EPS = np.array([[0, -1], [1, 0]])


def constant(H):
    return BlochModel(1, len(H), {(0,): H})


class TestResiduals:
    def test_ssh_time_reversal(self):
        assert residual_antiunitary(models.ssh(0.5, 1.0), s0, "T", GRID1) < 1e-12

    def test_qwz_breaks_time_reversal(self):
        r = residual_antiunitary(models.qwz(1.0), s0, "T", KGrid(2, 16))
        assert 0.5 < r < 10

    def test_ssh_particle_hole(self):
        assert residual_antiunitary(models.ssh(0.5, 1.0), sz, "C", GRID1) < 1e-12

    @pytest.mark.parametrize("v,w", [(0.5, 1.0), (1.7, 0.3), (1.0, 1.0)])
    def test_ssh_chiral(self, v, w):
        assert residual_chiral(models.ssh(v, w), sz, GRID1) < 1e-12

    def test_commuting_operator_fails(self):
        assert residual_chiral(constant(sz), sz, GRID1) == pytest.approx(2.0)

    def test_anticommuting_operator_passes(self):
        assert residual_chiral(constant(sz), sx, GRID1) < 1e-12

    def test_non_unitary_rejected(self):
        with pytest.raises(NonUnitary):
            residual_chiral(models.ssh(), 2 * sz, GRID1)
        with pytest.raises(NonUnitary):
            residual_antiunitary(models.ssh(), 2 * sz, "T", GRID1)


class TestSquareSign:
    def test_examples(self):
        assert square_sign(np.eye(2)) == 1
        assert square_sign(EPS) == -1
        assert square_sign(sx) == 1

    def test_invalid(self):
        with pytest.raises(InvalidRepresentation):
            square_sign(np.array([[0, 1], [1j, 0]]))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([np.eye(2), EPS, sx, 1j * sz]))
    def test_basis_covariance(self, seed, U):
        V = unitary_group.rvs(2, random_state=seed)
        assert square_sign(V @ U @ V.T) == square_sign(U)


class TestClassify:
    def test_ssh_bdi(self):
        az = classify(models.ssh(0.5, 1.0), SymmetrySpec(s0, sz, sz))
        assert (az.label, az.family, az.s) == ("BDI", "real", 1)

    def test_qwz_falls_back_to_a(self):
        report = classify_report(models.qwz(1.0), SymmetrySpec(s0, sz, sz), KGrid(2, 21))
        assert (report.az.label, report.az.family, report.az.s) == ("A", "complex", 0)
        assert report.rejected == ["C", "S", "T"]

    def test_kitaev_real_pairing_is_bdi(self):
        assert classify(models.kitaev(1, 1, 1), SymmetrySpec(tr=s0, ph=sx)).label == "BDI"

    def test_kitaev_canonical_is_d(self):
        model, spec = models.builtin("kitaev")
        assert classify(model, spec).label == "D"

    def test_conflict(self):
        # T and C hold, but the supplied chiral operator is wrong
        with pytest.raises(ClassificationConflict):
            classify(models.ssh(0.5, 1.0), SymmetrySpec(s0, sz, sx))

    def test_implied_chiral_passes(self):
        spec = SymmetrySpec(s0, sz)
        assert residual_chiral(models.ssh(0.5, 1.0), spec.implied_chiral, GRID1) < 1e-7

    @pytest.mark.parametrize("label", sorted(AZ_PATTERNS.values()))
    def test_every_pattern(self, label):
        model, spec = models.random_class_model(label, bands=4, dim=1, rng=7)
        assert classify(model, spec).label == label

    @pytest.mark.parametrize("label", ["AI", "BDI", "DIII", "CII", "C", "AIII"])
    def test_basis_invariance(self, label):
        model, spec = models.random_class_model(label, bands=4, rng=3)
        rng = np.random.default_rng(11)
        for _ in range(3):
            V = unitary_group.rvs(4, random_state=rng)
            assert classify(model.transformed(V), spec.transformed(V)).label == label

    def test_from_label_matches_table_rows(self):
        order = {"A": 0, "AIII": 1, "AI": 0, "BDI": 1, "D": 2, "DIII": 3,
                 "AII": 4, "CII": 5, "C": 6, "CI": 7}
        for label, s in order.items():
            az = AZClass.from_label(label)
            assert az.s == s
            assert bott.LABELS[az.family][s] == label


class TestExpectedGroup:
    @pytest.mark.parametrize("label,d,group", [
        ("D", 1, "Z2"), ("A", 3, "0"), ("CII", 1, "Z")])
    def test_table_entries(self, label, d, group):
        assert str(expected_group(AZClass.from_label(label), d)) == group
