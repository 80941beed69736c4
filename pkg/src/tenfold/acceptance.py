"""Acceptance criteria, runnable from tests and from ``tenfold selfcheck``.

Every criterion returns a :class:`Criterion` with a one-line detail string.
Tolerances and time budgets are fixed here and nowhere else.
"""
import time
from dataclasses import dataclass

import numpy as np

from . import bott, clifford, invariants, models, suspension
from .model import KGrid, flatten
from .symmetry import classify

# pi0 of the classifying spaces, copied independently of bott.CLASSIFYING_SPACES
PI0_COLUMN = {
    "complex": ["Z", "0"],
    "real": ["Z", "Z2", "Z2", "0", "Z", "0", "0", "0"],
}


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.number}] {self.name}: {self.detail}"


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def table_regeneration():
    report, dt = _timed(bott.generate_table)
    cells = ", ".join(f"{f} s={s} d={d}: got {g}, table {e}" for f, s, d, g, e in report.diff)
    ok = not report.diff and len(report.grid) == 80 and dt < 0.010
    detail = f"{report.matches}/80 match in {dt * 1e3:.2f} ms"
    if cells:
        detail += f"; mismatched {cells}"
    return Criterion(1, "table regeneration", ok, detail)


def bott_clock():
    clock = bott.check_periodicities()
    tab = bott.check_periodicities(bott.table_lookup(bott.reference_table()))
    ok = all(clock.values()) and all(tab.values())
    detail = "; ".join(f"{k}: {'pass' if clock[k] and tab[k] else 'fail'}" for k in clock)
    return Criterion(2, "Bott-clock identities", ok, detail)


def table2_consistency():
    bad = [(f, s) for f, col in PI0_COLUMN.items() for s, g in enumerate(col)
           if str(bott.pi0(f, s)) != g]
    return Criterion(3, "classifying-space pi0 column", not bad,
                     f"{10 - len(bad)}/10 classifying spaces" + (f"; bad {bad}" if bad else ""))


def clifford_suite():
    t0 = time.perf_counter()
    cs = clifford.generate(8)
    res = clifford.clifford_residual(cs)
    mids = [clifford.midpoint_residual(cs, i) for i in range(7)]
    nest = all(clifford.is_complex_structure(cs.J[m], cs.J[:m]) for m in range(len(cs.J)))
    dt = time.perf_counter() - t0
    ok = res < 1e-12 and max(mids) < 1e-12 and nest and dt < 5.0
    return Criterion(4, "Clifford suite", ok,
                     f"N={cs.N} residual={res:.1e} max midpoint={max(mids):.1e} "
                     f"nesting={'pass' if nest else 'fail'} in {dt:.2f} s")


def winding_sweep():
    grid = KGrid(1, 201)
    failures, slowest = [], 0.0
    for v in np.round(np.arange(0.1, 1.95, 0.1), 10):
        if v == 1.0:
            continue
        model = models.ssh(v, 1.0)
        r, dt = _timed(invariants.winding, model, models.sz, grid)
        slowest = max(slowest, dt)
        if r.value != (1 if v < 1 else 0) or dt >= 0.050:
            failures.append(v)
    return Criterion(5, "SSH winding sweep", not failures,
                     f"{len(failures)}/18 failures, slowest {slowest * 1e3:.1f} ms"
                     + (f"; failed v={failures}" if failures else ""))


def chern_sweep():
    expected = {-3: 0, -1: -1, 1: 1, 3: 0}
    failures, slowest = [], 0.0
    for m, c in expected.items():
        values = []
        for pts in (61, 121):
            r, dt = _timed(lambda: invariants.chern(flatten(models.qwz(m), KGrid(2, pts))))
            slowest = max(slowest, dt)
            values.append(r.value)
            if r.residual >= 1e-3 or dt >= 1.0:
                failures.append((m, pts))
        if values != [c, c]:
            failures.append((m, values))
    return Criterion(6, "QWZ Chern sweep", not failures,
                     f"C(m=-3,-1,1,3) expected {list(expected.values())}, "
                     f"slowest {slowest:.2f} s" + (f"; failed {failures}" if failures else ""))


def majorana_sweep():
    got = {mu: invariants.majorana_z2(models.kitaev(1.0, 1.0, mu), models.sx).value
           for mu in (0.5, 1.0, 1.5, 2.5, 3.0)}
    ok = all(v == (-1 if mu < 2 else 1) for mu, v in got.items())
    return Criterion(7, "Kitaev Majorana number", ok,
                     " ".join(f"mu={mu}:{v:+d}" for mu, v in got.items()))


def kane_mele():
    grid = KGrid(2, 200)  # 101 Wilson lines for k_y in [0, pi]
    U_T = models.bhz_symmetries().tr
    got = {m: invariants.kane_mele_z2(flatten(models.bhz(m), grid), U_T, models.bhz(m)).value
           for m in (1.0, 3.0)}
    ok = got == {1.0: 1, 3.0: 0}
    return Criterion(8, "BHZ Kane-Mele Z2", ok,
                     f"m=1 -> {got[1.0]}, m=3 -> {got[3.0]} with 101 Wilson lines")


INTEGER_KINDS = {"chern", "winding", "negative_count"}
BINARY_KINDS = {"majorana_z2", "kane_mele_z2"}
# (params in the topological regime, params in the trivial regime)
REGIMES = {
    "ssh": ({"v": 0.5}, {"v": 1.5}),
    "qwz": ({"m": 1.0}, {"m": 3.0}),
    "kitaev": ({"mu": 1.0}, {"mu": 3.0}),
    "bhz": ({"m": 1.0}, {"m": 3.0}),
    "rice-mele": ({"phi": 0.25 * np.pi}, {"phi": 0.75 * np.pi}),
}


def _nontrivial(result):
    if result.kind == "majorana_z2":
        return result.value == -1
    return result.value != 0


def coherence():
    problems = []
    for name, regimes in REGIMES.items():
        for topological, params in zip((True, False), regimes):
            model, spec = models.builtin(name, **params)
            az = classify(model, spec)
            group = bott.group_at(az.family, az.s, model.dim)
            result = invariants.invariant_for(model, az, model.dim, spec)
            if group is bott.ZERO:
                if not isinstance(result, invariants.NoInvariant):
                    problems.append(f"{name}: expected no invariant")
                continue
            if not isinstance(result, invariants.InvariantResult) or result.group is not group:
                problems.append(f"{name}: got {result}")
                continue
            kinds = INTEGER_KINDS if group is bott.Z else BINARY_KINDS
            if result.kind not in kinds:
                problems.append(f"{name}: kind {result.kind} for group {group}")
            if _nontrivial(result) != topological:
                problems.append(f"{name}{params}: value {result.value}")
    return Criterion(9, "classification coherence", not problems,
                     "5 builtins x 2 regimes" + (f"; {problems}" if problems else ""))


def suspension_suite():
    problems = []
    grid = KGrid(1, 201)
    half = suspension.build_interpolation(flatten(models.ssh(1.5, 1.0), grid), models.sx)
    full = suspension.extend_symmetric(half, "C", models.sz)
    if not full.extension_residual < 1e-12:
        problems.append(f"extension residual {full.extension_residual:.2e}")
    pump = suspension.pump_family_from_model(models.qwz(1.0), 61, 61)
    c, c_rev = (suspension.pump_chern(f).value for f in (pump, suspension.reverse_theta(pump)))
    if (c, c_rev) != (1, -1):
        problems.append(f"pump chern {c}, reversed {c_rev}")
    vs = (0.2, 0.5, 0.8, 1.3, 1.7)
    samples = {v: flatten(models.ssh(v, 1.0), grid) for v in vs}
    wrong = 0
    for v1 in vs:
        for v2 in vs:
            same = (v1 < 1) == (v2 < 1)
            try:
                suspension.build_interpolation(samples[v1], samples[v2])
                obstructed = False
            except suspension.Obstruction:
                obstructed = True
            wrong += obstructed == same
    if wrong:
        problems.append(f"{wrong}/25 obstruction mismatches")
    return Criterion(10, "suspension suite", not problems,
                     f"extension residual {full.extension_residual:.1e}, pump {c:+d}/{c_rev:+d}, "
                     f"obstruction grid {25 - wrong}/25" + (f"; {problems}" if problems else ""))


CRITERIA = (table_regeneration, bott_clock, table2_consistency, clifford_suite,
            winding_sweep, chern_sweep, majorana_sweep, kane_mele, coherence,
            suspension_suite)


def run_all():
    out = []
    for fn in CRITERIA:
        try:
            out.append(fn())
        except Exception as exc:  # a crash is a failure, reported on its line
            number = CRITERIA.index(fn) + 1
            out.append(Criterion(number, fn.__name__, False, f"error: {exc!r}"))
    return out
