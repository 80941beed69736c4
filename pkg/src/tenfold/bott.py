"""Periodic-table engine.

Only the zeroth homotopy groups of the classifying spaces are stored.  The
group of a class at dimension ``d`` is read off the Bott clock,
``pi0(R_{(s - d) mod 8})`` (real) or ``pi0(C_{(s - d) mod 2})`` (complex); the
loop and suspension operators act as index shifts ``s -> s+1`` and
``d -> d+1``.
"""
import enum
import itertools
from dataclasses import dataclass


class InvariantGroup(enum.Enum):
    Z = "Z"
    Z2 = "Z2"
    ZERO = "0"

    def __str__(self):
        return self.value

    @property
    def trivial(self):
        return self is InvariantGroup.ZERO


Z, Z2, ZERO = InvariantGroup.Z, InvariantGroup.Z2, InvariantGroup.ZERO

PERIOD = {"complex": 2, "real": 8}
LABELS = {
    "complex": ("A", "AIII"),
    "real": ("AI", "BDI", "D", "DIII", "AII", "CII", "C", "CI"),
}


def period(family):
    try:
        return PERIOD[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


@dataclass(frozen=True)
class ClassifyingSpace:
    family: str
    s: int
    label: str
    pi0: InvariantGroup


CLASSIFYING_SPACES = (
    ClassifyingSpace("complex", 0, "U(2n)/(U(n)×U(n))×Z", Z),
    ClassifyingSpace("complex", 1, "U(n)", ZERO),
    ClassifyingSpace("real", 0, "{O(2n)/(O(n)×O(n))}×Z", Z),
    ClassifyingSpace("real", 1, "O(16n)", Z2),
    ClassifyingSpace("real", 2, "O(16n)/U(8n)", Z2),
    ClassifyingSpace("real", 3, "U(8n)/Sp(4n)", ZERO),
    ClassifyingSpace("real", 4, "{Sp(4n)/(Sp(2n)×Sp(2n))}×Z", Z),
    ClassifyingSpace("real", 5, "Sp(2n)", ZERO),
    ClassifyingSpace("real", 6, "Sp(2n)/U(2n)", ZERO),
    ClassifyingSpace("real", 7, "U(2n)/O(2n)", ZERO),
)
_SPACES = {(c.family, c.s): c for c in CLASSIFYING_SPACES}

# Verbatim periodic table, rows in s order, columns d = 0..7.
PERIODIC_TABLE = {
    ("complex", 0): "Z 0 Z 0 Z 0 Z 0",
    ("complex", 1): "0 Z 0 Z 0 Z 0 Z",
    ("real", 0): "Z 0 0 0 Z 0 Z2 Z2",
    ("real", 1): "Z2 Z 0 0 0 Z 0 Z2",
    ("real", 2): "Z2 Z2 Z 0 0 0 Z 0",
    ("real", 3): "0 Z2 Z2 Z 0 0 0 Z",
    ("real", 4): "Z 0 Z2 Z2 Z 0 0 0",
    ("real", 5): "0 Z 0 Z2 Z2 Z 0 0",
    ("real", 6): "0 0 Z 0 Z2 Z2 Z 0",
    ("real", 7): "0 0 0 Z 0 Z2 Z2 Z",
}


def reference_table(rows=None):
    """Expand the verbatim rows into ``{(family, s, d): InvariantGroup}``."""
    rows = PERIODIC_TABLE if rows is None else rows
    out = {}
    for (family, s), row in rows.items():
        for d, cell in enumerate(row.split()):
            out[family, s, d] = InvariantGroup(cell)
    return out


def classifying_space(family, s):
    return _SPACES[family, s % period(family)]


def pi0(family, s):
    """Zeroth homotopy group of the classifying space ``(family, s)``."""
    return classifying_space(family, s).pi0


def group_at(family, s, d):
    """Classification group of symmetry index ``s`` in dimension ``d``."""
    return pi0(family, (s - d) % period(family))


@dataclass(frozen=True)
class TableIndex:
    family: str
    s: int
    d: int

    def __post_init__(self):
        p = period(self.family)
        object.__setattr__(self, "s", self.s % p)
        object.__setattr__(self, "d", self.d % p)

    @property
    def label(self):
        return LABELS[self.family][self.s]

    @property
    def group(self):
        return group_at(self.family, self.s, self.d)


def loop_shift(idx):
    """Loop space one step along the symmetry axis: ``s -> s+1``."""
    return TableIndex(idx.family, idx.s + 1, idx.d)


def suspend_shift(idx):
    """Suspension one step along the dimension axis: ``d -> d+1``."""
    return TableIndex(idx.family, idx.s, idx.d + 1)


def all_indices():
    for family in ("complex", "real"):
        p = period(family)
        for s, d in itertools.product(range(p), range(8)):
            yield family, s, d


@dataclass
class TableReport:
    grid: dict
    diff: list

    @property
    def matches(self):
        return len(self.grid) - len(self.diff)


def generate_table(reference=None):
    """Regenerate the 2x8 complex and 8x8 real grids from the Bott clock and
    diff them against ``reference`` (the embedded table by default).

    Each diff entry is ``(family, s, d, generated, expected)``.
    """
    ref = reference_table() if reference is None else reference
    grid = {key: group_at(*key) for key in all_indices()}
    diff = [(*key, grid[key], ref.get(key)) for key in grid if grid[key] != ref.get(key)]
    return TableReport(grid, diff)


def table_lookup(table):
    """Wrap a tabulated grid as a ``(family, s, d)`` lookup with index reduction."""
    def lookup(family, s, d):
        return table[family, s % period(family), d % 8]
    return lookup


def check_periodicities(lookup=group_at):
    """Exhaustively test the (1,1), d- and s-periodicities.

    Returns ``{name: bool}``.  ``lookup`` may be :func:`table_lookup` of a
    tabulated grid to check the table rather than the clock.
    """
    ok = {"(1,1)": True, "d-period": True, "s-period": True}
    for family, s, d in all_indices():
        p = period(family)
        g = lookup(family, s, d)
        ok["(1,1)"] &= lookup(family, s + 1, d + 1) == g
        ok["d-period"] &= lookup(family, s, d + p) == g
        ok["s-period"] &= lookup(family, s + p, d) == g
    return ok
