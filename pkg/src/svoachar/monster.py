"""Monster bookkeeping for the hypothetical extremal c = 48 VOA.

The embedded table holds dimensions of the first eight irreducible
representations and, where the McKay-Thompson series pin them down, their
2A and 2B character values.  Loading runs every dimension and trace
consistency sum as a gate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .modchar import j_invariant, mckay_thompson
from .qseries import TICKS_PER_P, TICKS_PER_Q, QSeries, Scalar, as_rational, mul, to_ticks
from .svoa import even_odd_split

__all__ = [
    "MonsterData",
    "MonsterDataError",
    "Decomposition",
    "load_monster_data",
    "extremal_voa_character",
    "trace_on_W",
    "fixpoint_character",
    "check_decomposition",
    "obstruction_pipeline_c48",
    "V_DECOMPOSITION",
    "VPRIME_DECOMPOSITION",
    "N1_CHARACTER_C48",
    "N1_SHADOW_C48",
]

COLUMNS = ("index", "dimension", "trace2A", "trace2B")
CLASSES = ("1A", "2A", "2B")

# Coefficients of the extremal N=1 character and shadow at c = 48, from q^-2
# in steps of q^(1/2) (character) and q^1 (shadow).
N1_CHARACTER_C48 = (1, 0, 0, 1, 1, 196884, 21493760, 864299970, 20246053140, 333202640600,
                    4252023300096)
N1_SHADOW_C48 = (0, 0, 1, 42987520, 40491712512, 8504046600192)

# Graded pieces of the moonshine module: q-power -> multiplicities.
_MOONSHINE = {
    1: {1: 1, 2: 1},
    2: {1: 1, 2: 1, 3: 1},
    3: {1: 2, 2: 2, 3: 1, 4: 1},
}


class MonsterDataError(ValueError):
    pass


@dataclass(frozen=True)
class MonsterData:
    dims: tuple
    traces: dict  # class -> {index: value}; absent entries are unknown

    def dim(self, i: int) -> int:
        return self.dims[i - 1]

    @property
    def traces_R2(self):
        return {"1A": self.dims[1], "2A": self.traces["2A"][2], "2B": self.traces["2B"][2]}

    def trace(self, cls: str, i: int) -> int:
        if cls == "1A":
            return self.dim(i)
        try:
            return self.traces[cls][i]
        except KeyError:
            raise KeyError(f"no {cls} character value for R{i}") from None


@dataclass
class Decomposition:
    """Ordered (degree, {irrep index: multiplicity}, label) entries."""

    entries: list = field(default_factory=list)

    def __post_init__(self):
        cleaned = []
        for e in self.entries:
            degree, mult = e[0], e[1]
            label = e[2] if len(e) > 2 else None
            degree = Fraction(as_rational(degree))
            mult = {int(i): int(m) for i, m in mult.items()}
            if any(m < 0 for m in mult.values()):
                raise ValueError("multiplicities must be nonnegative")
            cleaned.append((degree, mult, label if label is not None else _fs(degree)))
        self.entries = cleaned

    @classmethod
    def positional(cls, rows, step=Fraction(1, 2), labels=None):
        labels = labels or [None] * len(rows)
        return cls([(step * i, m, lab) for i, (m, lab) in enumerate(zip(rows, labels))])

    @classmethod
    def from_json(cls, obj):
        return cls([(e["degree"], e["irreps"], e.get("label")) for e in obj["entries"]])

    def to_json(self):
        return {
            "entries": [
                {"degree": _fs(d), "label": lab, "irreps": {str(i): m for i, m in sorted(mu.items())}}
                for d, mu, lab in self.entries
            ]
        }


def _fs(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# The lists for V (degrees 0, 1/2, ..., 5) and V' (degrees 0, 1, ..., 5).
# The tenth V entry carries the label "7/2" but sits at degree 9/2.
V_DECOMPOSITION = Decomposition.positional(
    [
        {1: 1},
        {},
        {},
        {1: 1},
        {1: 1},
        {1: 1, 2: 1},
        {1: 1, 2: 1, 3: 1},
        {1: 2, 2: 2, 3: 1, 4: 1},
        {1: 4, 2: 4, 3: 1, 4: 2, 5: 1},
        {1: 5, 2: 5, 3: 2, 4: 3, 5: 2, 7: 1},
        {1: 5, 2: 7, 3: 4, 4: 4, 5: 2, 6: 2, 7: 1, 8: 1},
    ],
    labels=["0", "1/2", "1", "3/2", "2", "5/2", "3", "7/2", "4", "7/2 (printed label)", "5"],
)
VPRIME_DECOMPOSITION = Decomposition.positional(
    [
        {},
        {},
        {1: 1},
        {1: 2, 2: 2, 3: 2},
        {1: 4, 2: 6, 3: 4, 4: 2, 6: 2},
        {1: 6, 2: 14, 3: 12, 4: 4, 6: 8, 7: 2, 8: 2},
    ],
    step=Fraction(1),
)


# -- loading -------------------------------------------------------------------


def _parse_int(text, what):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise MonsterDataError(f"{what}: {text!r} is not an integer") from None


def load_monster_data(path=None) -> MonsterData:
    """Read and validate ``index,dimension,trace2A,trace2B`` rows."""
    if path is None:
        text = resources.files(__package__).joinpath("data/monster.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != COLUMNS:
        raise MonsterDataError(f"expected columns {','.join(COLUMNS)}, got {reader.fieldnames}")
    dims, traces = {}, {"2A": {}, "2B": {}}
    for row in reader:
        i = _parse_int(row["index"], "index")
        if i in dims:
            raise MonsterDataError(f"duplicate index {i}")
        dims[i] = _parse_int(row["dimension"], f"R{i} dimension")
        for cls in ("2A", "2B"):
            cell = (row[f"trace{cls}"] or "").strip()
            if cell:
                traces[cls][i] = _parse_int(cell, f"R{i} trace {cls}")
    if sorted(dims) != list(range(1, 9)):
        raise MonsterDataError(f"expected indices 1..8, got {sorted(dims)}")
    data = MonsterData(tuple(dims[i] for i in range(1, 9)), traces)
    _validate(data)
    return data


def _validate(data: MonsterData):
    d = data.dim
    if d(1) != 1:
        raise MonsterDataError("R1 must be the trivial representation")
    if d(2) != 196883:
        raise MonsterDataError(f"R2 has dimension {d(2)}, expected 196883")
    if any(x <= 0 for x in data.dims):
        raise MonsterDataError("dimensions must be positive")
    j = j_invariant(True, 5 * TICKS_PER_Q)
    for n, mult in _MOONSHINE.items():
        if sum(m * d(i) for i, m in mult.items()) != j.coeff_at_tick(TICKS_PER_Q * n):
            raise MonsterDataError(f"moonshine module degree {n} does not match J")
    for cls in ("2A", "2B"):
        if data.traces[cls].get(1, 1) != 1:
            raise MonsterDataError(f"trivial representation has {cls} trace != 1")
        if 2 not in data.traces[cls]:
            raise MonsterDataError(f"R2 needs a {cls} character value")
        T = mckay_thompson(cls, 5 * TICKS_PER_Q)
        for n, mult in _MOONSHINE.items():
            if all(i in data.traces[cls] for i in mult):
                tr = sum(m * data.traces[cls][i] for i, m in mult.items())
                if tr != T.coeff_at_tick(TICKS_PER_Q * n):
                    raise MonsterDataError(f"{cls} traces disagree with T_{cls} at q^{n}")
    for dec, coeffs, step, name in (
        (V_DECOMPOSITION, N1_CHARACTER_C48, TICKS_PER_P, "V"),
        (VPRIME_DECOMPOSITION, N1_SHADOW_C48, TICKS_PER_Q, "V'"),
    ):
        for (degree, mult, label), want in zip(dec.entries, coeffs):
            if sum(m * d(i) for i, m in mult.items()) != want:
                raise MonsterDataError(f"{name}_{label} sum does not match {want}")


_DATA = None


def default_data() -> MonsterData:
    global _DATA
    if _DATA is None:
        _DATA = load_monster_data()
    return _DATA


# -- series -------------------------------------------------------------------


def _terms(terms):
    return 6 * TICKS_PER_Q if terms is None else int(terms)


def extremal_voa_character(terms=None) -> QSeries:
    """J^2 - 393767; ``terms`` counts ticks past q^-2."""
    J = j_invariant(True, _terms(terms))
    return mul(J, J) - 393767


def trace_on_W(cls, terms=None, data: MonsterData | None = None) -> QSeries:
    """T_g^2 - (2 tr(g|R2) + 1)."""
    cls = str(cls).upper()
    if cls not in CLASSES:
        raise ValueError(f"class must be one of {CLASSES}")
    data = data or default_data()
    T = mckay_thompson(cls, _terms(terms))
    return mul(T, T) - (2 * data.trace(cls, 2) + 1)


def fixpoint_character(cls, terms=None, data: MonsterData | None = None) -> QSeries:
    """(chi_W + tr(g|W)) / 2."""
    chi = extremal_voa_character(terms)
    return (chi + trace_on_W(cls, terms, data)).scale(Fraction(1, 2))


# -- decompositions -----------------------------------------------------------


@dataclass
class DecompositionCheck:
    label: str
    degree: Fraction
    total: int
    expected: Scalar | None
    match: bool

    def to_json(self):
        return {
            "label": self.label,
            "degree": _fs(self.degree),
            "sum": str(self.total),
            "coefficient": None if self.expected is None else str(self.expected),
            "match": self.match,
        }


def check_decomposition(dec: Decomposition, chi: QSeries, base_exponent, data: MonsterData | None = None):
    """Compare sum(multiplicity * dim) with the coefficient at base + degree."""
    data = data or default_data()
    base = Fraction(as_rational(base_exponent))
    out = []
    for degree, mult, label in dec.entries:
        total = sum(m * data.dim(i) for i, m in mult.items())
        try:
            want = chi.coeff_at_tick(to_ticks(base + degree))
        except ValueError:
            want = None
        out.append(DecompositionCheck(label, degree, total, want, want is not None and want == total))
    return out


# -- the obstruction ----------------------------------------------------------


def _first(series: QSeries, start_tick, count, step=TICKS_PER_Q):
    return [series.coeff_at_tick(start_tick + step * i) for i in range(count)]


def obstruction_pipeline_c48(cls="2A", terms=None, data: MonsterData | None = None) -> dict:
    """Match the fixpoint character of an involution with the c = 48 families.

    Conditional on the Z2-orbifold assumption (fusion algebra Z[Z2 x Z2],
    case I), the fixpoint subalgebra is the even part of a self-dual SVOA of
    minimal weight 5/2, and its shadow weight decides the verdict.
    """
    from .bounds import noneighbour_check

    cls = str(cls).upper()
    terms = _terms(terms)
    fix = fixpoint_character(cls, terms, data)
    report = {
        "class": cls,
        "fixpoint": [str(x) for x in _first(fix, -96, 6)],
        "assumptions": [
            "W = V^natural (x) V^natural - (2 R2 + R1) as graded monster modules",
            "Z2-orbifold conjecture: the fixpoint subalgebra has fusion algebra Z[Z2 x Z2], case I",
        ],
    }
    if cls == "1A":
        report.update(match=None, verdict="identity element: fixpoint character is chi_W, no claim")
        return report
    from .bounds import c48_family_series

    neighbours = noneighbour_check()
    matches = []
    rows = {}
    for idx, fam in sorted(neighbours.families.items()):
        chi, sh = c48_family_series(fam["a"].get(5), fam["a"].get(6), terms)
        even, _ = even_odd_split(chi, 48)
        n = min(6, (min(even.prec_tick, fix.prec_tick) + 96) // TICKS_PER_Q)
        same = _first(even, -96, n) == _first(fix, -96, n)
        lead = next(iter(sh.tick_items()))[0]
        weight = Fraction(lead, TICKS_PER_Q) + 2
        rows[idx] = {"even_part": [str(x) for x in _first(even, -96, n)], "matches": same,
                     "shadow_weight": _fs(weight)}
        if same:
            matches.append((idx, weight))
    report["families"] = rows
    report["match"] = [i for i, _ in matches]
    if len(matches) != 1:
        report["verdict"] = "no unique family match; no conclusion"
    else:
        idx, weight = matches[0]
        if weight == 1:
            report["verdict"] = (
                f"matches even part of family {idx}; a minimal-weight-5/2 SVOA at c = 48 must have "
                "shadow weight 2, so shadow weight 1 is excluded; contradiction: the monster cannot "
                "act on W as assumed"
            )
            report["contradiction"] = True
        else:
            report["verdict"] = f"matches even part of family {idx} (shadow weight {_fs(weight)}); no contradiction"
            report["contradiction"] = False
    report["note"] = (
        "the exclusion of shadow weight 1 uses a Heisenberg-subalgebra argument that is cited, "
        "not mechanised; the character-level input is the two-family classification"
    )
    return report
