"""Characters of self-dual SVOAs in the chi_{1/2} basis.

A character is ``sum_r a_r chi_{1/2}^(2c-24r)`` for r = 0..k, and its shadow
is ``alpha * sum_r (-1)^r a_r chitilde_{1/2}^(2c-24r)``.  The sign comes from
chi_{1/2}(1 - 1/tau) = exp(-2 pi i/48) chitilde_{1/2}(tau): the phase of the
r-th basis element differs from the r = 0 one by exp(pi i r).  Entries of ``a`` that are
not fixed are carried symbolically: the character then becomes a
:class:`LinearSeries` whose coefficients are :class:`LinearForm` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .modchar import (
    central_charge,
    chi_half,
    chi_half_tilde,
    n1_vacuum,
    verma_generic,
    virasoro_vacuum,
)
from .qseries import (
    TICKS_PER_P,
    TICKS_PER_Q,
    QSeries,
    Scalar,
    add,
    as_rational,
    power,
    to_ticks,
)

__all__ = [
    "SVOA",
    "N1",
    "LinearForm",
    "LinearSeries",
    "CharacterSpec",
    "PrimarySeries",
    "basis_size",
    "basis_element",
    "shadow_basis_element",
    "fit_basis",
    "character",
    "shadow",
    "shadow_alpha",
    "primaries",
    "even_odd_split",
]

SVOA = "svoa"
N1 = "n1"


def basis_size(c, mode=SVOA) -> int:
    """k = floor(c/8) (SVOA) or floor(c/12) (N=1)."""
    c = central_charge(c)
    if mode == SVOA:
        return int(c // 8)
    if mode == N1:
        return int(c // 12)
    raise ValueError(f"unknown mode {mode!r}")


class LinearForm:
    """An exact affine form ``constant + sum coeffs[i] * a_i``."""

    __slots__ = ("constant", "coefficients")

    def __init__(self, constant=0, coefficients=None):
        self.constant = Scalar.coerce(constant)
        self.coefficients = {
            int(i): Scalar.coerce(v) for i, v in (coefficients or {}).items() if Scalar.coerce(v)
        }

    @property
    def variables(self):
        return sorted(self.coefficients)

    def is_constant(self) -> bool:
        return not self.coefficients

    def __add__(self, other):
        if not isinstance(other, LinearForm):
            other = LinearForm(other)
        coeffs = dict(self.coefficients)
        for i, v in other.coefficients.items():
            coeffs[i] = coeffs.get(i, Scalar(0)) + v
        return LinearForm(self.constant + other.constant, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LinearForm) else -Scalar.coerce(other))

    def scale(self, k):
        k = Scalar.coerce(k)
        return LinearForm(self.constant * k, {i: v * k for i, v in self.coefficients.items()})

    __mul__ = scale
    __rmul__ = scale

    def substitute(self, assignment) -> "LinearForm":
        """Replace the variables present in ``assignment`` by their values."""
        const = self.constant
        rest = {}
        for i, v in self.coefficients.items():
            if i in assignment:
                const = const + v * assignment[i]
            else:
                rest[i] = v
        return LinearForm(const, rest)

    def evaluate(self, assignment) -> Scalar:
        f = self.substitute(assignment)
        if not f.is_constant():
            missing = ", ".join(f"a{i}" for i in f.variables)
            raise ValueError(f"no value for {missing}")
        return f.constant

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            other = LinearForm(other)
        return self.constant == other.constant and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.constant, tuple(sorted(self.coefficients.items()))))

    def __repr__(self):
        return f"LinearForm({self})"

    def __str__(self):
        parts = []
        if self.constant or not self.coefficients:
            parts.append(str(self.constant))
        for i in self.variables:
            v = self.coefficients[i]
            vs = str(v)
            if vs == "1":
                parts.append(f"a{i}")
            elif vs == "-1":
                parts.append(f"-a{i}")
            else:
                parts.append(f"{vs}*a{i}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {
            "constant": self.constant.to_json(),
            "coefficients": {f"a{i}": self.coefficients[i].to_json() for i in self.variables},
        }


class LinearSeries:
    """A series affine in free parameters: ``base + sum_i a_i * parts[i]``."""

    def __init__(self, base: QSeries, parts=None):
        self.base = base
        self.parts = dict(parts or {})

    @property
    def prec_tick(self):
        precs = [s.prec_tick for s in [self.base, *self.parts.values()] if s.prec_tick is not None]
        return min(precs) if precs else None

    @property
    def variables(self):
        return sorted(self.parts)

    def coeff_at_tick(self, tick) -> LinearForm:
        return LinearForm(
            self.base.coeff_at_tick(tick),
            {i: s.coeff_at_tick(tick) for i, s in self.parts.items()},
        )

    def coefficient(self, exponent) -> LinearForm:
        return self.coeff_at_tick(to_ticks(exponent))

    def substitute(self, assignment):
        base = self.base
        rest = {}
        for i, s in self.parts.items():
            if i in assignment:
                base = add(base, s.scale(assignment[i]))
            else:
                rest[i] = s
        return base if not rest else LinearSeries(base, rest)

    def scale(self, k):
        return LinearSeries(self.base.scale(k), {i: s.scale(k) for i, s in self.parts.items()})

    def min_tick(self):
        ticks = [s.min_tick for s in [self.base, *self.parts.values()] if not s.is_zero()]
        return min(ticks) if ticks else None


@dataclass(frozen=True)
class CharacterSpec:
    """Central charge, mode and basis coefficients a_0..a_k.

    ``a[r]`` is ``None`` for a free (symbolic) entry.
    """

    c: Fraction
    mode: str
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", central_charge(self.c))
        k = basis_size(self.c, self.mode)
        if len(self.a) != k + 1:
            raise ValueError(f"expected {k + 1} basis coefficients, got {len(self.a)}")
        object.__setattr__(
            self, "a", tuple(None if x is None else Fraction(as_rational(x)) for x in self.a)
        )

    @property
    def k(self) -> int:
        return len(self.a) - 1

    @property
    def free(self):
        return [r for r, x in enumerate(self.a) if x is None]

    @property
    def free_from(self):
        free = self.free
        return free[0] if free else None

    def with_values(self, assignment) -> "CharacterSpec":
        a = tuple(assignment.get(r, x) if x is None else x for r, x in enumerate(self.a))
        return CharacterSpec(self.c, self.mode, a)

    def is_integral(self) -> bool:
        return all(x is not None and x.denominator == 1 for x in self.a)


@dataclass
class PrimarySeries:
    """Highest-weight multiplicities by conformal weight."""

    multiplicities: dict = field(default_factory=dict)
    heuristic: bool = False
    prec_weight: Fraction | None = None

    def __getitem__(self, h):
        h = Fraction(as_rational(h))
        if self.prec_weight is not None and h >= self.prec_weight:
            raise ValueError(f"weight {h} is beyond the extraction precision")
        return self.multiplicities.get(h, Scalar(0))

    def weights(self):
        return sorted(self.multiplicities)

    def nonzero(self):
        return {h: m for h, m in sorted(self.multiplicities.items()) if m}


# -- basis -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _basis(exp, terms):
    return power(chi_half(terms), exp)


def basis_element(c, r, terms) -> QSeries:
    """chi_{1/2}^(2c-24r) known to ``terms`` ticks past q^(-c/24)."""
    c = central_charge(c)
    exp = int(2 * c - 24 * r)
    # the leading tick moves up by 24r; keep the absolute precision fixed
    rel = terms - 24 * r
    if rel < 1:
        return QSeries.zero(-to_ticks(c / 24) + terms)
    return _basis(exp, rel)


@lru_cache(maxsize=None)
def _shadow_basis(exp, terms):
    return power(chi_half_tilde(terms), exp)


def shadow_alpha(c) -> Scalar:
    c = central_charge(c)
    return Scalar(1) if c.denominator == 1 else Scalar(0, Fraction(1, 2))


def shadow_basis_element(c, r, terms) -> QSeries:
    """alpha * chitilde^(2c-24r); plain-rational by parity of sqrt 2 powers."""
    c = central_charge(c)
    exp = int(2 * c - 24 * r)
    return _shadow_alpha_basis(exp, c.denominator == 1, terms)


@lru_cache(maxsize=None)
def _shadow_alpha_basis(exp, integral, terms):
    s = _shadow_basis(exp, terms)
    if not integral:
        s = s.scale(Scalar(0, Fraction(1, 2)))
    if not s.is_rational():
        raise ValueError("shadow basis element has a surviving sqrt2 part")
    return s


# -- operations --------------------------------------------------------------


def fit_basis(c, mode=SVOA, targets=(1,)) -> CharacterSpec:
    """Solve for the leading a_r so the character starts with ``targets``.

    ``targets[n]`` is the coefficient C_n of q^(-c/24 + n/2).  The system
    is unit lower-triangular, so back-substitution is exact.  Entries past
    ``len(targets)`` stay free.
    """
    c = central_charge(c)
    k = basis_size(c, mode)
    targets = [Scalar.coerce(t) for t in targets]
    if len(targets) > k + 1:
        raise ValueError(f"{len(targets)} targets for only {k + 1} basis coefficients")
    terms = TICKS_PER_P * len(targets)
    lo = -to_ticks(c / 24)
    a = []
    for n, t in enumerate(targets):
        acc = t
        for r in range(n):
            acc = acc - basis_element(c, r, terms).coeff_at_tick(lo + TICKS_PER_P * n) * a[r]
        a.append(acc)
    for x in a:
        if not x.is_rational():
            raise ValueError("targets must be plain-rational")
    values = [x.to_fraction() for x in a] + [None] * (k + 1 - len(a))
    return CharacterSpec(c, mode, tuple(values))


def character(spec: CharacterSpec, terms=None):
    """Expand the character; symbolic entries give a :class:`LinearSeries`."""
    terms = _default_terms(terms)
    base = QSeries.zero()
    parts = {}
    for r, x in enumerate(spec.a):
        b = basis_element(spec.c, r, terms)
        if x is None:
            parts[r] = b
        elif x:
            base = add(base, b.scale(x))
    if base.is_zero() and base.prec_tick is None:
        lo = -to_ticks(spec.c / 24)
        base = QSeries.zero(lo + terms)
    return LinearSeries(base, parts) if parts else base


def shadow(spec: CharacterSpec, terms=None):
    """Expand the shadow alpha * sum (-1)^r a_r chitilde^(2c-24r).

    ``terms`` counts ticks past the shadow's leading exponent c/12 - k.
    """
    terms = _default_terms(terms)
    base = QSeries.zero()
    parts = {}
    for r, x in enumerate(spec.a):
        # chitilde^(2c-24r) starts at q^(c/12 - r); align precision at c/12 - k
        t = terms + TICKS_PER_Q * (r - spec.k)
        if t < 1:
            b = QSeries.zero(to_ticks(spec.c / 12) - TICKS_PER_Q * spec.k + terms)
        else:
            b = shadow_basis_element(spec.c, r, t)
            if r % 2:
                b = -b
        if x is None:
            parts[r] = b
        elif x:
            base = add(base, b.scale(x))
    lo = to_ticks(spec.c / 12) - TICKS_PER_Q * spec.k
    if base.is_zero() and base.prec_tick is None:
        base = QSeries.zero(lo + terms)
    if not base.is_rational():
        raise ValueError("shadow has a nonzero sqrt2 part")
    if parts:
        return LinearSeries(base, parts)
    return base


def _default_terms(terms):
    if terms is None:
        return 8 * TICKS_PER_Q
    return int(terms)


def primaries(chi: QSeries, c, mode=SVOA, terms=None) -> PrimarySeries:
    """Peel off vacuum and generic Verma characters in increasing weight.

    Weights are measured from q^(-c/24).  Negative multiplicities are
    returned as-is.  Below c = 25 the Verma modules need not be
    irreducible and the result is flagged ``heuristic``.
    """
    c = central_charge(c)
    if not chi.is_rational():
        raise ValueError("primaries need a plain-rational character")
    if chi.prec_tick is None:
        raise ValueError("primaries need a finite precision")
    lo = -to_ticks(c / 24)
    prec = chi.prec_tick
    span = prec - lo
    if mode == SVOA:
        vac, sector = virasoro_vacuum(c, span), "plain"
    elif mode == N1:
        vac, sector = n1_vacuum(c, span), "NS"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    mult = {Fraction(0): Scalar(1)}
    rest = add(chi, -vac)
    while True:
        head = next(iter(rest.tick_items()), None)
        if head is None or head[0] >= prec:
            break
        tick, m = head
        h = Fraction(tick - lo, TICKS_PER_Q)
        if h <= 0:
            mult[h] = mult.get(h, Scalar(0)) + m
            rest = add(rest, QSeries.monomial(-m, tick))
            continue
        mult[h] = m
        rest = add(rest, verma_generic(c, h, sector, prec - tick).scale(-m))
    return PrimarySeries(mult, heuristic=c < 25, prec_weight=Fraction(span, TICKS_PER_Q))


def even_odd_split(chi: QSeries, c):
    """Split by exponent class: even part has exponents = -c/24 mod 1."""
    c = central_charge(c)
    ref = -to_ticks(c / 24)
    prec = chi.prec_tick
    even, odd = {}, {}
    for tick, v in chi.tick_items():
        (even if (tick - ref) % TICKS_PER_Q == 0 else odd)[tick] = v
    return _from_ticks(even, prec), _from_ticks(odd, prec)


def _from_ticks(d, prec):
    if not d:
        return QSeries.zero(prec)
    lo, hi = min(d), max(d)
    coeffs = [d.get(t, Scalar(0)) for t in range(lo, hi + 1)]
    return QSeries(lo, coeffs, prec)
