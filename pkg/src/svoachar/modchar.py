"""Builders for the named q-series: fermion characters, vacuum and Verma
characters, eta products, the j-function and McKay-Thompson series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qseries import (
    TICKS_PER_P,
    TICKS_PER_Q,
    QSeries,
    as_rational,
    invert,
    mul,
    power,
    resolve_terms,
    to_ticks,
)

__all__ = [
    "CharName",
    "central_charge",
    "chi_half",
    "chi_half_tilde",
    "virasoro_vacuum",
    "n1_vacuum",
    "verma_generic",
    "eta",
    "eisenstein",
    "j_invariant",
    "hauptmodul_u",
    "mckay_thompson",
    "build",
    "MT_CLASSES",
]

MT_CLASSES = ("1A", "2A", "2B")


def central_charge(c) -> Fraction:
    """Parse and validate c in (1/2)Z, c > 0."""
    c = Fraction(as_rational(c))
    if (2 * c).denominator != 1:
        raise ValueError(f"central charge {c} is not a half-integer")
    if c <= 0:
        raise ValueError("central charge must be positive")
    return c


@dataclass(frozen=True)
class CharName:
    """Tag naming one of the builder outputs (used by the CLI)."""

    tag: str
    c: Fraction | None = None
    h: Fraction | None = None
    sector: str = "plain"
    scale: int = 1
    cls: str | None = None


# -- integer product kernels -------------------------------------------------
# Each returns the first ``n`` coefficients in a variable x.


def _distinct(n, parts):
    """prod (1 + x^e) over e in parts."""
    v = [0] * n
    v[0] = 1
    for e in parts:
        if e >= n:
            continue
        for i in range(n - 1, e - 1, -1):
            v[i] += v[i - e]
    return v


def _unrestricted(n, parts, v=None):
    """prod (1 - x^e)^-1 over e in parts, optionally times an existing list."""
    if v is None:
        v = [0] * n
        v[0] = 1
    for e in parts:
        if e >= n:
            continue
        for i in range(e, n):
            v[i] += v[i - e]
    return v


def _pochhammer(n, parts):
    """prod (1 - x^e) over e in parts."""
    v = [0] * n
    v[0] = 1
    for e in parts:
        if e >= n:
            continue
        for i in range(n - 1, e - 1, -1):
            v[i] -= v[i - e]
    return v


def _count(terms, step):
    return -(-terms // step)


# -- named series -----------------------------------------------------------


@lru_cache(maxsize=None)
def _chi_half(terms):
    n = _count(terms, TICKS_PER_P)
    v = _distinct(n, range(1, n, 2))
    return QSeries.from_strided(-1, TICKS_PER_P, v, None, -1 + terms)


def chi_half(terms=None) -> QSeries:
    """q^(-1/48) prod_{n>=0} (1 + q^(n+1/2)), the single-fermion character."""
    return _chi_half(resolve_terms(terms))


@lru_cache(maxsize=None)
def _chi_half_tilde(terms):
    n = _count(terms, TICKS_PER_Q)
    v = _distinct(n, range(1, n))
    return QSeries.from_strided(2, TICKS_PER_Q, [0] * n, v, 2 + terms)


def chi_half_tilde(terms=None) -> QSeries:
    """sqrt2 q^(1/24) prod_{n>=1} (1 + q^n), the twisted fermion character.

    The product starts at n = 1; with an extra n = 0 factor the leading
    coefficient of the 24th power would be 2^36 instead of 2^12.
    """
    return _chi_half_tilde(resolve_terms(terms))


@lru_cache(maxsize=None)
def _virasoro_vacuum(c, terms):
    n = _count(terms, TICKS_PER_Q)
    v = _unrestricted(n, range(2, n))
    lo = -to_ticks(c / 24)
    return QSeries.from_strided(lo, TICKS_PER_Q, v, None, lo + terms)


def virasoro_vacuum(c, terms=None) -> QSeries:
    """q^(-c/24) prod_{n>=2} (1 - q^n)^-1, the character of M(c,0)/M(c,1)."""
    return _virasoro_vacuum(central_charge(c), resolve_terms(terms))


@lru_cache(maxsize=None)
def _n1_vacuum(c, terms):
    n = _count(terms, TICKS_PER_P)
    v = _distinct(n, range(3, n, 2))
    v = _unrestricted(n, range(4, n, 2), v)
    lo = -to_ticks(c / 24)
    return QSeries.from_strided(lo, TICKS_PER_P, v, None, lo + terms)


def n1_vacuum(c, terms=None) -> QSeries:
    """q^(-c/24) prod_{n>=2} (1 + q^(n-1/2)) / (1 - q^n)."""
    return _n1_vacuum(central_charge(c), resolve_terms(terms))


@lru_cache(maxsize=None)
def _verma(c, h, sector, terms):
    lo = to_ticks(h - c / 24)
    if sector == "plain":
        n = _count(terms, TICKS_PER_Q)
        v = _unrestricted(n, range(1, n))
        return QSeries.from_strided(lo, TICKS_PER_Q, v, None, lo + terms)
    if sector == "NS":
        n = _count(terms, TICKS_PER_P)
        v = _distinct(n, range(1, n, 2))
        v = _unrestricted(n, range(2, n, 2), v)
        return QSeries.from_strided(lo, TICKS_PER_P, v, None, lo + terms)
    raise ValueError(f"unknown sector {sector!r}; expected 'plain' or 'NS'")


def verma_generic(c, h, sector="plain", terms=None) -> QSeries:
    """Character of a generic (irreducible) Verma module of weight h.

    ``plain``: q^(h-c/24) / prod_{n>=1}(1-q^n); ``NS`` additionally carries
    prod_{n>=1}(1+q^(n-1/2)).
    """
    h = Fraction(as_rational(h))
    to_ticks(h)
    return _verma(central_charge(c), h, sector, resolve_terms(terms))


def eta(scale=1, terms=None) -> QSeries:
    """eta(q^scale) = q^(scale/24) prod_{n>=1} (1 - q^(scale*n))."""
    terms = resolve_terms(terms)
    n = _count(terms, TICKS_PER_Q)
    v = _pochhammer(n, range(scale, n, scale))
    lo = 2 * scale
    return QSeries.from_strided(lo, TICKS_PER_Q, v, None, lo + terms)


def _sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def eisenstein(weight, terms=None) -> QSeries:
    """Normalised Eisenstein series E4 or E6 from divisor sums."""
    consts = {4: 240, 6: -504}
    if weight not in consts:
        raise ValueError("only weights 4 and 6 are provided")
    terms = resolve_terms(terms)
    n = _count(terms, TICKS_PER_Q)
    v = [1] + [consts[weight] * _sigma(weight - 1, m) for m in range(1, n)]
    return QSeries.from_strided(0, TICKS_PER_Q, v, None, terms)


@lru_cache(maxsize=None)
def _j(terms):
    # j has a pole of order one: compute the pieces with one extra q-power.
    inner = terms + TICKS_PER_Q
    e4 = eisenstein(4, inner)
    e6 = eisenstein(6, inner)
    e4c = power(e4, 3)
    disc = (e4c - power(e6, 2)).scale(Fraction(1, 1728))
    return mul(e4c, invert(disc)).truncate(-TICKS_PER_Q + terms)


def j_invariant(normalized=False, terms=None) -> QSeries:
    """j = E4^3 / Delta with Delta = (E4^3 - E6^2)/1728; J = j - 744."""
    j = _j(resolve_terms(terms))
    return j - 744 if normalized else j


@lru_cache(maxsize=None)
def _u(terms):
    n = _count(terms, TICKS_PER_Q) + 1
    # (eta(q)/eta(q^2))^24 = q^-1 prod (1+q^n)^-24
    base = QSeries.from_strided(0, TICKS_PER_Q, _distinct(n, range(1, n)), None, terms + TICKS_PER_Q)
    return power(invert(base), 24).shift(-TICKS_PER_Q).truncate(-TICKS_PER_Q + terms)


def hauptmodul_u(terms=None) -> QSeries:
    """u = (eta(q)/eta(q^2))^24 = q^-1 - 24 + 276 q - 2048 q^2 + ..."""
    return _u(resolve_terms(terms))


@lru_cache(maxsize=None)
def _mckay_thompson(cls, terms):
    if cls == "1A":
        return j_invariant(True, terms)
    u = _u(terms)
    if cls == "2B":
        return u + 24
    if cls == "2A":
        # 2^12/u starts at q^1, so its precision is ample
        return (u + invert(u).scale(4096) + 24).truncate(-TICKS_PER_Q + terms)
    raise ValueError(f"unsupported class {cls!r}; expected one of {MT_CLASSES}")


def mckay_thompson(cls, terms=None) -> QSeries:
    """McKay-Thompson series T_g for g in 1A, 2A, 2B.

    Uses the level-2 hauptmodul u: T_2B = u + 24, T_2A = u + 2^12/u + 24.
    """
    return _mckay_thompson(str(cls).upper(), resolve_terms(terms))


def build(name: CharName, terms=None) -> QSeries:
    """Dispatch a :class:`CharName` to its builder."""
    tag = name.tag
    if tag == "ChiHalf":
        return chi_half(terms)
    if tag == "ChiHalfTilde":
        return chi_half_tilde(terms)
    if tag == "VirasoroVacuum":
        return virasoro_vacuum(name.c, terms)
    if tag == "N1Vacuum":
        return n1_vacuum(name.c, terms)
    if tag == "VermaGeneric":
        return verma_generic(name.c, name.h, name.sector, terms)
    if tag == "Eta":
        return eta(name.scale, terms)
    if tag == "JInvariant":
        return j_invariant(False, terms)
    if tag == "JNormalized":
        return j_invariant(True, terms)
    if tag == "McKayThompson":
        return mckay_thompson(name.cls, terms)
    raise ValueError(f"unknown series {tag!r}")
