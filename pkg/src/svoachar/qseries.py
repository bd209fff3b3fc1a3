"""Exact truncated q-series with coefficients in Q(sqrt 2).

Exponents live on a fixed grid of step 1/48 of a power of q (one "tick").
A series stores the tick of its leading term, a dense run of coefficients,
and the tick ``prec_tick`` at which knowledge stops: every coefficient at a
tick >= ``prec_tick`` is unknown.  ``prec_tick=None`` marks an exact
(polynomial) series.  Reading an unknown coefficient raises
:class:`PrecisionError` instead of silently returning zero.

Coefficients are held as two parallel tuples (rational part, sqrt 2 part)
of ``int``/``Fraction``; the sqrt 2 tuple is ``None`` for plain-rational
series, which keeps the common integer case fast.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "TICKS_PER_Q",
    "TICKS_PER_P",
    "GridError",
    "PrecisionError",
    "Scalar",
    "SQRT2",
    "QSeries",
    "PrecisionPolicy",
    "add",
    "mul",
    "invert",
    "power",
    "derivative",
    "coefficient",
    "rebase",
    "lagrange_coefficient",
    "to_ticks",
    "as_rational",
]

TICKS_PER_Q = 48
TICKS_PER_P = 24
_VAR_TICKS = {"q": TICKS_PER_Q, "p": TICKS_PER_P}


class GridError(ValueError):
    """An exponent is not a multiple of 1/48."""


class PrecisionError(ValueError):
    """A coefficient at or beyond the known precision was requested."""


def as_rational(x):
    """Coerce ``x`` to ``int`` (when integral) or ``Fraction``.

    Strings such as ``"47/2"`` or ``"23.5"`` are accepted; floats are read
    through their decimal repr so ``1.01`` means 101/100.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return as_rational(Fraction(x.numerator, x.denominator))
    if isinstance(x, float):
        return as_rational(Fraction(repr(x)))
    if isinstance(x, str):
        return as_rational(Fraction(x.strip()))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def to_ticks(exponent) -> int:
    """Convert a rational exponent of q to grid ticks."""
    e = Fraction(as_rational(exponent)) * TICKS_PER_Q
    if e.denominator != 1:
        raise GridError(f"exponent {exponent} is not on the 1/48 grid")
    return e.numerator


def _frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Scalar:
    """An element ``rat + sqrt2*sqrt(2)`` of Q(sqrt 2)."""

    __slots__ = ("rat", "sqrt2")

    def __init__(self, rat=0, sqrt2=0):
        self.rat = as_rational(rat)
        self.sqrt2 = as_rational(sqrt2)

    @staticmethod
    def coerce(x) -> "Scalar":
        return x if isinstance(x, Scalar) else Scalar(x)

    def is_rational(self) -> bool:
        return self.sqrt2 == 0

    def _plain(self):
        if self.sqrt2 != 0:
            raise ValueError(f"{self} is not plain-rational")
        return self.rat

    def to_fraction(self) -> Fraction:
        return Fraction(self._plain())

    def is_integer(self) -> bool:
        return Fraction(self._plain()).denominator == 1

    def is_nonnegative(self) -> bool:
        return self.sign() >= 0

    def norm(self):
        return as_rational(self.rat * self.rat - 2 * self.sqrt2 * self.sqrt2)

    def conjugate(self) -> "Scalar":
        return Scalar(self.rat, -self.sqrt2)

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Scalar zero has no inverse")
        return Scalar(Fraction(self.rat) / n, -Fraction(self.sqrt2) / n)

    def __add__(self, other):
        other = Scalar.coerce(other)
        return Scalar(self.rat + other.rat, self.sqrt2 + other.sqrt2)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.rat, -self.sqrt2)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = Scalar.coerce(other)
        a, b, c, d = self.rat, self.sqrt2, o.rat, o.sqrt2
        return Scalar(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Scalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return self.rat != 0 or self.sqrt2 != 0

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.rat == o.rat and self.sqrt2 == o.sqrt2

    def __hash__(self):
        if self.sqrt2 == 0:
            return hash(self.rat)
        return hash((self.rat, self.sqrt2))

    def sign(self) -> int:
        """Exact sign of rat + sqrt2*sqrt(2)."""
        a, b = self.rat, self.sqrt2
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the larger square wins
        d = a * a - 2 * b * b
        return sa if d > 0 else (sb if d < 0 else 0)

    def __lt__(self, other):
        return (self - Scalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Scalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Scalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Scalar.coerce(other)).sign() >= 0

    def __repr__(self):
        return f"Scalar({self.rat!s}, {self.sqrt2!s})"

    def __str__(self):
        if self.sqrt2 == 0:
            return str(self.rat)
        if self.rat == 0:
            return f"{self.sqrt2}*sqrt2"
        return f"({self.rat} + {self.sqrt2}*sqrt2)"

    def to_json(self):
        return [_frac_str(self.rat), _frac_str(self.sqrt2)]

    @classmethod
    def from_json(cls, pair):
        return cls(Fraction(pair[0]), Fraction(pair[1]))


SQRT2 = Scalar(0, 1)


@dataclass(frozen=True)
class PrecisionPolicy:
    """How many grid ticks past the leading term builders compute."""

    default_terms: int = 8 * TICKS_PER_Q

    def __post_init__(self):
        if self.default_terms < 1:
            raise ValueError("default_terms must be >= 1")

    @classmethod
    def from_env(cls) -> "PrecisionPolicy":
        """Honour ``SVOA_TERMS`` (a count of full powers of q)."""
        raw = os.environ.get("SVOA_TERMS")
        if raw:
            return cls(int(raw) * TICKS_PER_Q + 1)
        return cls()


def resolve_terms(terms) -> int:
    if terms is None:
        return PrecisionPolicy().default_terms
    if isinstance(terms, PrecisionPolicy):
        return terms.default_terms
    terms = int(terms)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return terms


def _min_prec(*precs):
    finite = [p for p in precs if p is not None]
    return min(finite) if finite else None


def _conv(a, b, n):
    """First ``n`` entries of the Cauchy product of two coefficient lists."""
    if not a or not b or n <= 0:
        return [0] * max(n, 0)
    a = a[:n]
    b = b[:n]
    out = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    res = [as_rational(x) for x in out[:n]]
    if len(res) < n:
        res.extend([0] * (n - len(res)))
    return res


def _stride_of(r, s):
    g = 0
    for i in range(1, len(r)):
        if r[i] or (s is not None and s[i]):
            g = math.gcd(g, i)
            if g == 1:
                break
    return g


class QSeries:
    """Truncated Laurent series in q with exponents in (1/48)Z.

    Instances are immutable.  Use :meth:`coefficient` to read values; it
    refuses to answer beyond :attr:`prec_tick`.
    """

    __slots__ = ("_min", "_prec", "_r", "_s", "_stride")

    def __init__(self, min_tick=0, coeffs=(), prec_tick=None):
        r, s = [], []
        for c in coeffs:
            c = Scalar.coerce(c)
            r.append(c.rat)
            s.append(c.sqrt2)
        self._init(int(min_tick), r, s, prec_tick)

    @classmethod
    def _raw(cls, min_tick, r, s, prec_tick):
        obj = cls.__new__(cls)
        obj._init(min_tick, r, s, prec_tick)
        return obj

    def _init(self, min_tick, r, s, prec_tick):
        r = list(r)
        s = list(s) if s is not None else None
        if s is not None and not any(s):
            s = None
        if prec_tick is not None:
            prec_tick = int(prec_tick)
            keep = max(prec_tick - min_tick, 0)
            del r[keep:]
            if s is not None:
                del s[keep:]
        lead = 0
        while lead < len(r) and not (r[lead] or (s is not None and s[lead])):
            lead += 1
        end = len(r)
        while end > lead and not (r[end - 1] or (s is not None and s[end - 1])):
            end -= 1
        if lead == end:
            self._min = prec_tick if prec_tick is not None else 0
            self._r, self._s = (), None
        else:
            self._min = min_tick + lead
            self._r = tuple(as_rational(x) for x in r[lead:end])
            self._s = tuple(as_rational(x) for x in s[lead:end]) if s is not None else None
            if self._s is not None and not any(self._s):
                self._s = None
        self._prec = prec_tick
        self._stride = _stride_of(self._r, self._s)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, prec_tick=None):
        return cls._raw(0, [], None, prec_tick)

    @classmethod
    def one(cls, prec_tick=None):
        return cls.monomial(1, 0, prec_tick)

    @classmethod
    def monomial(cls, coeff, tick, prec_tick=None):
        c = Scalar.coerce(coeff)
        return cls._raw(int(tick), [c.rat], [c.sqrt2], prec_tick)

    @classmethod
    def from_dict(cls, terms, prec_tick=None):
        """Build from ``{exponent: coeff}`` with rational exponents."""
        if not terms:
            return cls.zero(prec_tick)
        ticks = {to_ticks(e): Scalar.coerce(c) for e, c in terms.items()}
        lo, hi = min(ticks), max(ticks)
        r = [0] * (hi - lo + 1)
        s = [0] * (hi - lo + 1)
        for t, c in ticks.items():
            r[t - lo] = c.rat
            s[t - lo] = c.sqrt2
        return cls._raw(lo, r, s, prec_tick)

    @classmethod
    def from_strided(cls, min_tick, step, rat, sqrt2=None, prec_tick=None):
        """Build from values spaced ``step`` ticks apart starting at ``min_tick``."""
        n = (len(rat) - 1) * step + 1 if rat else 0
        r = [0] * n
        r[::step] = rat
        s = None
        if sqrt2 is not None:
            s = [0] * n
            s[::step] = sqrt2
        return cls._raw(min_tick, r, s, prec_tick)

    # -- inspection ----------------------------------------------------

    @property
    def min_tick(self) -> int:
        return self._min

    @property
    def prec_tick(self):
        return self._prec

    @property
    def coeffs(self):
        s = self._s or (0,) * len(self._r)
        return tuple(Scalar(a, b) for a, b in zip(self._r, s))

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    def is_zero(self) -> bool:
        return not self._r

    def is_rational(self) -> bool:
        return self._s is None

    @property
    def valuation(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero series has no valuation")
        return Fraction(self._min, TICKS_PER_Q)

    @property
    def precision(self):
        return None if self._prec is None else Fraction(self._prec, TICKS_PER_Q)

    def leading_coefficient(self) -> Scalar:
        if self.is_zero():
            raise ValueError("zero series has no leading coefficient")
        return Scalar(self._r[0], self._s[0] if self._s else 0)

    def coeff_at_tick(self, tick: int) -> Scalar:
        if self._prec is not None and tick >= self._prec:
            raise PrecisionError(
                f"coefficient at q^{Fraction(tick, TICKS_PER_Q)} is beyond precision "
                f"q^{Fraction(self._prec, TICKS_PER_Q)}"
            )
        i = tick - self._min
        if i < 0 or i >= len(self._r):
            return Scalar(0)
        return Scalar(self._r[i], self._s[i] if self._s else 0)

    def coefficient(self, exponent) -> Scalar:
        return self.coeff_at_tick(to_ticks(exponent))

    def __getitem__(self, exponent) -> Scalar:
        return self.coefficient(exponent)

    def items(self):
        """Yield ``(exponent, Scalar)`` for the nonzero stored terms."""
        s = self._s
        for i, a in enumerate(self._r):
            b = s[i] if s else 0
            if a or b:
                yield Fraction(self._min + i, TICKS_PER_Q), Scalar(a, b)

    def tick_items(self):
        s = self._s
        for i, a in enumerate(self._r):
            b = s[i] if s else 0
            if a or b:
                yield self._min + i, Scalar(a, b)

    def __len__(self):
        return len(self._r)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries.monomial(other, 0)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(
            self._min,
            [-x for x in self._r],
            [-x for x in self._s] if self._s else None,
            self._prec,
        )

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries.monomial(other, 0)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, invert(other))
        return self.scale(Scalar.coerce(other).inverse())

    def __pow__(self, n):
        return power(self, n)

    def scale(self, c) -> "QSeries":
        c = Scalar.coerce(c)
        if c.sqrt2 == 0:
            k = c.rat
            return QSeries._raw(
                self._min,
                [k * x for x in self._r],
                [k * x for x in self._s] if self._s else None,
                self._prec,
            )
        s = self._s or (0,) * len(self._r)
        r2 = [c.rat * a + 2 * c.sqrt2 * b for a, b in zip(self._r, s)]
        s2 = [c.rat * b + c.sqrt2 * a for a, b in zip(self._r, s)]
        return QSeries._raw(self._min, r2, s2, self._prec)

    def shift(self, ticks: int) -> "QSeries":
        """Multiply by q^(ticks/48)."""
        prec = None if self._prec is None else self._prec + ticks
        if self.is_zero():
            return QSeries.zero(prec)
        return QSeries._raw(self._min + ticks, self._r, self._s, prec)

    def truncate(self, prec_tick) -> "QSeries":
        prec = _min_prec(self._prec, prec_tick)
        if self.is_zero():
            return QSeries.zero(prec)
        return QSeries._raw(self._min, self._r, self._s, prec)

    def rational_part(self) -> "QSeries":
        return QSeries._raw(self._min, self._r, None, self._prec)

    def sqrt2_part(self) -> "QSeries":
        """Series of sqrt 2 coefficients (so self = rat + sqrt2 * this)."""
        if self._s is None:
            return QSeries.zero(self._prec)
        return QSeries._raw(self._min, self._s, None, self._prec)

    def derivative(self, variable="q") -> "QSeries":
        return derivative(self, variable)

    # -- comparison & display -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self._min == other._min
            and self._prec == other._prec
            and self._r == other._r
            and self._s == other._s
        )

    def __hash__(self):
        return hash((self._min, self._prec, self._r, self._s))

    def agrees_with(self, other: "QSeries", upto_tick=None) -> bool:
        """Coefficient-wise equality below the smaller of the two precisions."""
        limit = _min_prec(self._prec, other._prec, upto_tick)
        diff = add(self, -other)
        if limit is None:
            return diff.is_zero()
        return all(t >= limit for t, _ in diff.tick_items())

    def __repr__(self):
        return f"QSeries({format_series(self)})"

    def __str__(self):
        return format_series(self)

    # -- serialisation ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "tick_den": TICKS_PER_Q,
            "min_tick": self._min,
            "prec_tick": self._prec,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d) -> "QSeries":
        if d.get("tick_den") != TICKS_PER_Q:
            raise ValueError(f"unsupported tick_den {d.get('tick_den')!r}")
        coeffs = [Scalar.from_json(pair) for pair in d["coeffs"]]
        return cls(d["min_tick"], coeffs, d["prec_tick"])

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_dict(json.loads(text))


def _fmt_exp(e: Fraction) -> str:
    return str(e) if e.denominator == 1 else f"({e})"


def format_series(a: QSeries, var="q", max_terms=None) -> str:
    parts = []
    for i, (e, c) in enumerate(a.items()):
        if max_terms is not None and i >= max_terms:
            parts.append("...")
            break
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{_fmt_exp(e)}")
        cs = str(c)
        if mono and cs == "1":
            term = mono
        elif mono and cs == "-1":
            term = "-" + mono
        else:
            term = cs + ("*" + mono if mono else "")
        parts.append(term)
    if a.prec_tick is not None:
        parts.append(f"O({var}^{_fmt_exp(Fraction(a.prec_tick, TICKS_PER_Q))})")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


# -- free functions (the operation surface) --------------------------------


def add(a: QSeries, b: QSeries) -> QSeries:
    prec = _min_prec(a._prec, b._prec)
    if a.is_zero():
        return b.truncate(prec)
    if b.is_zero():
        return a.truncate(prec)
    lo = min(a._min, b._min)
    hi = max(a._min + len(a._r), b._min + len(b._r))
    r = [0] * (hi - lo)
    want_s = a._s is not None or b._s is not None
    s = [0] * (hi - lo) if want_s else None
    for src in (a, b):
        off = src._min - lo
        for i, x in enumerate(src._r):
            r[off + i] += x
        if src._s is not None:
            for i, x in enumerate(src._s):
                s[off + i] += x
    return QSeries._raw(lo, r, s, prec)


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product with the standard truncated-product precision rule."""
    if (a.is_zero() and a._prec is None) or (b.is_zero() and b._prec is None):
        return QSeries.zero()
    cands = []
    if b._prec is not None:
        cands.append(a._min + b._prec)
    if a._prec is not None:
        cands.append(b._min + a._prec)
    prec = min(cands) if cands else None
    if a.is_zero() or b.is_zero():
        return QSeries.zero(prec)
    lo = a._min + b._min
    g = math.gcd(a._stride, b._stride)
    if g == 0:
        # monomial times monomial
        return QSeries.monomial(a.leading_coefficient() * b.leading_coefficient(), lo, prec)
    if prec is None:
        n = (len(a._r) - 1) // g + (len(b._r) - 1) // g + 1
    else:
        n = max(-(-(prec - lo) // g), 0)
    ar, br = list(a._r[::g]), list(b._r[::g])
    rr = _conv(ar, br, n)
    ss = None
    if a._s is not None or b._s is not None:
        as_ = list(a._s[::g]) if a._s else None
        bs = list(b._s[::g]) if b._s else None
        ss = [0] * n
        if as_ is not None and bs is not None:
            t = _conv(as_, bs, n)
            rr = [x + 2 * y for x, y in zip(rr, t)]
        if bs is not None:
            ss = [x + y for x, y in zip(ss, _conv(ar, bs, n))]
        if as_ is not None:
            ss = [x + y for x, y in zip(ss, _conv(as_, br, n))]
    return QSeries.from_strided(lo, g, rr, ss, prec)


def _invert_rational(a: QSeries, rel: int) -> QSeries:
    g = a._stride or rel
    lead = Fraction(a._r[0])
    b = [Fraction(x) / lead for x in a._r[::g]]
    n = max(-(-rel // g), 1)
    c = [Fraction(0)] * n
    c[0] = Fraction(1)
    m = len(b)
    for k in range(1, n):
        acc = 0
        for i in range(1, min(k, m - 1) + 1):
            bi = b[i]
            if bi:
                acc += bi * c[k - i]
        c[k] = -acc
    inv_lead = 1 / lead
    vals = [as_rational(x * inv_lead) for x in c]
    return QSeries.from_strided(-a._min, g, vals, None, -a._min + rel)


def invert(a: QSeries, terms=None) -> QSeries:
    """Multiplicative inverse.

    ``terms`` (ticks past the leading term) is needed only when ``a`` is an
    exact non-monomial, whose inverse is an infinite series.
    """
    if a.is_zero():
        raise ZeroDivisionError("cannot invert the zero series")
    lead = a.leading_coefficient()
    if lead.norm() == 0:
        raise ZeroDivisionError("leading coefficient is not invertible")
    if a._prec is None:
        if a._stride == 0:
            return QSeries.monomial(lead.inverse(), -a._min)
        if terms is None:
            raise PrecisionError("inverting an exact polynomial needs an explicit terms count")
        rel = resolve_terms(terms)
    else:
        rel = a._prec - a._min
        if terms is not None:
            rel = min(rel, resolve_terms(terms))
    if a._s is None:
        return _invert_rational(a, rel)
    # (r + s*sqrt2)^-1 = (r - s*sqrt2) / (r^2 - 2 s^2); the norm is rational
    a = a.truncate(a._min + rel)
    conj = QSeries._raw(a._min, a._r, [-x for x in a._s], a._prec)
    r = a.rational_part()
    s = a.sqrt2_part()
    norm = add(mul(r, r), mul(s, s).scale(-2))
    if norm.is_zero() or norm._min != 2 * a._min:
        raise ZeroDivisionError("norm series has vanishing leading term")
    inv = _invert_rational(norm, norm._prec - norm._min if norm._prec is not None else rel)
    return mul(conj, inv).truncate(-a._min + rel)


def power(a: QSeries, n: int, terms=None) -> QSeries:
    """Integer power by repeated squaring; negative ``n`` inverts first."""
    n = int(n)
    if n == 0:
        return QSeries.one()
    if n < 0:
        return power(invert(a, terms), -n)
    result, base = None, a
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def derivative(a: QSeries, variable="q") -> QSeries:
    """Formal derivative in q, or in p = q^(1/2)."""
    unit = _VAR_TICKS[variable]
    prec = None if a._prec is None else a._prec - unit
    if a.is_zero():
        return QSeries.zero(prec)
    r = [Fraction(a._min + i, unit) * x for i, x in enumerate(a._r)]
    s = [Fraction(a._min + i, unit) * x for i, x in enumerate(a._s)] if a._s else None
    return QSeries._raw(a._min - unit, r, s, prec)


def coefficient(a: QSeries, exponent) -> Scalar:
    return a.coefficient(exponent)


def rebase(F: QSeries, phi: QSeries, r_max: int):
    """Coefficients alpha_0..alpha_{r_max} with F = sum alpha_r * phi^r.

    Triangular elimination: read the coefficient at r*v(phi), divide by
    lead(phi)^r, subtract, repeat.
    """
    if phi.is_zero() or phi.min_tick <= 0:
        raise ValueError("phi must have strictly positive leading exponent")
    lead = phi.leading_coefficient()
    if lead.norm() == 0:
        raise ValueError("phi has a non-invertible leading coefficient")
    e = phi.min_tick
    if not F.is_zero() and (F.min_tick < 0 or F.min_tick % e):
        raise ValueError("F's leading exponent is not a nonnegative multiple of phi's")
    inv_lead = lead.inverse()
    residual = F
    phi_r = QSeries.one()
    alphas = []
    for r in range(r_max + 1):
        t = r * e
        for tick, _ in residual.tick_items():
            if tick >= t:
                break
            raise ValueError(f"F has a term at q^{Fraction(tick, TICKS_PER_Q)} not expressible in phi")
        alpha = residual.coeff_at_tick(t) * inv_lead ** r
        alphas.append(alpha)
        if alpha:
            residual = add(residual, phi_r.scale(-alpha))
        if r < r_max:
            phi_r = mul(phi_r, phi)
    return alphas


def lagrange_coefficient(F: QSeries, phi: QSeries, r: int, variable="p") -> Scalar:
    """Buermann-Lagrange value of alpha_r: [x^(r-1)] (1/r) F'(x) (x/phi)^r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    unit = _VAR_TICKS[variable]
    if phi.is_zero() or phi.min_tick != unit:
        raise ValueError(f"phi must be u*{variable}*(1 + O({variable}))")
    ratio = invert(phi).shift(unit)
    expr = mul(derivative(F, variable), power(ratio, r))
    return expr.coeff_at_tick((r - 1) * unit) / r
