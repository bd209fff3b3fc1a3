"""Minimal-weight bounds for self-dual SVOAs and their verifiers."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import feasibility as fz
from .feasibility import Constraint, FeasibilityResult
from .modchar import (
    _distinct,
    _unrestricted,
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
    invert,
    lagrange_coefficient,
    mul,
    power,
    rebase,
    to_ticks,
)
from .svoa import (
    N1,
    SVOA,
    LinearForm,
    LinearSeries,
    basis_size,
    character,
    fit_basis,
    primaries,
    shadow,
    shadow_alpha,
)

__all__ = [
    "Options",
    "BoundReport",
    "CLASSIFICATION_DEPENDENT",
    "test_min_weight_exceeds",
    "analytic_mu_max",
    "table_sweep",
    "verify_newbound",
    "verify_coeffpos",
    "verify_maxodd",
    "extremal_n1",
    "verify_n1_bound",
    "noneighbour_check",
    "C48_FAMILIES",
]

CLASSIFICATION_DEPENDENT = frozenset(
    Fraction(x) for x in ("10", "11", "25/2", "13", "27/2", "29/2", "33/2")
)

# The two c = 48, mu = 5/2 characters: (C_5..C_8, shadow coefficients from q^-1).
C48_FAMILIES = {
    1: ((192512, 21590016, 863059968, 20256751892), (1, 1, 42991892, 40491808768, 8504047840194)),
    2: ((196608, 21491712, 864288768, 20246003988), (0, 25, 42991616, 40491810816, 8504047828992)),
}


@dataclass(frozen=True)
class Options:
    """Feasibility knobs.

    ``depth_char`` half-integer steps of the character and ``depth_shadow``
    integer steps of the shadow are checked past the fixed range.
    """

    depth_char: int = 16
    depth_shadow: int = 8
    primary_check: bool = False
    cap: int = 10**6


@dataclass
class BoundReport:
    c: Fraction
    analytic_mu_max: Fraction | None
    annotation: str = "none"
    status: str = fz.INFEASIBLE
    infeasible: FeasibilityResult | None = None
    feasible_below: FeasibilityResult | None = None
    runs: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "c": _fstr(self.c),
            "mu_upper": None if self.analytic_mu_max is None else _fstr(self.analytic_mu_max),
            "annotation": self.annotation,
            "status": self.status,
            "runs": {_fstr(m): s for m, s in sorted(self.runs.items())},
        }


def _fstr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _half(mu) -> Fraction:
    mu = Fraction(as_rational(mu))
    if (2 * mu).denominator != 1 or mu < 0:
        raise ValueError(f"weight {mu} is not a nonnegative half-integer")
    return mu


def _exp_str(e: Fraction) -> str:
    return f"q^{_fstr(e)}"


# -- symbolic primaries --------------------------------------------------------


def _verma_peel(series: QSeries, c, sector, upto, subtract=None):
    """Linear Verma decomposition of ``series`` on ticks below ``upto``.

    Returns {tick: multiplicity}.  ``subtract`` is removed first (the vacuum).
    """
    rest = series if subtract is None else add(series, -subtract)
    out = {}
    step = TICKS_PER_P
    t = rest.min_tick if not rest.is_zero() else upto
    lo = -to_ticks(Fraction(c) / 24)
    t = lo + ((t - lo) // step) * step
    while t < upto:
        m = rest.coeff_at_tick(t) if t >= rest.min_tick else Scalar(0)
        if m:
            out[t] = m
            h = Fraction(t - lo, TICKS_PER_Q)
            rest = add(rest, verma_generic(c, h, sector, upto - t).scale(-m))
        t += step
    return out


def _primary_forms(chi, c, mode, upto):
    """Primary multiplicities (h > 0) as LinearForms in the free a_r."""
    sector = "plain" if mode == SVOA else "NS"
    lo = -to_ticks(Fraction(c) / 24)
    vac = (virasoro_vacuum if mode == SVOA else n1_vacuum)(c, upto - lo)
    if isinstance(chi, LinearSeries):
        base, parts = chi.base, chi.parts
    else:
        base, parts = chi, {}
    forms = {}
    for t, m in _verma_peel(base, c, sector, upto, vac).items():
        forms[t] = forms.get(t, LinearForm(0)) + LinearForm(m)
    for r, s in parts.items():
        for t, m in _verma_peel(s, c, sector, upto).items():
            forms[t] = forms.get(t, LinearForm(0)) + LinearForm(0, {r: m})
    return {Fraction(t - lo, TICKS_PER_Q): f for t, f in sorted(forms.items()) if t > lo}


# -- the constraint system -----------------------------------------------------


@dataclass
class System:
    c: Fraction
    mu: Fraction
    spec: object
    chi: object
    shadow: object
    constraints: list
    variables: list
    depth: int


def build_system(c, mu, opts: Options | None = None, *, mode=SVOA, shadow_zero=False,
                 weight_present=False) -> System:
    """Constraints for a character with no primaries of weight 0 < h <= mu.

    C_n equals the vacuum coefficient for n <= 2 mu; everything past that and
    the shadow must be a nonnegative integer.  ``shadow_zero`` adds B_0 = 0;
    ``weight_present`` adds C_{2mu+1} > 0 (minimal weight exactly mu + 1/2).
    """
    opts = opts or Options()
    c = central_charge(c)
    mu = _half(mu)
    k = basis_size(c, mode)
    fixed = int(2 * mu)
    vac_fn = virasoro_vacuum if mode == SVOA else n1_vacuum
    n_top = fixed + opts.depth_char
    vac = vac_fn(c, TICKS_PER_P * (n_top + 1))
    lo = -to_ticks(c / 24)
    vac_n = [vac.coeff_at_tick(lo + TICKS_PER_P * n) for n in range(n_top + 1)]
    spec = fit_basis(c, mode, vac_n[: min(fixed, k) + 1])
    free = spec.free
    chi = character(spec, TICKS_PER_P * n_top + 1)
    n_shadow = len(free) + opts.depth_shadow
    sh = shadow(spec, TICKS_PER_Q * (n_shadow - 1) + 1)
    sh_lo = to_ticks(c / 12) - TICKS_PER_Q * k

    def cform(n):
        v = chi.coeff_at_tick(lo + TICKS_PER_P * n)
        return v if isinstance(v, LinearForm) else LinearForm(v)

    def bform(n):
        v = sh.coeff_at_tick(sh_lo + TICKS_PER_Q * n)
        return v if isinstance(v, LinearForm) else LinearForm(v)

    cons = []
    for n in range(k + 1, fixed + 1):
        e = Fraction(n, 2) - c / 24
        cons.append(Constraint(f"C_{n} - {vac_n[n]} ({_exp_str(e)})", cform(n) - LinearForm(vac_n[n]),
                               fz.ZERO))
    if shadow_zero:
        cons.append(Constraint(f"B_0 ({_exp_str(c / 12 - k)} of the shadow)", bform(0), fz.ZERO))
    if weight_present:
        n = fixed + 1
        cons.append(Constraint(f"C_{n} - {vac_n[n]} ({_exp_str(Fraction(n, 2) - c / 24)})",
                               cform(n) - LinearForm(vac_n[n]), fz.POSITIVE))
    for n in range(n_shadow):
        name = f"B_{n} ({_exp_str(c / 12 - k + n)} of the shadow)"
        f = bform(n)
        cons.append(Constraint(name, f, fz.NONNEG))
        cons.append(Constraint(name, f, fz.INTEGER))
    for n in range(fixed + 1, n_top + 1):
        name = f"C_{n} ({_exp_str(Fraction(n, 2) - c / 24)})"
        f = cform(n)
        cons.append(Constraint(name, f, fz.NONNEG))
        cons.append(Constraint(name, f, fz.INTEGER))
    if opts.primary_check:
        upto = lo + TICKS_PER_P * n_top + 1
        for h, f in _primary_forms(chi, c, mode, upto).items():
            if h > mu:
                cons.append(Constraint(f"P_{_fstr(h)} (primaries of weight {_fstr(h)})", f, fz.NONNEG))
    return System(c, mu, spec, chi, sh, cons, free, opts.depth_char + n_shadow)


def test_min_weight_exceeds(c, mu, opts: Options | None = None, **kw) -> FeasibilityResult:
    """Can a self-dual SVOA of central charge c have minimal weight > mu?"""
    opts = opts or Options()
    system = build_system(c, mu, opts, **kw)
    res = fz.solve(system.constraints, system.variables, cap=opts.cap)
    res.checked_depth = system.depth
    return res


test_min_weight_exceeds.__test__ = False  # keep pytest from collecting it


# -- the bound table ------------------------------------------------------------


def analytic_mu_max(c, opts: Options | None = None) -> BoundReport:
    """Smallest half-integer mu such that minimal weight > mu is excluded."""
    opts = opts or Options()
    c = central_charge(c)
    runs = {}

    def run(mu):
        r = test_min_weight_exceeds(c, mu, opts)
        runs[mu] = r.status
        return r

    mu = Fraction(int(c // 24) + 1)
    top = run(mu)
    while top.status == fz.FEASIBLE:
        mu += Fraction(1, 2)
        top = run(mu)
    if top.status == fz.INCONCLUSIVE:
        return BoundReport(c, None, _annotation(c), fz.INCONCLUSIVE, runs=runs)
    below = None
    while mu > 0:
        r = run(mu - Fraction(1, 2))
        if r.status == fz.INFEASIBLE:
            mu -= Fraction(1, 2)
            top = r
            continue
        below = r
        if r.status == fz.INCONCLUSIVE:
            return BoundReport(c, mu, _annotation(c), fz.INCONCLUSIVE, top, r, runs)
        break
    return BoundReport(c, mu, _annotation(c), fz.INFEASIBLE, top, below, runs)


def _annotation(c):
    return "classification_dependent" if c in CLASSIFICATION_DEPENDENT else "none"


def _sweep_one(args):
    c, opts = args
    return analytic_mu_max(c, opts)


def table_sweep(c_from=Fraction(1, 2), c_to=48, step=Fraction(1, 2), opts=None, workers=1):
    """analytic_mu_max over a grid of c, ordered by c whatever the worker count."""
    c_from, c_to, step = (Fraction(as_rational(x)) for x in (c_from, c_to, step))
    cs = []
    c = c_from
    while c <= c_to:
        cs.append(c)
        c += step
    jobs = [(c, opts or Options()) for c in cs]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(_sweep_one, jobs))
    else:
        reports = [_sweep_one(j) for j in jobs]
    return sorted(reports, key=lambda r: r.c)


# -- new general bound ---------------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(ch.ok for ch in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        return ok

    def to_json(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [ch.to_json() for ch in self.checks],
            "values": {k: _jsonable(v) for k, v in self.values.items()},
        }


def _jsonable(v):
    if isinstance(v, (Fraction, Scalar, int)):
        return str(v) if not isinstance(v, Fraction) else _fstr(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _beta(c, k, n, r, terms):
    """beta_{n,r}: coefficient of phitilde^r in q^(n+c/12-k) chitilde^(24k-2c)."""
    e = int(24 * k - 2 * c)
    shift = TICKS_PER_Q * n + to_ticks(c / 12) - TICKS_PER_Q * k
    F = power(chi_half_tilde(terms), e).shift(shift)
    phi = power(chi_half_tilde(terms), 24)
    via_rebase = rebase(F, phi, r)[r]
    if r == 0:
        return via_rebase, via_rebase
    return lagrange_coefficient(F, phi, r, variable="q"), via_rebase


def verify_newbound(c) -> Report:
    """a_{2m} < 0 from the character side, beta_{n,k-2m} > 0 from the shadow side."""
    c = central_charge(c)
    if c < 32:
        raise ValueError("the two-sided argument needs c >= 32")
    m = int(c // 24) + 1
    k = basis_size(c)
    r = k - 2 * m
    rep = Report(f"minimal weight <= {m} at c = {_fstr(c)}")
    expo = 48 * int(c // 24) - 2 * c + 47
    rep.values.update(c=c, m=m, k=k, exponent=expo)
    rep.add("exponent 48[c/24] - 2c + 47 >= 0", expo >= 0, _fstr(expo))
    rep.add("2m <= k", 2 * m <= k, f"2m = {2 * m}, k = {k}")

    terms = TICKS_PER_P * (2 * m + 2)
    chi = chi_half(terms + 2 * TICKS_PER_P)
    F = mul(virasoro_vacuum(c, terms), power(chi, -int(2 * c), terms + 2 * TICKS_PER_P)).truncate(terms)
    phi = power(chi, -24, terms + 2 * TICKS_PER_P).truncate(terms + TICKS_PER_P)
    a_lag = lagrange_coefficient(F, phi, 2 * m, variable="p")
    a_reb = rebase(F, phi, 2 * m)[2 * m]
    vac = virasoro_vacuum(c, terms)
    lo = -to_ticks(c / 24)
    spec = fit_basis(c, SVOA, [vac.coeff_at_tick(lo + TICKS_PER_P * n) for n in range(2 * m + 1)])
    a_fit = Scalar(spec.a[2 * m])
    rep.values.update(a_2m_lagrange=a_lag, a_2m_rebase=a_reb, a_2m_fit=a_fit)
    rep.add("a_2m: Lagrange = triangular solve", a_lag == a_reb == a_fit, str(a_lag))
    rep.add("a_2m < 0", a_lag < 0, str(a_lag))

    bterms = TICKS_PER_Q * (r + 5)
    betas = {}
    for n in range(4):
        lag, reb = _beta(c, k, n, r, bterms)
        betas[n] = lag
        rep.add(f"beta_{n},{r}: Lagrange = rebase", lag == reb, f"{lag} vs {reb}")
        if n <= r:
            rep.add(f"beta_{n},{r} > 0", lag > 0, str(lag))
        else:
            rep.add(f"beta_{n},{r} = 0 (q^{n} term cannot reach phi^{r})", lag == 0, str(lag))
    rep.values["beta"] = betas

    b00 = _beta(c, k, 0, 0, bterms)[0]
    closed = Fraction(24 * int(c // 24)) - c + 24
    rep.values.update(beta_00=b00, beta_00_exponent=12 * k - c, beta_00_closed_form_exponent=closed)
    rep.add("beta_0,0 = 2^(12k - c)", b00 == _pow2(12 * k - c), str(b00))
    rep.add("beta_0,0 = 2^(24[c/24] - c + 24)", b00 == _pow2(closed),
            f"{b00} vs 2^({_fstr(closed)})")

    # consistency: a_2m = sum beta_{n,r} B_n / alpha on an arbitrary character
    trial = spec.with_values({i: 0 for i in spec.free})
    sh = shadow(trial, TICKS_PER_Q * (r + 1) + 1)
    alpha = shadow_alpha(c)
    sh_lo = to_ticks(c / 12) - TICKS_PER_Q * k
    total = Scalar(0)
    for n in range(r + 1):
        total = total + betas[n] * sh.coeff_at_tick(sh_lo + TICKS_PER_Q * n) * alpha.inverse()
    rep.add("a_2m = sum_n beta_n,r B_n / alpha", total == Scalar(trial.a[2 * m]), str(total))
    return rep


def _pow2(e: Fraction) -> Scalar:
    e = Fraction(e)
    whole = math.floor(e)
    s = Scalar(Fraction(2) ** whole)
    if e - whole == Fraction(1, 2):
        s = s * Scalar(0, 1)
    return s


# -- positivity lemma ----------------------------------------------------------


@lru_cache(maxsize=8)
def _coeffpos_parts(n):
    """U = B A' and W = B' A as integer arrays of length n."""
    A = _distinct(n + 1, range(1, n + 1, 2))
    B = _unrestricted(n + 1, range(4, n + 1, 2))
    dA = np.array([(i + 1) * A[i + 1] for i in range(n)], dtype=object)
    dB = np.array([(i + 1) * B[i + 1] for i in range(n)], dtype=object)
    A = np.array(A[:n], dtype=object)
    B = np.array(B[:n], dtype=object)
    U = np.convolve(B, dA)[:n]
    W = np.convolve(dB, A)[:n]
    return U, W


def verify_coeffpos(c, n_max=3000) -> Report:
    """Coefficients of p^n, n < n_max, in 2c B A' - B' A (the positive-series lemma).

    The p^1 coefficient vanishes for every c (A has no p^2 term and B' starts
    at p^3), so zeros and negative coefficients are reported separately.
    """
    c = Fraction(as_rational(c))
    if c <= 0 or n_max < 1:
        raise ValueError("need c > 0 and n_max >= 1")
    U, W = _coeffpos_parts(int(n_max))
    zeros, negative = [], []
    for n in range(int(n_max)):
        v = 2 * c * U[n] - W[n]
        if v == 0:
            zeros.append(n)
        elif v < 0:
            negative.append(n)
    nonpos = sorted(zeros + negative)
    first = nonpos[0] if nonpos else None
    rep = Report(f"positivity of 2c*chi_M*chi' - chi_M'*chi at c = {_fstr(c)}")
    rep.values.update(c=c, n_max=int(n_max), first_nonpositive=first, zero_indices=zeros[:20],
                      first_negative=negative[0] if negative else None,
                      negative_count=len(negative))
    if negative:
        rep.values["first_negative_value"] = 2 * c * U[negative[0]] - W[negative[0]]
    if first is None:
        detail = "all positive"
    else:
        detail = f"first nonpositive at p^{first}"
        detail += f" (zero at {zeros[:5]}" if zeros else " ("
        detail += f"; first negative at p^{negative[0]})" if negative else "; no negative coefficient)"
    rep.add(f"all coefficients positive for n < {n_max}", first is None, detail)
    return rep


# -- odd-weight theorem --------------------------------------------------------


def verify_maxodd(c, opts: Options | None = None) -> FeasibilityResult:
    """Minimal weight > c/24 + 1/2 with a vanishing leading shadow coefficient."""
    c = central_charge(c)
    if c not in (24, 48, 72, 96):
        raise ValueError("defined for c = 24, 48, 72, 96")
    opts = opts or Options()
    system = build_system(c, c / 24 + Fraction(1, 2), opts, shadow_zero=True)
    res = fz.solve(system.constraints, system.variables, cap=opts.cap)
    res.checked_depth = system.depth
    return res


# -- N=1 -----------------------------------------------------------------------


def _n1_spec(c):
    k = basis_size(c, N1)
    vac = n1_vacuum(c, TICKS_PER_P * (k + 1))
    lo = -to_ticks(c / 24)
    return fit_basis(c, N1, [vac.coeff_at_tick(lo + TICKS_PER_P * n) for n in range(k + 1)])


def extremal_n1(c, terms=None):
    """(character, shadow) of the extremal N=1 character."""
    c = central_charge(c)
    spec = _n1_spec(c)
    return character(spec, terms), shadow(spec, terms)


def _n1_A_formula(c, k, terms):
    N = 24 * (k + 1) - int(2 * c) - 1
    chi = chi_half(terms)
    M = n1_vacuum(c, terms)
    inner = add(mul(M.derivative("p"), chi), mul(M, chi.derivative("p")).scale(-2 * c))
    expr = mul(power(chi, N, terms), inner).shift(TICKS_PER_P * (k + 1))
    return expr.coeff_at_tick(TICKS_PER_P * k) * Scalar(Fraction(-1, k + 1))


def verify_n1_bound(c) -> Report:
    """A_{k+1} by the closed coefficient formula and by direct division."""
    c = central_charge(c)
    k = basis_size(c, N1)
    rep = Report(f"N=1 minimal superconformal weight at c = {_fstr(c)}")
    expo = 23 - 2 * c + 24 * k
    rep.values.update(c=c, k=k, exponent=expo)
    rep.add("exponent 23 - 2c + 24[c/12] >= 0", expo >= 0, _fstr(expo))
    terms = TICKS_PER_P * (k + 6)
    a_formula = _n1_A_formula(c, k, terms + TICKS_PER_P * (k + 2))
    chi, _ = extremal_n1(c, terms)
    lo = -to_ticks(c / 24)
    quotient = mul(chi, invert(n1_vacuum(c, terms)))
    a_direct = quotient.coeff_at_tick(TICKS_PER_P * (k + 1))
    below = [quotient.coeff_at_tick(TICKS_PER_P * n) for n in range(1, k + 1)]
    rep.values.update(A_formula=a_formula, A_direct=a_direct)
    rep.add("quotient is 1 + O(p^(k+1))", all(not b for b in below))
    rep.add("A_(k+1): formula = division", a_formula == a_direct, f"{a_formula} vs {a_direct}")
    if c == Fraction(47, 2):
        prim = primaries(chi, c, N1, terms)
        p32 = prim[Fraction(3, 2)]
        rep.values.update(primary_3_2=p32, coefficient_3_2=chi.coeff_at_tick(lo + 3 * TICKS_PER_P))
        rep.add("A_(k+1) = 0 at c = 47/2", a_direct == 0, str(a_direct))
        rep.add("q^(3/2) primary count is 4372", p32 == 4372, str(p32))
    else:
        rep.add("A_(k+1) > 0", a_direct > 0, str(a_direct))
    return rep


# -- c = 48, minimal weight 5/2 -------------------------------------------------


@dataclass
class NeighbourReport:
    result: FeasibilityResult
    families: dict
    ok: bool
    voa_solution: dict | None = None

    def to_json(self):
        return {
            "ok": self.ok,
            "status": self.result.status,
            "families": {
                str(i): {
                    "a": {f"a{k}": str(v) for k, v in sorted(f["a"].items())},
                    "character": [str(x) for x in f["character"]],
                    "shadow": [str(x) for x in f["shadow"]],
                    "matches": f["matches"],
                }
                for i, f in self.families.items()
            },
            "voa_solution": None
            if self.voa_solution is None
            else {f"a{k}": str(v) for k, v in sorted(self.voa_solution.items())},
        }


def c48_family_series(a5, a6, terms=None):
    """(character, shadow) at c = 48 with a_0..a_4 fixed by minimal weight > 2."""
    system = build_system(48, 2)
    spec = system.spec.with_values({5: a5, 6: a6})
    return character(spec, terms), shadow(spec, terms)


def noneighbour_check(opts: Options | None = None) -> NeighbourReport:
    """All integer characters at c = 48 with minimal weight exactly 5/2."""
    opts = opts or Options()
    system = build_system(48, 2, opts, weight_present=True)
    res = fz.solve(system.constraints, system.variables, find_all=True, cap=opts.cap)
    res.checked_depth = system.depth
    families = {}
    ok = res.status == fz.FEASIBLE
    for sol in res.solutions:
        chi, sh = c48_family_series(sol.get(5), sol.get(6), 6 * TICKS_PER_Q)
        cs = tuple(int(chi.coeff_at_tick(-96 + TICKS_PER_P * n).to_fraction()) for n in range(5, 9))
        bs = tuple(int(sh.coeff_at_tick(-48 + TICKS_PER_Q * n).to_fraction()) for n in range(5))
        match = [i for i, (gc, gs) in C48_FAMILIES.items() if gc == cs and gs == bs]
        idx = match[0] if match else len(families) + 100
        families[idx] = {"a": sol, "character": cs, "shadow": bs, "matches": bool(match)}
    ok = ok and sorted(families) == [1, 2]
    # without C_5 > 0 the extremal VOA character also survives
    plain = build_system(48, 2, opts)
    every = fz.solve(plain.constraints, plain.variables, find_all=True, cap=opts.cap)
    voa = [s for s in every.solutions if s not in res.solutions]
    return NeighbourReport(res, families, ok, voa[0] if voa else None)
