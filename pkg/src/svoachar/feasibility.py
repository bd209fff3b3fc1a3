"""Exact integer feasibility for a handful of unknowns.

Constraints are affine forms in integer unknowns that must be nonnegative,
integral, zero or strictly positive.  The search

1. propagates constraints with a single remaining unknown into interval
   bounds and congruences (in the order given, so certificates read like a
   hand argument),
2. projects the remaining inequalities with Fourier-Motzkin elimination to
   bound every unknown or to produce a Farkas combination proving
   infeasibility over the reals,
3. branches on the unknown with the smallest finite domain.

Every deduction is logged as a :class:`Step`; :func:`replay` re-derives each
one from the cited forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .svoa import LinearForm

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
INCONCLUSIVE = "Inconclusive"

NONNEG = "nonneg"
INTEGER = "integer"
ZERO = "zero"
POSITIVE = "positive"


@dataclass(frozen=True)
class Constraint:
    name: str
    form: LinearForm
    kind: str = NONNEG


@dataclass
class Step:
    """One logged deduction.

    ``kind`` is one of ``bound``, ``congruence``, ``fix``, ``violation``,
    ``empty``, ``projection``, ``farkas`` or ``branch``.
    """

    kind: str
    description: str
    form: LinearForm | None = None
    assignment: dict = field(default_factory=dict)
    variable: int | None = None
    value: object = None
    multipliers: list = field(default_factory=list)
    branches: list = field(default_factory=list)
    strict: bool = False

    def to_json(self):
        d = {"kind": self.kind, "description": self.description}
        if self.form is not None:
            d["form"] = str(self.form)
        if self.assignment:
            d["assignment"] = {f"a{k}": str(v) for k, v in sorted(self.assignment.items())}
        if self.variable is not None:
            d["variable"] = f"a{self.variable}"
        if self.value is not None:
            d["value"] = str(self.value)
        if self.strict:
            d["strict"] = True
        if self.multipliers:
            d["multipliers"] = [[str(lam), name, str(f)] for lam, name, f, _ in self.multipliers]
        if self.branches:
            d["branches"] = [
                {"value": str(v), "steps": [s.to_json() for s in steps]} for v, steps in self.branches
            ]
        return d


@dataclass
class FeasibilityResult:
    status: str
    witness: dict | None = None
    certificate: list = field(default_factory=list)
    checked_depth: int = 0
    solutions: list = field(default_factory=list)
    note: str = ""

    @property
    def feasible(self):
        return self.status == FEASIBLE

    @property
    def infeasible(self):
        return self.status == INFEASIBLE

    def to_json(self):
        return {
            "status": self.status,
            "witness": None
            if self.witness is None
            else {f"a{k}": str(v) for k, v in sorted(self.witness.items())},
            "solutions": [{f"a{k}": str(v) for k, v in sorted(s.items())} for s in self.solutions],
            "checked_depth": self.checked_depth,
            "certificate": [s.to_json() for s in self.certificate],
            "note": self.note,
        }


class _Inconclusive(Exception):
    pass


@dataclass
class _Domain:
    lo: int | None = None
    hi: int | None = None
    mod: int = 1
    res: int = 0

    def copy(self):
        return _Domain(self.lo, self.hi, self.mod, self.res)

    def first(self):
        """Smallest admissible value >= lo (lo must be finite)."""
        return self.lo + ((self.res - self.lo) % self.mod)

    def last(self):
        return self.hi - ((self.hi - self.res) % self.mod)

    def count(self):
        if self.lo is None or self.hi is None:
            return None
        if self.lo > self.hi:
            return 0
        f, l = self.first(), self.last()
        return 0 if f > l else (l - f) // self.mod + 1

    def values(self):
        v = self.first()
        while v <= self.hi:
            yield v
            v += self.mod


def _floor(x: Fraction) -> int:
    return math.floor(x)


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def _plain(s) -> Fraction:
    return s.to_fraction()


def _single(form: LinearForm, var: int):
    return _plain(form.constant), _plain(form.coefficients[var])


def _congruence(c0: Fraction, c1: Fraction):
    """Solve c0 + c1*x in Z; returns (mod, res) or None."""
    D = math.lcm(c0.denominator, c1.denominator)
    A = int(c1 * D)
    B = int(-c0 * D)
    g = math.gcd(A, D)
    if B % g:
        return None
    m = D // g
    if m == 1:
        return 1, 0
    r = (B // g) * pow((A // g) % m, -1, m) % m
    return m, r


def _crt(m1, r1, m2, r2):
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    if m1 == 1:
        return m2, r2 % m2
    t = ((r2 - r1) // g) * pow(m1 // g, -1, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return lcm, (r1 + m1 * t) % lcm


def _violated(kind, value: Fraction) -> str | None:
    if kind == NONNEG and value < 0:
        return "negative"
    if kind == POSITIVE and value <= 0:
        return "not positive"
    if kind == INTEGER and value.denominator != 1:
        return "not integral"
    if kind == ZERO and value != 0:
        return "nonzero"
    return None


def _fmt_var(v):
    return f"a{v}"


# -- Fourier-Motzkin -------------------------------------------------------


class _Ineq:
    """sum coeffs[v]*x_v + const >= 0 with provenance multipliers."""

    __slots__ = ("coeffs", "const", "mult")

    def __init__(self, coeffs, const, mult):
        self.coeffs = {v: c for v, c in coeffs.items() if c}
        self.const = const
        self.mult = mult

    def key(self):
        # normalise by the first nonzero coefficient's magnitude
        if not self.coeffs:
            return ((), None)
        v0 = min(self.coeffs)
        s = abs(self.coeffs[v0])
        return tuple(sorted((v, c / s) for v, c in self.coeffs.items())), self.const / s


def _combine(p: _Ineq, n: _Ineq, v):
    lp, ln = -n.coeffs[v], p.coeffs[v]  # both positive
    coeffs = {}
    for u in set(p.coeffs) | set(n.coeffs):
        if u != v:
            coeffs[u] = lp * p.coeffs.get(u, 0) + ln * n.coeffs.get(u, 0)
    mult = {}
    for src, lam in ((p, lp), (n, ln)):
        for i, w in src.mult.items():
            mult[i] = mult.get(i, 0) + lam * w
    return _Ineq(coeffs, lp * p.const + ln * n.const, mult)


def _prune(ineqs):
    best = {}
    out = []
    for q in ineqs:
        if not q.coeffs:
            out.append(q)
            continue
        k, c = q.key()
        if k not in best or c < best[k][0]:
            best[k] = (c, q)
    out.extend(q for _, q in best.values())
    return out


def _eliminate(ineqs, v, limit=20000):
    pos = [q for q in ineqs if q.coeffs.get(v, 0) > 0]
    neg = [q for q in ineqs if q.coeffs.get(v, 0) < 0]
    rest = [q for q in ineqs if not q.coeffs.get(v, 0)]
    if len(pos) * len(neg) > limit:
        raise _Inconclusive(f"Fourier-Motzkin blow-up eliminating a{v}")
    new = [_combine(p, n, v) for p in pos for n in neg]
    return _prune(rest + new)


# -- search ------------------------------------------------------------------


class _Search:
    def __init__(self, constraints, variables, find_all, cap):
        self.constraints = list(constraints)
        self.variables = list(variables)
        self.find_all = find_all
        self.cap = cap
        self.visited = 0
        self.solutions = []

    def run(self):
        domains = {v: _Domain() for v in self.variables}
        return self._node({}, domains)

    def _node(self, assign, domains):
        """Return (feasible: bool, steps, witness)."""
        self.visited += 1
        if self.visited > self.cap:
            raise _Inconclusive(f"candidate cap {self.cap} exceeded")
        assign = dict(assign)
        domains = {v: d.copy() for v, d in domains.items() if v not in assign}
        steps = []
        done = set()
        progress = True
        while progress:
            progress = False
            for idx, con in enumerate(self.constraints):
                if idx in done:
                    continue
                f = con.form.substitute(assign)
                free = f.variables
                if not free:
                    value = _plain(f.constant)
                    why = _violated(con.kind, value)
                    done.add(idx)
                    if why:
                        steps.append(
                            Step("violation", f"{con.name} is {why}", con.form, dict(assign), value=value)
                        )
                        return False, steps, None
                    continue
                if len(free) != 1:
                    continue
                x = free[0]
                d = domains[x]
                changed, fail = self._apply_single(con, f, x, d, assign, steps)
                if fail:
                    return False, steps, None
                if changed:
                    cnt = d.count()
                    if cnt == 1:
                        assign[x] = d.first()
                        del domains[x]
                        steps.append(
                            Step("fix", f"{_fmt_var(x)} = {assign[x]}", None, dict(assign), x, assign[x])
                        )
                        progress = True
                        break
        if not domains:
            return True, steps, assign
        # bound the rest with Fourier-Motzkin
        try:
            ok = self._project(assign, domains, steps)
        except _Inconclusive:
            w = None if self.find_all else self._probe(assign, domains)
            if w is None:
                raise
            return True, steps, w
        if not ok:
            return False, steps, None
        for x, d in list(domains.items()):
            if d.count() == 0:
                steps.append(Step("empty", f"no admissible value for {_fmt_var(x)}", None, dict(assign), x))
                return False, steps, None
            if d.count() == 1:
                return self._branch(assign, domains, x, steps)
        finite = [(d.count(), x) for x, d in domains.items() if d.count() is not None]
        if finite:
            _, x = min(finite)
            return self._branch(assign, domains, x, steps)
        if self.find_all:
            raise _Inconclusive("unbounded region")
        # witness hunt upward from a finite lower bound
        lower = [x for x, d in domains.items() if d.lo is not None]
        if len(domains) == 1 and lower:
            x = lower[0]
            d = domains[x]
            v = d.first()
            while True:
                sub = dict(assign)
                sub[x] = v
                ok, _, w = self._node(sub, domains)
                if ok:
                    return True, steps, w
                v += d.mod
        w = self._probe(assign, domains)
        if w is not None:
            return True, steps, w
        raise _Inconclusive("unbounded region")

    def _probe(self, assign, domains, per_var=5, budget=4096):
        """Try admissible points near the origin; return a full witness or None."""
        pools = []
        for x, d in sorted(domains.items()):
            centre = 0
            if d.lo is not None:
                centre = max(centre, d.lo)
            if d.hi is not None:
                centre = min(centre, d.hi)
            base = centre - ((centre - d.res) % d.mod)
            cands = sorted((base + d.mod * i for i in range(-per_var, per_var + 1)), key=abs)
            cands = [v for v in cands if (d.lo is None or v >= d.lo) and (d.hi is None or v <= d.hi)]
            pools.append((x, cands[:per_var]))
        for combo in itertools.islice(itertools.product(*(c for _, c in pools)), budget):
            trial = dict(assign)
            trial.update({x: v for (x, _), v in zip(pools, combo)})
            if all(_violated(con.kind, _plain(con.form.evaluate(trial))) is None
                   for con in self.constraints):
                return trial
        return None

    def _apply_single(self, con, f, x, d, assign, steps):
        c0, c1 = _single(f, x)
        changed = False
        kind = con.kind
        if kind in (NONNEG, POSITIVE):
            strict = kind == POSITIVE
            rel = ">" if strict else ">="
            bound = -c0 / c1
            if c1 > 0:
                new = _ceil(bound) if kind == NONNEG else _floor(bound) + 1
                if d.lo is None or new > d.lo:
                    d.lo = new
                    changed = True
                    steps.append(
                        Step("bound", f"{con.name} {rel} 0 gives {_fmt_var(x)} >= {new}", con.form,
                             dict(assign), x, ("lo", new), strict=strict)
                    )
            else:
                new = _floor(bound) if kind == NONNEG else _ceil(bound) - 1
                if d.hi is None or new < d.hi:
                    d.hi = new
                    changed = True
                    steps.append(
                        Step("bound", f"{con.name} {rel} 0 gives {_fmt_var(x)} <= {new}", con.form,
                             dict(assign), x, ("hi", new), strict=strict)
                    )
        elif kind in (INTEGER, ZERO):
            if kind == ZERO:
                val = -c0 / c1
                if val.denominator != 1:
                    steps.append(
                        Step("violation", f"{con.name} = 0 needs {_fmt_var(x)} = {val}, not integral",
                             con.form, dict(assign), x, val)
                    )
                    return changed, True
                new_lo = max(d.lo, int(val)) if d.lo is not None else int(val)
                new_hi = min(d.hi, int(val)) if d.hi is not None else int(val)
                if (d.lo, d.hi) != (new_lo, new_hi):
                    d.lo, d.hi = new_lo, new_hi
                    changed = True
                    steps.append(
                        Step("bound", f"{con.name} = 0 gives {_fmt_var(x)} = {val}", con.form,
                             dict(assign), x, ("eq", int(val)))
                    )
            else:
                mr = _congruence(c0, c1)
                if mr is None:
                    steps.append(
                        Step("violation", f"{con.name} is never integral", con.form, dict(assign), x)
                    )
                    return changed, True
                m, r = mr
                if m > 1:
                    merged = _crt(d.mod, d.res, m, r)
                    if merged is None:
                        steps.append(
                            Step("violation",
                                 f"{con.name} integral needs {_fmt_var(x)} = {r} mod {m}, "
                                 f"incompatible with {_fmt_var(x)} = {d.res} mod {d.mod}",
                                 con.form, dict(assign), x, (m, r))
                        )
                        return changed, True
                    if merged[0] != d.mod:
                        d.mod, d.res = merged
                        changed = True
                        steps.append(
                            Step("congruence", f"{con.name} integral gives {_fmt_var(x)} = {r} mod {m}",
                                 con.form, dict(assign), x, (m, r))
                        )
        if changed and d.count() == 0:
            steps.append(Step("empty", f"no admissible value for {_fmt_var(x)}", None, dict(assign), x))
            return changed, True
        return changed, False

    def _ineqs(self, assign, domains):
        ineqs = []
        for idx, con in enumerate(self.constraints):
            if con.kind not in (NONNEG, POSITIVE, ZERO):
                continue
            f = con.form.substitute(assign)
            if len(f.variables) < 1:
                continue
            coeffs = {v: _plain(c) for v, c in f.coefficients.items()}
            const = _plain(f.constant)
            ineqs.append(_Ineq(coeffs, const, {("c", idx): Fraction(1)}))
            if con.kind == ZERO:
                ineqs.append(
                    _Ineq({v: -c for v, c in coeffs.items()}, -const, {("c", idx): Fraction(-1)})
                )
        for v, d in domains.items():
            if d.lo is not None:
                ineqs.append(_Ineq({v: Fraction(1)}, Fraction(-d.lo), {("lo", v, d.lo): Fraction(1)}))
            if d.hi is not None:
                ineqs.append(_Ineq({v: Fraction(-1)}, Fraction(d.hi), {("hi", v, d.hi): Fraction(1)}))
        return ineqs

    def _describe(self, mult):
        out = []
        for key, lam in sorted(mult.items(), key=lambda kv: str(kv[0])):
            if not lam:
                continue
            if key[0] == "c":
                con = self.constraints[key[1]]
                out.append((lam, con.name, con.form, con.kind))
            elif key[0] == "lo":
                _, v, b = key
                out.append((lam, f"{_fmt_var(v)} >= {b}", LinearForm(-b, {v: 1}), NONNEG))
            else:
                _, v, b = key
                out.append((lam, f"{_fmt_var(v)} <= {b}", LinearForm(b, {v: -1}), NONNEG))
        return out

    def _project(self, assign, domains, steps):
        base = self._ineqs(assign, domains)
        free = list(domains)
        for target in free:
            ineqs = base
            for v in free:
                if v != target:
                    ineqs = _eliminate(ineqs, v)
            for q in ineqs:
                if not q.coeffs and q.const < 0:
                    steps.append(
                        Step("farkas", "nonnegative combination of constraints is a negative constant",
                             None, dict(assign), value=q.const,
                             multipliers=self._describe(q.mult))
                    )
                    return False
            d = domains[target]
            for q in ineqs:
                c = q.coeffs.get(target)
                if not c:
                    continue
                bound = -q.const / c
                if c > 0:
                    new = _ceil(bound)
                    if d.lo is None or new > d.lo:
                        d.lo = new
                        steps.append(
                            Step("projection", f"combination gives {_fmt_var(target)} >= {new}", None,
                                 dict(assign), target, ("lo", new),
                                 multipliers=self._describe(q.mult))
                        )
                else:
                    new = _floor(bound)
                    if d.hi is None or new < d.hi:
                        d.hi = new
                        steps.append(
                            Step("projection", f"combination gives {_fmt_var(target)} <= {new}", None,
                                 dict(assign), target, ("hi", new),
                                 multipliers=self._describe(q.mult))
                        )
            if d.count() == 0:
                steps.append(Step("empty", f"no admissible value for {_fmt_var(target)}", None,
                                  dict(assign), target))
                return False
        return True

    def _branch(self, assign, domains, x, steps):
        d = domains[x]
        branches = []
        found = False
        for v in d.values():
            sub = dict(assign)
            sub[x] = v
            rest = {u: e for u, e in domains.items() if u != x}
            ok, sub_steps, w = self._node(sub, rest)
            branches.append((v, sub_steps))
            if ok:
                if self.find_all:
                    # nested branches record their own leaves and return None
                    if w is not None:
                        self.solutions.append(w)
                    found = True
                    continue
                steps.append(Step("branch", f"try {_fmt_var(x)} = {v}", None, dict(assign), x,
                                  branches=[(v, sub_steps)]))
                return True, steps, w
        steps.append(
            Step("branch", f"{_fmt_var(x)} ranges over {len(branches)} admissible values",
                 None, dict(assign), x, branches=branches)
        )
        if self.find_all and found:
            return True, steps, None
        return False, steps, None


def solve(constraints, variables, *, find_all=False, cap=10**6) -> FeasibilityResult:
    """Search for integer values of ``variables`` meeting every constraint."""
    search = _Search(constraints, variables, find_all, cap)
    try:
        ok, steps, witness = search.run()
    except _Inconclusive as exc:
        return FeasibilityResult(INCONCLUSIVE, note=str(exc), solutions=list(search.solutions))
    if find_all:
        sols = search.solutions
        if ok and witness is not None:
            sols = [witness]
        if sols:
            return FeasibilityResult(FEASIBLE, sols[0], steps, solutions=list(sols))
        return FeasibilityResult(INFEASIBLE, None, steps)
    if ok:
        return FeasibilityResult(FEASIBLE, witness, steps, solutions=[witness])
    return FeasibilityResult(INFEASIBLE, None, steps)


# -- replay ------------------------------------------------------------------


def replay(steps) -> bool:
    """Re-derive every logged deduction from its cited forms.

    Domains are rebuilt from the recorded bounds and congruences, so fixes
    and empty domains are checked too.  Raises ``AssertionError`` on the
    first step that does not reproduce.
    """
    _replay(steps, {})
    return True


def _replay(steps, domains):
    domains = {v: d.copy() for v, d in domains.items()}
    for s in steps:
        _replay_step(s, domains)


def _dom(domains, x):
    return domains.setdefault(x, _Domain())


def _replay_step(s: Step, domains):
    if s.kind == "violation":
        f = s.form.substitute(s.assignment)
        if f.is_constant():
            value = _plain(f.constant)
            assert value == s.value, f"{s.description}: got {value}, recorded {s.value}"
            why = s.description.rsplit(" is ", 1)[-1]
            kind = {"negative": NONNEG, "not positive": POSITIVE, "not integral": INTEGER,
                    "nonzero": ZERO}[why]
            assert _violated(kind, value) == why, s.description
            return
        (x,) = f.variables
        c0, c1 = _single(f, x)
        if isinstance(s.value, tuple):
            assert _congruence(c0, c1) == s.value, s.description
            d = _dom(domains, x)
            assert _crt(d.mod, d.res, *s.value) is None, s.description
        elif s.value is not None:
            assert -c0 / c1 == s.value and s.value.denominator != 1, s.description
        else:
            assert _congruence(c0, c1) is None, s.description
    elif s.kind == "bound":
        f = s.form.substitute(s.assignment)
        (x,) = f.variables
        c0, c1 = _single(f, x)
        side, val = s.value
        d = _dom(domains, x)
        if side == "eq":
            assert -c0 / c1 == val, s.description
            d.lo = val if d.lo is None else max(d.lo, val)
            d.hi = val if d.hi is None else min(d.hi, val)
        elif side == "lo":
            want = _floor(-c0 / c1) + 1 if s.strict else _ceil(-c0 / c1)
            assert c1 > 0 and val == want, s.description
            d.lo = val
        else:
            want = _ceil(-c0 / c1) - 1 if s.strict else _floor(-c0 / c1)
            assert c1 < 0 and val == want, s.description
            d.hi = val
    elif s.kind == "congruence":
        f = s.form.substitute(s.assignment)
        (x,) = f.variables
        c0, c1 = _single(f, x)
        assert _congruence(c0, c1) == s.value, s.description
        d = _dom(domains, x)
        d.mod, d.res = _crt(d.mod, d.res, *s.value)
    elif s.kind == "fix":
        d = domains.pop(s.variable)
        assert d.count() == 1 and d.first() == s.value, s.description
    elif s.kind == "empty":
        assert _dom(domains, s.variable).count() == 0, s.description
    elif s.kind in ("farkas", "projection"):
        total = LinearForm(0)
        for lam, name, form, kind in s.multipliers:
            # equalities may enter with either sign
            assert lam > 0 or (kind == ZERO and lam != 0), name
            total = total + form.substitute(s.assignment).scale(lam)
        if s.kind == "farkas":
            assert total.is_constant() and _plain(total.constant) < 0, s.description
            assert _plain(total.constant) == s.value
        else:
            assert total.variables == [s.variable], s.description
            c0, c1 = _single(total, s.variable)
            side, val = s.value
            d = _dom(domains, s.variable)
            if side == "lo":
                assert c1 > 0 and val == _ceil(-c0 / c1)
                d.lo = val
            else:
                assert c1 < 0 and val == _floor(-c0 / c1)
                d.hi = val
    elif s.kind == "branch":
        d = _dom(domains, s.variable)
        tried = [v for v, _ in s.branches]
        if "ranges over" in s.description:
            assert len(tried) == d.count(), s.description
        for v in tried:
            assert (d.lo is None or v >= d.lo) and (d.hi is None or v <= d.hi)
            assert (v - d.res) % d.mod == 0
        rest = {u: e for u, e in domains.items() if u != s.variable}
        for _, sub in s.branches:
            _replay(sub, rest)
