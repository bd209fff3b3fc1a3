import copy
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svoachar import LinearForm
from svoachar.feasibility import (
    FEASIBLE,
    INCONCLUSIVE,
    INFEASIBLE,
    INTEGER,
    NONNEG,
    POSITIVE,
    ZERO,
    Constraint,
    replay,
    solve,
)


def lf(const, **coeffs):
    return LinearForm(const, {int(k[1:]): v for k, v in coeffs.items()})


def box(var, lo, hi):
    return [Constraint(f"a{var} >= {lo}", LinearForm(-lo, {var: 1}), NONNEG),
            Constraint(f"a{var} <= {hi}", LinearForm(hi, {var: -1}), NONNEG)]


def test_single_variable_fix():
    cons = box(1, 3, 5) + [Constraint("2a1/3 integral", lf(0, a1=Fraction(2, 3)), INTEGER)]
    res = solve(cons, [1])
    assert res.status == FEASIBLE and res.witness == {1: 3}


def test_congruences_combine():
    cons = box(1, 0, 20) + [
        Constraint("a1/4", lf(0, a1=Fraction(1, 4)), INTEGER),
        Constraint("(a1-1)/3", lf(Fraction(-1, 3), a1=Fraction(1, 3)), INTEGER),
    ]
    res = solve(cons, [1], find_all=True)
    assert sorted(s[1] for s in res.solutions) == [4, 16]


def test_incompatible_congruences_are_infeasible():
    cons = [Constraint("a1/2", lf(0, a1=Fraction(1, 2)), INTEGER),
            Constraint("(a1+1)/2", lf(Fraction(1, 2), a1=Fraction(1, 2)), INTEGER)]
    res = solve(cons, [1])
    assert res.status == INFEASIBLE and replay(res.certificate)


def test_two_variable_contradiction_certificate():
    cons = [Constraint("a1 - a2 >= 1", lf(-1, a1=1, a2=-1), NONNEG),
            Constraint("a2 - a1 >= 1", lf(-1, a1=-1, a2=1), NONNEG)]
    res = solve(cons, [1, 2])
    assert res.status == INFEASIBLE
    assert replay(res.certificate)
    assert any(s.kind in ("farkas", "projection") for s in res.certificate)


def test_zero_and_positive_kinds():
    cons = box(1, -5, 5) + [Constraint("a1 + 2 = 0", lf(2, a1=1), ZERO)]
    assert solve(cons, [1]).witness == {1: -2}
    cons = box(1, -5, 0) + [Constraint("a1 > 0", lf(0, a1=1), POSITIVE)]
    res = solve(cons, [1])
    assert res.status == INFEASIBLE and replay(res.certificate)


def test_tampered_certificate_is_rejected():
    cons = box(1, 0, 10) + [Constraint("a1 >= 11", lf(-11, a1=1), NONNEG)]
    res = solve(cons, [1])
    assert res.status == INFEASIBLE and replay(res.certificate)
    bad = copy.deepcopy(res.certificate)
    for s in bad:
        if s.kind == "bound":
            side, val = s.value
            s.value = (side, val + 1)
            break
    with pytest.raises(AssertionError):
        replay(bad)


def test_cap_gives_inconclusive():
    # a parity constraint FM cannot see forces a full enumeration
    cons = box(1, 0, 10**4) + box(2, 0, 10**4) + [
        Constraint("(a1 + a2)/2 + 1/4", lf(Fraction(1, 4), a1=Fraction(1, 2), a2=Fraction(1, 2)), INTEGER)
    ]
    res = solve(cons, [1, 2], cap=50)
    assert res.status == INCONCLUSIVE


def test_witness_probe_in_unbounded_region():
    cons = [Constraint("a1 + a2 >= 0", lf(0, a1=1, a2=1), NONNEG)]
    res = solve(cons, [1, 2])
    assert res.status == FEASIBLE
    w = res.witness
    assert w[1] + w[2] >= 0


def test_json_shape():
    cons = box(1, 0, 1)
    payload = solve(cons, [1]).to_json()
    assert payload["status"] == FEASIBLE and payload["witness"] == {"a1": "0"}


_coef = st.integers(-6, 6)
_den = st.sampled_from([1, 1, 2, 3, 4])


@st.composite
def _systems(draw):
    """Small random systems on the box [-6, 6]^2."""
    cons = box(1, -6, 6) + box(2, -6, 6)
    for i in range(draw(st.integers(1, 4))):
        kind = draw(st.sampled_from([NONNEG, NONNEG, INTEGER, POSITIVE, ZERO]))
        d = draw(_den)
        form = LinearForm(Fraction(draw(_coef), d),
                          {1: Fraction(draw(_coef), d), 2: Fraction(draw(_coef), d)})
        cons.append(Constraint(f"c{i}", form, kind))
    return cons


def _brute(cons):
    sols = []
    for x, y in itertools.product(range(-6, 7), repeat=2):
        ok = True
        for con in cons:
            v = con.form.evaluate({1: x, 2: y}).to_fraction()
            if (con.kind == NONNEG and v < 0) or (con.kind == POSITIVE and v <= 0) \
                    or (con.kind == INTEGER and v.denominator != 1) or (con.kind == ZERO and v != 0):
                ok = False
                break
        if ok:
            sols.append({1: x, 2: y})
    return sols


@settings(max_examples=150, deadline=None)
@given(_systems())
def test_engine_matches_brute_force(cons):
    want = _brute(cons)
    res = solve(cons, [1, 2], find_all=True)
    got = sorted((s[1], s[2]) for s in res.solutions)
    assert got == sorted((s[1], s[2]) for s in want)
    if not want:
        assert res.status == INFEASIBLE and replay(res.certificate)
    single = solve(cons, [1, 2])
    assert single.status == (FEASIBLE if want else INFEASIBLE)
    if single.status == INFEASIBLE:
        assert replay(single.certificate)
    else:
        assert single.witness in want
