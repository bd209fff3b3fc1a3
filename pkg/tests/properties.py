"""Property checks shared by the unit suites and the acceptance run.

Each ``prop_*`` is a hypothesis test; calling it runs the whole search.
"""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from strategies import central_charges, series, small_fractions, unit_series

from svoachar import QSeries, Scalar, even_odd_split, invert, lagrange_coefficient, mul, rebase
from svoachar import bounds, modchar, svoa
from svoachar.feasibility import FEASIBLE, INFEASIBLE
from svoachar.qseries import derivative, power

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _naive_product(a, b):
    out = {}
    for ta, x in a.tick_items():
        for tb, y in b.tick_items():
            out[ta + tb] = out.get(ta + tb, Scalar(0)) + x * y
    return out


@FAST
@given(series(), series(), series())
def prop_ring_axioms(a, b, c):
    assert ((a + b) + c).agrees_with(a + (b + c))
    assert (a + b).agrees_with(b + a)
    assert mul(a, b).agrees_with(mul(b, a))
    assert mul(mul(a, b), c).agrees_with(mul(a, mul(b, c)))
    assert mul(a, b + c).agrees_with(mul(a, b) + mul(a, c))
    assert (a - a).is_zero()
    assert mul(a, QSeries.one()) == a


@FAST
@given(series(), series())
def prop_product_matches_naive(a, b):
    p = mul(a, b)
    limit = p.prec_tick
    for t, v in _naive_product(a, b).items():
        if limit is None or t < limit:
            assert p.coeff_at_tick(t) == v
    # the reported precision never claims more than the inputs justify
    if a.is_zero() or b.is_zero():
        return
    limits = []
    if a.prec_tick is not None:
        limits.append(a.prec_tick + b.min_tick)
    if b.prec_tick is not None:
        limits.append(b.prec_tick + a.min_tick)
    if limits:
        assert limit is not None and limit <= min(limits)


@FAST
@given(unit_series())
def prop_invert_round_trip(a):
    inv = invert(a)
    assert inv.prec_tick is not None
    one = mul(a, inv)
    assert one.agrees_with(QSeries.one())
    assert invert(inv).agrees_with(a)


@FAST
@given(series(), series(), st.sampled_from(["q", "p"]))
def prop_leibniz(a, b, var):
    lhs = derivative(mul(a, b), var)
    rhs = mul(derivative(a, var), b) + mul(a, derivative(b, var))
    assert lhs.agrees_with(rhs)


@st.composite
def _rebase_inputs(draw):
    u = draw(small_fractions.filter(bool))
    tail = draw(st.lists(small_fractions, min_size=13, max_size=13))
    phi = QSeries.from_strided(24, 24, [u] + tail, None, 24 * 15)
    f = draw(st.lists(small_fractions, min_size=14, max_size=14))
    F = QSeries.from_strided(0, 24, f, None, 24 * 14)
    return F, phi


@FAST
@given(_rebase_inputs())
def prop_rebase_matches_lagrange(inputs):
    F, phi = inputs
    alphas = rebase(F, phi, 12)
    for r in range(1, 13):
        assert alphas[r] == lagrange_coefficient(F, phi, r, variable="p")
    # and the expansion reproduces F
    total = QSeries.zero(24 * 13)
    for r, al in enumerate(alphas):
        total = total + power(phi, r).scale(al)
    assert total.agrees_with(F, 24 * 13)


def _random_spec(c, data):
    k = svoa.basis_size(c)
    a = [1] + [data.draw(st.integers(-10**6, 10**6)) for _ in range(k)]
    return svoa.CharacterSpec(c, svoa.SVOA, tuple(a))


@SLOW
@given(central_charges, st.data())
def prop_even_odd_recombination(c, data):
    chi = svoa.character(_random_spec(c, data), 4 * 48)
    even, odd = even_odd_split(chi, c)
    assert (even + odd) == chi
    ref = -int(c * 2)  # -c/24 in ticks
    assert all((t - ref) % 48 == 0 for t, _ in even.tick_items())
    assert all((t - ref) % 48 == 24 for t, _ in odd.tick_items())


@SLOW
@given(central_charges, st.data())
def prop_physical_characters_rational(c, data):
    spec = _random_spec(c, data)
    assert svoa.character(spec, 3 * 48).is_rational()
    assert svoa.shadow(spec, 3 * 48).is_rational()
    for r in range(spec.k + 1):
        assert svoa.shadow_basis_element(c, r, 48).is_rational()


SWEEP = [Fraction(n, 2) for n in range(1, 97)]


def monotone_statuses(c):
    """Statuses of 'minimal weight > mu' for mu = 0, 1/2, ... past the bound."""
    top = int(c // 24) + 2
    mus = [Fraction(n, 2) for n in range(0, 2 * top + 1)]
    return [(mu, bounds.test_min_weight_exceeds(c, mu).status) for mu in mus]


def check_monotone(c):
    seen_infeasible = False
    for mu, status in monotone_statuses(c):
        assert status in (FEASIBLE, INFEASIBLE), (c, mu, status)
        if seen_infeasible:
            assert status == INFEASIBLE, (c, mu)
        seen_infeasible |= status == INFEASIBLE
    assert seen_infeasible


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SWEEP))
def prop_feasibility_monotone(c):
    check_monotone(c)


def _pentagonal(n_max):
    out = {}
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < n_max:
                out[e] = out.get(e, 0) + (-1) ** abs(kk)
                hit = True
        if not hit:
            break
        k += 1
    return out


@FAST
@given(st.integers(1, 200), st.integers(1, 4))
def prop_euler_product(n, scale):
    # eta(q^s) q^(-s/24) = sum (-1)^k q^(s k(3k-1)/2)
    e = modchar.eta(scale, 48 * n).shift(-2 * scale)
    pent = _pentagonal(n // scale + 1)
    for m in range(n):
        want = pent.get(m // scale, 0) if m % scale == 0 else 0
        assert e.coeff_at_tick(48 * m) == want
    # prod (1+q^n) = 1 / prod (1-q^(2n-1))
    d = modchar.chi_half_tilde(48 * n).scale(Scalar(0, Fraction(1, 2))).shift(-2)
    odd = QSeries.from_dict({0: 1}, 48 * n)
    for m in range(1, n + 1, 2):
        odd = mul(odd, QSeries.from_dict({0: 1, m: -1}, 48 * n))
    assert mul(d, odd).agrees_with(QSeries.one())


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 10))
def prop_j_two_routes(terms):
    # j = (u + 256)^3 / u^2 with u = (eta(q)/eta(q^2))^24
    ticks = 48 * terms
    u = modchar.hauptmodul_u(ticks + 96)
    route = mul(power(u + 256, 3), invert(power(u, 2)))
    assert route.agrees_with(modchar.j_invariant(False, ticks), -48 + ticks)


ALL = {
    "ring axioms": [prop_ring_axioms, prop_product_matches_naive],
    "invert round-trip": [prop_invert_round_trip],
    "Leibniz rule": [prop_leibniz],
    "rebase vs Lagrange (r <= 12)": [prop_rebase_matches_lagrange],
    "even/odd recombination": [prop_even_odd_recombination],
    "zero sqrt2 part on physical characters": [prop_physical_characters_rational],
    "Euler product identity": [prop_euler_product],
    "j: Eisenstein vs hauptmodul": [prop_j_two_routes],
}
