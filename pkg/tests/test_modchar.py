from fractions import Fraction

import pytest

from svoachar import QSeries, Scalar, mul
from svoachar.modchar import (
    CharName,
    build,
    central_charge,
    chi_half,
    chi_half_tilde,
    eisenstein,
    eta,
    hauptmodul_u,
    j_invariant,
    mckay_thompson,
    n1_vacuum,
    verma_generic,
    virasoro_vacuum,
)
from svoachar.qseries import power


def _partitions(n, parts):
    """Brute-force partition count of n into the given allowed parts."""
    ways = [1] + [0] * n
    for p in parts:
        for m in range(p, n + 1):
            ways[m] += ways[m - p]
    return ways


def _distinct_partitions(n, parts):
    ways = [1] + [0] * n
    for p in parts:
        for m in range(n, p - 1, -1):
            ways[m] += ways[m - p]
    return ways


def test_central_charge_validation():
    assert central_charge("23.5") == Fraction(47, 2)
    for bad in ("1/3", 0, -1):
        with pytest.raises(ValueError):
            central_charge(bad)


def test_chi_half_is_distinct_odd_half_parts():
    chi = chi_half(48 * 10)
    # in units of q^(1/2): parts 1, 3, 5, ...
    want = _distinct_partitions(19, range(1, 20, 2))
    assert [chi.coeff_at_tick(-1 + 24 * n) for n in range(20)] == want


def test_chi_half_tilde_leading_and_24th_power():
    t = chi_half_tilde(48 * 4)
    assert t.coeff_at_tick(2) == Scalar(0, 1)
    assert t.coeff_at_tick(50) == Scalar(0, 1)
    p24 = power(t, 24)
    assert p24.min_tick == 48 and p24.leading_coefficient() == 4096


def test_virasoro_vacuum_matches_partitions():
    vac = virasoro_vacuum(24, 48 * 12)
    want = _partitions(11, range(2, 12))
    assert [vac.coeff_at_tick(-48 + 48 * n) for n in range(12)] == want


def test_n1_vacuum_matches_partitions():
    n = 30
    vac = n1_vacuum(48, 24 * n)
    # half-integer units: distinct odd parts >= 3 times unrestricted even parts >= 4
    odd = _distinct_partitions(n - 1, range(3, n, 2))
    even = _partitions(n - 1, range(4, n, 2))
    want = [sum(odd[i] * even[m - i] for i in range(m + 1)) for m in range(n)]
    assert [vac.coeff_at_tick(-96 + 24 * m) for m in range(n)] == want
    assert want[:8] == [1, 0, 0, 1, 1, 1, 1, 2]


def test_verma_sectors():
    v = verma_generic(48, 2, "plain", 48 * 6)
    assert [v.coeff_at_tick(0 + 48 * n) for n in range(6)] == _partitions(5, range(1, 6))
    ns = verma_generic(48, Fraction(5, 2), "NS", 24 * 4)
    assert [ns.coeff_at_tick(24 + 24 * n) for n in range(4)] == [1, 1, 1, 2]
    with pytest.raises(ValueError):
        verma_generic(48, 2, "R")


def test_eta_pentagonal():
    e = eta(1, 48 * 16)
    got = {n: e.coeff_at_tick(2 + 48 * n) for n in range(16)}
    assert got[0] == 1 and got[1] == -1 and got[2] == -1 and got[5] == 1 and got[7] == 1
    assert got[12] == -1 and got[15] == -1 and got[3] == 0


def test_eisenstein_identity():
    # E4^2 = E8 = 1 + 480 sum sigma_7(n) q^n
    e4 = eisenstein(4, 48 * 8)
    sq = mul(e4, e4)
    sigma7 = lambda n: sum(d**7 for d in range(1, n + 1) if n % d == 0)
    assert [sq.coeff_at_tick(48 * n) for n in range(1, 8)] == [480 * sigma7(n) for n in range(1, 8)]
    with pytest.raises(ValueError):
        eisenstein(2)


def test_j_coefficients():
    j = j_invariant(False, 48 * 5)
    assert [j.coeff_at_tick(48 * n) for n in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]
    J = j_invariant(True, 48 * 3)
    assert J.coeff_at_tick(0) == 0


def test_hauptmodul_u():
    u = hauptmodul_u(48 * 5)
    assert [u.coeff_at_tick(48 * n) for n in range(-1, 4)] == [1, -24, 276, -2048, 11202]


def test_mckay_thompson_goldens():
    t2a = mckay_thompson("2A", 48 * 5)
    assert [t2a.coeff_at_tick(48 * n) for n in range(-1, 4)] == [1, 0, 4372, 96256, 1240002]
    t2b = mckay_thompson("2B", 48 * 5)
    assert [t2b.coeff_at_tick(48 * n) for n in range(-1, 4)] == [1, 0, 276, -2048, 11202]
    t1a = mckay_thompson("1a", 48 * 3)
    assert t1a.coeff_at_tick(48) == 196884
    with pytest.raises(ValueError):
        mckay_thompson("3A")


def test_t2a_from_thompson_identity():
    # T_2A - T_2B = 4096/u
    u = hauptmodul_u(48 * 6)
    diff = mckay_thompson("2A", 48 * 5) - mckay_thompson("2B", 48 * 5)
    scaled = mul(diff, u)
    assert scaled.agrees_with(QSeries.one().scale(4096))


def test_u_from_eta_quotient():
    from svoachar import invert
    ratio = mul(eta(1, 48 * 8), invert(eta(2, 48 * 8)))
    assert power(ratio, 24).agrees_with(hauptmodul_u(48 * 6))


def test_build_dispatch():
    assert build(CharName("McKayThompson", cls="2B"), 48 * 3).coeff_at_tick(48) == 276
    assert build(CharName("JNormalized"), 48 * 2).coeff_at_tick(0) == 0
    assert build(CharName("VirasoroVacuum", c=Fraction(47, 2)), 48).coeff_at_tick(-47) == 1
    with pytest.raises(ValueError):
        build(CharName("Theta"))
