import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_kloosterman

from lowzero.kloosterman import (
    KloostermanInput,
    kloosterman_classical,
    kloosterman_factored,
    kloosterman_nf,
    kloosterman_sweep,
    weil_ratio,
    weil_ratio_classical,
)
from lowzero.nf import FieldElement, UnsupportedFieldError, from_coords, make_field


def _basis_coords(x):
    # coordinates in the basis (1, w)
    if x.d % 4 == 1:
        return (x.a - x.b, 2 * x.b)
    return (x.a, x.b)


def _class_key(x, c):
    # x = y mod c exactly when x/c - y/c lies in O
    return tuple(t % 1 for t in _basis_coords(x / c))


def unit_pairs(F, c):
    """(x, xbar) for the units of O/(c), found from the box {u + v w : 0 <= u, v < |N(c)|}."""
    n = abs(int(c.norm()))
    reps = {}
    for u in range(n):
        for v in range(n):
            x = from_coords(F.d, u, v)
            reps.setdefault(_class_key(x, c), x)
    assert len(reps) == n
    one = _class_key(F.element(1), c)
    xs = list(reps.values())
    return [(x, y) for x in xs for y in xs if _class_key(x * y, c) == one]


def brute_nf(F, alpha, beta, c, pairs):
    total = 0j
    den = c * F.sqrt_disc()
    for x, inv in pairs:
        t = ((alpha * x + beta * inv) / den).trace()
        total += cmath.exp(2j * math.pi * float(t % 1))
    return total


def test_small_values():
    assert kloosterman_classical(1, 1, 1) == pytest.approx(1.0)
    assert kloosterman_classical(1, 1, 3) == pytest.approx(-1.0, abs=1e-12)
    assert kloosterman_classical(1, 1, 5) == pytest.approx(2 + 2 * math.cos(4 * math.pi / 5), abs=1e-12)


@pytest.mark.parametrize("c", list(range(1, 80)))
def test_classical_matches_brute(c):
    for a, b in [(1, 1), (2, 7), (0, 3), (5, 0), (c, 1), (-3, 11)]:
        ref = brute_kloosterman(a, b, c)
        assert abs(ref.imag) < 1e-9
        assert kloosterman_classical(a, b, c) == pytest.approx(ref.real, abs=1e-9)
        assert kloosterman_factored(a, b, c) == pytest.approx(ref.real, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 3000))
def test_symmetry_and_weil(a, b, c):
    s = kloosterman_classical(a, b, c)
    assert kloosterman_classical(b, a, c) == pytest.approx(s, abs=1e-8)
    assert kloosterman_classical(a, b, c) == pytest.approx(kloosterman_classical(a % c, b % c, c), abs=1e-8)
    assert weil_ratio_classical(a, b, c, s) <= 1 + 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**5), st.integers(1, 10**5), st.integers(1, 400), st.integers(1, 400))
def test_unit_scaling(a, b, c, x):
    # S(a x, b xbar; c) = S(a, b; c) for x coprime to c
    if math.gcd(x, c) != 1:
        return
    xbar = pow(x, -1, c)
    assert kloosterman_classical(a * x, b * xbar, c) == pytest.approx(kloosterman_classical(a, b, c), abs=1e-8)


def test_factored_large_prime():
    c = 1_000_003
    assert kloosterman_factored(1, 1, c) == pytest.approx(kloosterman_classical(1, 1, c), abs=1e-6)


def test_rejects_bad_modulus():
    with pytest.raises(ValueError):
        kloosterman_classical(1, 1, 0)
    F = make_field(5)
    with pytest.raises(ValueError):
        kloosterman_nf(KloostermanInput(F, F.element(1), F.element(1), F.element(0)))
    with pytest.raises(ValueError):
        kloosterman_nf(KloostermanInput(F, F.element(Fraction(1, 3)), F.element(1), F.element(2)))
    G = make_field(3)
    with pytest.raises(UnsupportedFieldError):
        kloosterman_nf(KloostermanInput(G, G.element(1), G.element(1), G.element(2)))


def test_rational_sentinel_sign_of_c():
    F = make_field(1)
    for c in (7, -7):
        v = kloosterman_nf(KloostermanInput(F, F.element(2), F.element(3), F.element(c)))
        assert v == kloosterman_classical(2, 3, 7)


@pytest.mark.parametrize("d", [5, 2])
def test_nf_matches_box_oracle(d):
    F = make_field(d)
    alphas = [F.element(1), from_coords(d, 2, 1), from_coords(d, 0, 3)]
    cs = [c for _, c, _, _ in kloosterman_sweep(d, 1, 1, 30)]
    for c in cs:
        pairs = unit_pairs(F, c)
        for alpha in alphas:
            for beta in (F.element(1), from_coords(d, 1, 1)):
                ref = brute_nf(F, alpha, beta, c, pairs)
                got = kloosterman_nf(KloostermanInput(F, alpha, beta, c))
                assert abs(ref.imag) < 1e-9
                assert got == pytest.approx(ref.real, abs=1e-9)


@pytest.mark.parametrize("d", [5, 2, 13])
def test_nf_units_act_trivially(d):
    F = make_field(d)
    eps = F.fund_unit
    for _, c, v, _ in kloosterman_sweep(d, 1, 1, 60):
        # (alpha eta, beta eta^-1) leaves the sum unchanged for any unit eta
        w = kloosterman_nf(KloostermanInput(F, eps, eps.conj() * F.unit_norm, c))
        assert w == pytest.approx(v, abs=1e-9)


@pytest.mark.parametrize("d", [5, 2])
def test_weil_bound_nf(d):
    F = make_field(d)
    beta = from_coords(d, 1, 1)
    for _, c, v, r in kloosterman_sweep(d, F.element(3), beta, 120):
        assert r <= 1 + 1e-9
        assert r == pytest.approx(weil_ratio(KloostermanInput(F, F.element(3), beta, c)), abs=1e-12)
