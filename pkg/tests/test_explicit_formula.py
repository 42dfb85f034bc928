import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import tau_by_recursion

from lowzero.explicit_formula import (
    FileBacked,
    LDescriptor,
    RSProduct,
    SatoTateSampler,
    ScaledSource,
    ZeroCoefficients,
    admissible_limits,
    admissible_u,
    conductor_term,
    explicit_formula_exact,
    family_average,
    gl2_prime_powers,
    nonvanishing_bounds,
    normalized_tau,
    one_level_D,
    prime_sum,
    ramanujan_tau,
    read_coefficients,
    read_zeros,
    two_sided,
    zeros_side,
)
from lowzero.nf import enumerate_prime_ideals, make_field, primes_up_to
from lowzero.testfn import FejerTestFunction

Q = make_field(1)
DATA = Path(__file__).parent / "data"


def test_tau_against_recursion():
    assert ramanujan_tau(10)[1:] == [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
    assert ramanujan_tau(400) == tau_by_recursion(400)


def test_tau_multiplicative_and_deligne():
    t = ramanujan_tau(600)
    for m, n in [(2, 3), (4, 9), (5, 7), (8, 25), (11, 13)]:
        assert t[m * n] == t[m] * t[n]
    for p in primes_up_to(600):
        assert abs(t[p]) <= 2 * p**5.5
    assert all(abs(c) <= 2 for c in normalized_tau(primes_up_to(600)).values())


def test_conductor_examples():
    phi = FejerTestFunction(0.5)
    hmf = LDescriptor.hmf(Q, (12,), 1)
    assert conductor_term(hmf, phi, 144) == pytest.approx(phi.hat_at_zero, rel=1e-14)
    rs = LDescriptor.rs(Q, (2,), 5, (2,), 7, 1)
    R = 1000.0
    assert conductor_term(rs, phi, R) == pytest.approx(phi.hat_at_zero * math.log(35**2 * 16) / math.log(R), rel=1e-14)
    gen = LDescriptor(2, 1, 1.0, (0.25, 0.25), -1)
    assert math.isfinite(conductor_term(gen, phi, 100))
    tiny = LDescriptor(2, 1, 1.0, (1e-9, 0.25), -1)
    assert conductor_term(tiny, phi, 100) == conductor_term(gen, phi, 100)
    with pytest.raises(ValueError):
        conductor_term(hmf, phi, 1.0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(conductor=0.0), dict(kappa=(0.5,)), dict(kappa=(-1.0, 0.5)), dict(kappa=(0.5 + 1j, 0.5)), dict(mode="GL3")],
)
def test_descriptor_validation(kwargs):
    base = dict(degree=2, field_degree=1, conductor=1.0, kappa=(0.5, 1.5), delta=-1)
    base.update(kwargs)
    with pytest.raises(ValueError):
        LDescriptor(**base)


def test_conjugate_pair_accepted():
    LDescriptor(2, 1, 1.0, (0.5 + 1j, 0.5 - 1j), -1)


def test_generic_vs_hmf_conductor_terms():
    worst = 0.0
    R = 1e6
    phi = FejerTestFunction(1.0)
    for k in range(2, 61, 2):
        for N in (1, 7, 1001, 999_983):
            h = LDescriptor.hmf(Q, (k,), N)
            g = LDescriptor(2, 1, h.conductor, h.kappa, -1)
            worst = max(worst, abs(conductor_term(g, phi, R) - conductor_term(h, phi, R)) * math.log(R))
    assert worst <= 10


def test_prime_sum_examples():
    phi = FejerTestFunction(0.5)
    hmf = LDescriptor.hmf(Q, (12,), 1)
    assert prime_sum(hmf, phi, 144, ZeroCoefficients(), Q, 12) == 0.0
    assert prime_sum(hmf, phi, 144, FileBacked({2: 1.0}), Q, 1.5) == 0.0
    single = prime_sum(hmf, phi, 144, FileBacked({2: 1.0}), Q, 2)
    lr = math.log(144)
    assert single == pytest.approx(2 / lr * math.log(2) * float(phi.hat(math.log(2) / lr)) / math.sqrt(2), rel=1e-14)


def test_prime_sum_missing_coefficient():
    phi = FejerTestFunction(0.5)
    with pytest.raises(ValueError):
        prime_sum(LDescriptor.hmf(Q, (12,), 1), phi, 144, FileBacked({2: 1.0}), Q, 12)


def test_level_primes_skipped():
    phi = FejerTestFunction(1.0)
    d = LDescriptor.hmf(Q, (2,), 6)
    src = FileBacked({p: 1.0 for p in primes_up_to(100)})
    with_level = prime_sum(d, phi, 100, src, Q, 100)
    plain = prime_sum(LDescriptor.hmf(Q, (2,), 1), phi, 100, src, Q, 100)
    lr = math.log(100)
    skipped = sum(2 / lr * math.log(p) * float(phi.hat(math.log(p) / lr)) / math.sqrt(p) for p in (2, 3))
    assert plain - with_level == pytest.approx(skipped, rel=1e-12)


def test_one_level_D_constructions():
    for u in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        phi = FejerTestFunction(u)
        hmf = LDescriptor.hmf(Q, (12,), 1)
        assert one_level_D(hmf, phi, 144, ZeroCoefficients(), Q, 1000) == pytest.approx(float(1 / u + Fraction(1, 2)))
        for delta, shift in ((1, Fraction(1, 2)), (4, Fraction(2))):
            rs = LDescriptor.rs(Q, (12,), 1, (16,), 1, delta)
            R = math.exp(2 * math.log(5) + 2 * math.log(28))
            assert one_level_D(rs, phi, R, ZeroCoefficients(), Q, 1000) == pytest.approx(float(1 / u - shift))


def test_linearity_in_source():
    phi = FejerTestFunction(1.0)
    d = LDescriptor.hmf(Q, (12,), 1)
    src = SatoTateSampler(5)
    base = one_level_D(d, phi, 500, ZeroCoefficients(), Q, 500)
    one = one_level_D(d, phi, 500, src, Q, 500)
    two = one_level_D(d, phi, 500, ScaledSource(src, 2.0), Q, 500)
    assert (base - two) == pytest.approx(2 * (base - one), rel=1e-13)


def test_prime_sum_truncation_exact():
    d = LDescriptor.hmf(Q, (12,), 1)
    for u in (0.5, 1.0, 1.5):
        phi = FejerTestFunction(u)
        R = 300.0
        q = math.ceil(R**u)
        src = SatoTateSampler(3)
        assert prime_sum(d, phi, R, src, Q, q) == prime_sum(d, phi, R, src, Q, 2 * q)


def test_zeros_side_examples():
    phi = FejerTestFunction(0.5)
    assert zeros_side([], phi, 144) == 0.0
    assert zeros_side([0.0, 0.0, 0.0], phi, 144) == 3.0


def test_sato_tate_sampler():
    primes = enumerate_prime_ideals(Q, 20000)
    a = SatoTateSampler(7).values(primes)
    assert np.array_equal(a, SatoTateSampler(7).values(primes))
    assert np.array_equal(a[:100], SatoTateSampler(7).values(primes[:100]))
    assert np.all(np.abs(a) <= 2)
    # Sato-Tate moments are the Catalan numbers 1, 2, 5 for C^2, C^4, C^6
    n = len(a)
    for power, expected in ((2, 1), (4, 2), (6, 5)):
        m = np.mean(a**power)
        sd = np.std(a**power) / math.sqrt(n)
        assert abs(m - expected) <= 5 * sd
    assert abs(np.mean(a)) <= 5 / math.sqrt(n)


def test_rs_product():
    primes = enumerate_prime_ideals(Q, 100)
    f, g = SatoTateSampler(1), SatoTateSampler(2)
    assert np.allclose(RSProduct(f, g).values(primes), f.values(primes) * g.values(primes))


def test_family_small_and_deterministic():
    r = family_average("Orthogonal", 1, 1.0, seed=3, Q=1000)
    assert r.M == 1 and not r.stderr_defined and math.isnan(r.stderr)
    assert r.prediction == 1.5 and r.kernel == "O"
    a = family_average("RSSymplectic", 50, 1.0, seed=3, Q=1000)
    b = family_average("RSSymplectic", 50, 1.0, seed=3, Q=1000)
    assert a == b
    assert a.prediction == 0.5 and a.kernel == "Sp"
    with pytest.raises(ValueError):
        family_average("Unitary", 10, 1.0)
    with pytest.raises(ValueError):
        family_average("Orthogonal", 0, 1.0)


def test_family_convergence_rate():
    dev = {}
    errs = {}
    for M in (200, 800):
        reps = [family_average("Orthogonal", M, 1.0, seed=s, Q=2000) for s in range(10)]
        dev[M] = math.sqrt(np.mean([(r.average - r.prediction) ** 2 for r in reps]))
        errs[M] = np.mean([r.stderr for r in reps])
    assert errs[800] == pytest.approx(errs[200] / 2, rel=0.1)
    # an RMS over 10 draws has relative spread about 1/sqrt(20)
    sigma = math.hypot(dev[200] / 2, dev[800]) / math.sqrt(20)
    assert abs(dev[800] - dev[200] / 2) <= 2 * sigma


def test_admissible_u():
    lim = admissible_limits()
    assert lim["HMF_level"] == Fraction(3, 2)
    assert lim["HMF_weight"] == Fraction(2, 3)
    assert lim["RS_level"] == Fraction(3, 4)
    assert admissible_u("HMF", (2,), 10**3000) == pytest.approx(1.5, abs=1e-3)
    assert admissible_u("HMF", (10**150,), 1) == pytest.approx(2 / 3, abs=1e-12)
    assert admissible_u("RS", (2,), 10**3000, (4,), 1) == pytest.approx(0.75, abs=1e-3)
    with pytest.raises(ValueError):
        admissible_u("HMF", (1,), 1)


def test_nonvanishing_bounds():
    b = nonvanishing_bounds(Fraction(3, 2))
    assert b.mP_bound == Fraction(7, 6)
    assert nonvanishing_bounds(2).mQ_bound == 0
    assert nonvanishing_bounds(Fraction(2, 3)).Q0_lower == Fraction(1, 2)
    with pytest.raises(ValueError):
        nonvanishing_bounds(0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 20.0))
def test_nonvanishing_bounds_float(u):
    b = nonvanishing_bounds(u)
    assert b.mP_bound == 1 / u + 0.5
    assert b.mQ_bound == 1 / (2 * u) - 0.25
    assert b.Q0_lower == 1.25 - 1 / (2 * u)


def test_file_readers(tmp_path):
    c = tmp_path / "c.csv"
    c.write_text("# prime_norm,lambda\n2,-0.5\n3,0.25\n")
    assert read_coefficients(c).table == {2: -0.5, 3: 0.25}
    c.write_text("2,1,3\n")
    with pytest.raises(ValueError):
        read_coefficients(c)
    z = tmp_path / "z.txt"
    z.write_text("1.5\n2.5 # second\n")
    assert read_zeros(z) == [1.5, 2.5]
    z.write_text("2.5\n1.5\n")
    with pytest.raises(ValueError):
        read_zeros(z)


def test_gl2_prime_powers():
    pp = dict(gl2_prime_powers({2: 0.5, 3: -1.0}, 100, 1.0))
    assert pp[2] == pytest.approx(0.5 * math.log(2))
    assert pp[4] == pytest.approx((0.25 - 2) * math.log(2))  # alpha^2 + beta^2 = C^2 - 2
    assert pp[27] == pytest.approx((-1.0 * (1 - 2) - (-1.0)) * math.log(3))
    assert max(pp) < 100


def test_exact_formula_against_zeta_zeros():
    mpmath = pytest.importorskip("mpmath")
    # zeta: degree 1, gamma shift 0, simple poles at s = 0 and 1
    desc = LDescriptor(1, 1, 1.0, (0.0,), 1)
    R = math.exp(4.0)
    phi = FejerTestFunction(1.0)
    pp = [(n, math.log(p)) for p in primes_up_to(R) for n in (p ** e for e in range(1, 20)) if n < R]
    exact = explicit_formula_exact(desc, phi, R, pp, poles=1)
    zeros = [float(mpmath.zetazero(n).imag) for n in range(1, 301)]
    # phi_1 decays like (log R gamma / 2 pi)^-2 / pi^2 past the last zero
    assert 2 * zeros_side(zeros, phi, R) == pytest.approx(exact, abs=1e-3)


def test_two_sided_requires_coefficients():
    phi = FejerTestFunction(0.5)
    with pytest.raises(ValueError):
        two_sided(LDescriptor.hmf(Q, (12,), 1), phi, 144, {2: 0.1}, None)
