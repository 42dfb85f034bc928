"""Geometric side of the Petersson formula over Q and narrow-class-one real quadratic fields.

With narrow class number one every ideal has a totally positive generator, so
the ideal-twisted Kloosterman sums reduce to sums over O/(c) and the argument
ideals are represented by their generators.  The c-sum runs over all nonzero
c in the level; it is organised as unit orbits of the representatives from
``enumerate_ideal_elements`` ordered by |N(c)|, and truncated at |N(c)| <= B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .bessel import MAX_ARG, bessel_j, bessel_j_large
from .kloosterman import ResidueSystem, kloosterman_factored
from .nf import (
    FieldElement,
    IdealRec,
    QuadField,
    divisor_count,
    divisors,
    enumerate_ideal_elements,
    euler_level_product,
    factor_ideal,
    ideal_from_generators,
    ideal_generator,
    ideal_mul,
    ideal_quotient,
    ideal_sum,
    ideals_up_to,
    is_squarefree_ideal,
    moebius,
    principal_ideal,
    tau,
    totally_positive_unit_reps,
    unit_ideal,
)

SUMMATION_ORDER = "increasing |N(c)|, then representative c0, then c0 eps^m for m = 0, 1, 2, ..., -1, -2, ..."
REMAINDER_LABEL = "Delta_infinity"
ORBIT_TOL = 1e-18
MAX_ORBIT = 400


def _check_weight(F: QuadField, k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if len(k) != F.degree:
        raise ValueError(f"{F} needs {F.degree} weights, got {len(k)}")
    if any(x < 2 or x % 2 for x in k):
        raise ValueError(f"weights must be even and >= 2, got {k}")
    return k


@dataclass(frozen=True)
class PeterssonParams:
    field: QuadField
    k: tuple[int, ...]
    level: IdealRec
    B: float = 10_000
    X: float = 1.0
    Y: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "k", _check_weight(self.field, self.k))
        if self.level.d != self.field.d:
            raise ValueError("level ideal belongs to a different field")
        if not is_squarefree_ideal(self.field, self.level):
            raise ValueError("level must be squarefree")
        if self.B < 0:
            raise ValueError("truncation B must be >= 0")
        if self.X < 1 or self.Y < 1:
            raise ValueError("X and Y must be >= 1")

    def with_level(self, level: IdealRec) -> "PeterssonParams":
        return PeterssonParams(self.field, self.k, level, self.B, self.X, self.Y)


def weight_norm(k: Sequence[int], shift: int = 0) -> int:
    """N(k + shift) = prod_j (k_j + shift)."""
    return math.prod(x + shift for x in k)


def kf_constant(F: QuadField) -> float:
    """2^(n-2) (2 pi)^(2n) R_F / (zeta_F(2) d_F^2); R_Q is taken as 1."""
    n = F.degree
    return 2.0 ** (n - 2) * (2 * math.pi) ** (2 * n) * F.regulator / (F.zeta2 * F.disc**2)


def leading_constant(F: QuadField, k: Sequence[int]) -> float:
    k = _check_weight(F, k)
    sign = -1.0 if (sum(k) // 2) % 2 else 1.0
    return sign * (2 * math.pi) ** F.degree / (2 * math.sqrt(F.disc))


@dataclass(frozen=True)
class GeometricTerm:
    c_norm: int
    c: FieldElement
    kloosterman: float
    bessel: float
    term: float
    envelope: float


@dataclass
class GeometricDelta:
    diagonal: int
    correction: float
    terms: list[GeometricTerm]
    metadata: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.diagonal + self.correction


def _as_element(F: QuadField, x) -> FieldElement:
    return x if isinstance(x, FieldElement) else F.element(x)


def _bessel_any(nu: int, x: float) -> float:
    return bessel_j(nu, x) if x <= MAX_ARG else bessel_j_large(nu, x)


def _bessel_envelope(k: Sequence[int], xs: Sequence[float]) -> float:
    return math.prod(min(1.0, x / kj) * kj ** (-1.0 / 3.0) for kj, x in zip(k, xs))


def _small_arg_bound(nu: int, x: float) -> float:
    """|J_nu(x)| <= (x/2)^nu / nu!, and never more than 1."""
    if x <= 0:
        return 0.0
    return min(1.0, math.exp(nu * math.log(x / 2) - math.lgamma(nu + 1)))


def _classical_delta(params: PeterssonParams, a: int, b: int) -> GeometricDelta:
    k = params.k[0]
    N = params.level.a
    C = leading_constant(params.field, params.k)
    if a * b <= 0:
        raise ValueError("alpha * beta must be positive")
    diagonal = int(a == b)
    terms = []
    total = 0.0
    root = 4 * math.pi * math.sqrt(a * b)
    g0 = math.gcd(a, b)
    for c in range(N, int(params.B) + 1, N):
        kl = kloosterman_factored(a, b, c)
        x = root / c
        jb = bessel_j(k - 1, x)
        # c and -c give the same real contribution
        term = 2 * C * kl * jb / c
        weil = math.sqrt(math.gcd(g0, c)) * divisor_count(c) * math.sqrt(c)
        env = 2 * abs(C) * weil * _bessel_envelope((k,), (x,)) / c
        terms.append(GeometricTerm(c, FieldElement(1, Fraction(c)), kl, jb, term, env))
        total += term
    return GeometricDelta(diagonal, total, terms)


def _quadratic_delta(params: PeterssonParams, alpha: FieldElement, beta: FieldElement) -> GeometricDelta:
    F = params.field
    k = params.k
    C = leading_constant(F, k)
    if alpha.is_zero() or beta.is_zero():
        raise ValueError("alpha and beta must be nonzero")
    diagonal = int(principal_ideal(F, alpha) == principal_ideal(F, beta))
    eps_p = F.totally_positive_unit
    steps = {1: eps_p, -1: eps_p.conj()}  # N(eps_p) = 1
    g_ab = ideal_from_generators(F, [alpha, beta])
    terms = []
    total = 0.0
    for c0 in enumerate_ideal_elements(F, params.level, params.B):
        n = abs(int(c0.norm()))
        rs = ResidueSystem(F, c0)
        cid = principal_ideal(F, c0)
        weil = tau(F, cid) * math.sqrt(n) * math.sqrt(ideal_sum(g_ab, cid).norm)
        for eps in totally_positive_unit_reps(F):
            prod_ab = eps * alpha * beta
            if not prod_ab.is_totally_positive():
                raise ValueError("eps * alpha * beta must be totally positive")
            # the Kloosterman convention divides by c sqrt(D), so the
            # Bessel argument carries |sqrt(D)|^-1 in every embedding
            roots = [4 * math.pi * math.sqrt(v / F.disc) for v in prod_ab.embeddings()]

            def add(c: FieldElement) -> None:
                nonlocal total
                xs = [r / abs(e) for r, e in zip(roots, c.embeddings())]
                jb = math.prod(_bessel_any(kj - 1, x) for kj, x in zip(k, xs))
                kl = rs.kloosterman(eps * alpha, beta, c)
                term = 2 * C * kl * jb / n
                env = 2 * abs(C) * weil * _bessel_envelope(k, xs) / n
                terms.append(GeometricTerm(n, c, kl, jb, term, env))
                total += term

            add(c0)
            # walking along the orbit one embedding of c grows and the
            # matching Bessel argument shrinks; |Kl| / |N(c)| <= 1 and
            # |J| <= 1 bound everything else
            for direction, j in ((1, 0), (-1, 1)):
                c = c0
                for _ in range(MAX_ORBIT):
                    c = c * steps[direction]
                    x = roots[j] / abs(c.embeddings()[j])
                    nu = k[j] - 1
                    if x < nu and 2 * abs(C) * _small_arg_bound(nu, x) < ORBIT_TOL:
                        break
                    add(c)
                else:
                    raise ArithmeticError("unit orbit did not converge")
    return GeometricDelta(diagonal, total, terms)


def geometric_delta(params: PeterssonParams, alpha, beta) -> GeometricDelta:
    """1_{(alpha) = (beta)} + C * sum over nonzero c in the level of Kl * J / |N(c)|.

    Each +-c pair is combined into one term.  The spectral remainder beyond
    the truncation is not evaluated.
    """
    F = params.field
    F.require_narrow_one()
    alpha = _as_element(F, alpha)
    beta = _as_element(F, beta)
    if F.is_rational:
        out = _classical_delta(params, int(alpha.a), int(beta.a))
    else:
        out = _quadratic_delta(params, alpha, beta)
    out.metadata = {
        "summation_order": SUMMATION_ORDER,
        "truncation_B": params.B,
        "terms": len(out.terms),
        "unevaluated_remainder": "spectral tail beyond |N(c)| <= B",
    }
    return out


def size_of_newspace_main(F: QuadField, k: Sequence[int], level: IdealRec) -> float:
    """K_F^{-1} N(k - 1) N(level) prod_{p | level} (1 - 1/N(p))."""
    k = _check_weight(F, k)
    if not is_squarefree_ideal(F, level):
        raise ValueError("level must be squarefree")
    return weight_norm(k, -1) * level.norm * float(euler_level_product(F, level)) / kf_constant(F)


def preset_xy(k: Sequence[int], level_norm: int, delta: float = 0.25) -> tuple[float, float]:
    """X = N(k)^((4/3 - delta)/(7/2 - delta)) N(level)^((3/2 - delta)/(7/2 - delta)), Y = X^2."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    den = 3.5 - delta
    X = weight_norm(k) ** ((4 / 3 - delta) / den) * level_norm ** ((1.5 - delta) / den)
    return X, X * X


@dataclass
class DeltaPrime:
    value: float
    X: float
    Y: float
    pieces: list[tuple[int, int, int, float]]  # (N(l), N(m), N(ell), weighted Delta)
    remainder: str = REMAINDER_LABEL


def delta_prime_truncated(params: PeterssonParams, a: IdealRec) -> DeltaPrime:
    """K_F^{-1} N(k-1) sum_{lm = n, N(l) <= X} mu(l) N(m) sum_{(ell, m) = 1, N(ell) <= Y}
    Delta_{k,m}(ell^2, a) / N(ell)."""
    F = params.field
    F.require_narrow_one()
    n = params.level
    if ideal_sum(a, n).norm != 1:
        raise ValueError("the ideal a must be coprime to the level")
    scale = weight_norm(params.k, -1) / kf_constant(F)
    beta = ideal_generator(F, a)
    total = 0.0
    pieces = []
    for m in divisors(F, n):
        l = ideal_quotient(F, n, m)
        if l.norm > params.X:
            continue
        mu = moebius(F, l)
        sub = params.with_level(m)
        for ell in ideals_up_to(F, params.Y, coprime_to=m):
            alpha = ideal_generator(F, ideal_mul(ell, ell))
            d = geometric_delta(sub, alpha, beta).value
            w = scale * mu * m.norm * d / ell.norm
            pieces.append((l.norm, m.norm, ell.norm, w))
            total += w
    return DeltaPrime(total, params.X, params.Y, pieces)


# ---------------------------------------------------------------------------
# synthetic spectra and the Moebius-inversion identities
#
# Ideals are exponent vectors over a finite list of primes (given by norm).
# Every identity below factors prime by prime once the coefficients are
# multiplicative, so the infinite ideal sums are products of local series.

LOCAL_TERMS = 80


def local_z(norm: int, lam: float, ramified: bool) -> float:
    """sum_j C(p^2j) N(p)^-j in closed form."""
    N = float(norm)
    if ramified:
        return 1.0 / (1.0 - 1.0 / (N * N))
    return N * (N + 1) / ((N + 1) ** 2 - lam * lam * N)


@dataclass(frozen=True)
class PseudoForm:
    """Multiplicative coefficients on the prime support, with a level.

    At a prime in the level C(p^j) = C(p)^j with C(p) = +-N(p)^(-1/2);
    elsewhere C(p^j) follows C(p^(j+1)) = C(p) C(p^j) - C(p^(j-1)).
    """

    level: frozenset[int]
    lam: tuple[float, ...]

    def local(self, i: int, j: int, norms: Sequence[int]) -> float:
        lam = self.lam[i]
        if i in self.level:
            return lam**j
        prev, cur = 0.0, 1.0
        for _ in range(j):
            prev, cur = cur, lam * cur - prev
        return cur

    def coefficient(self, exps: Sequence[int], norms: Sequence[int]) -> float:
        return math.prod(self.local(i, e, norms) for i, e in enumerate(exps) if e)

    def z_weight(self, norms: Sequence[int]) -> float:
        """The value playing Z(1, f): the product of the local factors."""
        return math.prod(local_z(N, self.lam[i], i in self.level) for i, N in enumerate(norms))

    def local_square_sum(self, i: int, norms: Sequence[int], terms: int = LOCAL_TERMS) -> float:
        """Truncated sum_j C(p^2j) / N(p)^j, summed term by term."""
        N = norms[i]
        return sum(self.local(i, 2 * j, norms) / N**j for j in range(terms))


@dataclass(frozen=True)
class SyntheticSpectrum:
    norms: tuple[int, ...]
    forms: tuple[PseudoForm, ...]

    def __post_init__(self):
        for f in self.forms:
            if len(f.lam) != len(self.norms):
                raise ValueError("coefficient vector does not match the prime support")
            for i, N in enumerate(self.norms):
                if i in f.level:
                    if not math.isclose(f.lam[i] ** 2, 1.0 / N, rel_tol=1e-12):
                        raise ValueError("level prime needs C(p) = +-N(p)^(-1/2)")
                elif abs(f.lam[i]) >= 2:
                    raise ValueError("coefficients away from the level must lie in (-2, 2)")

    def level_forms(self, level: frozenset[int]) -> list[PseudoForm]:
        return [f for f in self.forms if f.level == level]


def random_spectrum(
    rng: np.random.Generator, norms: Sequence[int], level: Sequence[int], forms_per_level: int = 3
) -> SyntheticSpectrum:
    """Forms at every divisor of the squarefree level given as a set of prime indices."""
    norms = tuple(int(N) for N in norms)
    level = sorted(set(level))
    forms = []
    for r in range(len(level) + 1):
        for sub in _subsets(level, r):
            for _ in range(forms_per_level):
                lam = []
                for i, N in enumerate(norms):
                    if i in sub:
                        lam.append(float(rng.choice([-1.0, 1.0])) / math.sqrt(N))
                    else:
                        lam.append(float(rng.uniform(-1.95, 1.95)))
                forms.append(PseudoForm(frozenset(sub), tuple(lam)))
    return SyntheticSpectrum(norms, tuple(forms))


def _subsets(items: Sequence[int], r: int):
    from itertools import combinations

    return (frozenset(c) for c in combinations(items, r))


def _divisor_pairs(n: frozenset[int]):
    """(l, m) with l m = n for a squarefree n."""
    items = sorted(n)
    for r in range(len(items) + 1):
        for l in _subsets(items, r):
            yield l, n - l


class _Lattice:
    """Normalised Petersson-type sums of a synthetic spectrum (K_F / N(k-1) dropped)."""

    def __init__(self, spec: SyntheticSpectrum):
        self.spec = spec
        self.norms = spec.norms
        self.z = {f: f.z_weight(self.norms) for f in spec.forms}

    def z_part(self, f: PseudoForm, primes: frozenset[int]) -> float:
        return math.prod(local_z(self.norms[i], f.lam[i], i in f.level) for i in primes)

    def coeff(self, f: PseudoForm, exps) -> float:
        return f.coefficient(exps, self.norms)

    def delta_star(self, m: frozenset[int], a, b, extra=None) -> float:
        """sum_{f in Pi(m)} Z_m/Z C(a) C(b), with an optional per-form factor on C(a)."""
        out = 0.0
        for f in self.spec.level_forms(m):
            w = self.z_part(f, m) / self.z[f]
            ca = self.coeff(f, a) if extra is None else extra(f)
            out += w * ca * self.coeff(f, b)
        return out

    def delta_direct(self, n: frozenset[int], a, b, shift=None) -> float:
        """N(n) Delta_n(a, b) from the old-form expansion with weights Z_n / Z.

        ``shift`` = (primes, exps) multiplies a by the square of an ideal
        supported on ``primes``; those primes must avoid a.
        """
        out = 0.0
        for l, m in _divisor_pairs(n):
            for f in self.spec.level_forms(m):
                w = self.z_part(f, n) / self.z[f]
                out += w * self.coeff(f, self._apply(a, shift)) * self.coeff(f, b)
        return out

    def delta_via_star(self, n: frozenset[int], a, b) -> float:
        """N(n) Delta_n(a, b) from sum_{lm = n} sum_{ell | l^inf} Delta*_m(a ell^2, b) / N(ell)."""
        out = 0.0
        for l, m in _divisor_pairs(n):
            out += self._ell_sum(l, lambda shift: self.delta_star(m, self._apply(a, shift), b))
        return out

    def _apply(self, a, shift):
        if shift is None:
            return tuple(a)
        exps = list(a)
        for i, e in shift:
            exps[i] += 2 * e
        return tuple(exps)

    def _ell_sum(self, l: frozenset[int], fn) -> float:
        """sum over ell | l^inf of fn(ell) / N(ell), term by term."""
        items = sorted(l)
        total = 0.0
        for es in product(range(LOCAL_TERMS), repeat=len(items)):
            shift = tuple(zip(items, es))
            norm = math.prod(self.norms[i] ** e for i, e in shift)
            total += fn(shift if shift else None) / norm
        return total


def _validate_ideals(spec: SyntheticSpectrum, n, a, b) -> frozenset[int]:
    size = len(spec.norms)
    for name, v in (("n", n), ("a", a), ("b", b)):
        if len(v) != size or any(e < 0 for e in v):
            raise ValueError(f"ideal {name} is not an exponent vector on the {size}-prime support")
    if any(e > 1 for e in n):
        raise ValueError("level must be squarefree")
    level = frozenset(i for i, e in enumerate(n) if e)
    if any(a[i] or b[i] for i in level):
        raise ValueError("a and b must be coprime to the level")
    levels = {f.level for f in spec.forms}
    for l, m in _divisor_pairs(level):
        if m not in levels:
            raise ValueError("spectrum has no forms at a divisor of the level")
    return level


@dataclass
class IdentityResiduals:
    old_form_expansion: float  # first vs second form of the Delta expansion
    inversion: float  # Delta* recovered by Moebius inversion
    star_sum: float  # sum of C(a) over Pi(n) from Delta*
    prime_sum_form: float  # sum of C(a) over Pi(n) from the Delta_m

    @property
    def max(self) -> float:
        return max(self.old_form_expansion, self.inversion, self.star_sum, self.prime_sum_form)


def moebius_identity_residuals(spec: SyntheticSpectrum, n, a, b) -> IdentityResiduals:
    level = _validate_ideals(spec, n, a, b)
    lat = _Lattice(spec)
    a, b = tuple(a), tuple(b)
    support = frozenset(range(len(spec.norms)))

    # Delta_n two ways
    r1 = abs(lat.delta_direct(level, a, b) - lat.delta_via_star(level, a, b))

    # Delta*_n(a, b) = sum_{lm = n} mu(l) sum_{ell | l^inf} N(m) Delta_m(a ell^2, b) / N(ell)
    lhs = lat.delta_star(level, a, b)
    rhs = 0.0
    for l, m in _divisor_pairs(level):
        mu = (-1) ** len(l)
        rhs += mu * lat._ell_sum(l, lambda shift: lat.delta_direct(m, a, b, shift))
    r2 = abs(lhs - rhs)

    # sum_{f in Pi(n)} C(b) = sum_{(q, n) = 1} Delta*_n(q^2, b) / N(q)
    direct = sum(lat.coeff(f, b) for f in spec.level_forms(level))
    away = support - level

    def star_factor(f: PseudoForm) -> float:
        return math.prod(f.local_square_sum(i, spec.norms) for i in away)

    r3 = abs(direct - lat.delta_star(level, (0,) * len(a), b, extra=star_factor))

    # ... = sum_{lm = n} mu(l) N(m) sum_{(ell, m) = 1} Delta_m(ell^2, b) / N(ell)
    total = 0.0
    for l, m in _divisor_pairs(level):
        mu = (-1) ** len(l)
        outside = support - m
        for ll, mm in _divisor_pairs(m):
            for f in spec.level_forms(mm):
                w = lat.z_part(f, m) / lat.z[f]
                s = math.prod(f.local_square_sum(i, spec.norms) for i in outside)
                total += mu * w * s * lat.coeff(f, b)
    r4 = abs(direct - total)
    return IdentityResiduals(r1, r2, r3, r4)


def moebius_identity_check(spec: SyntheticSpectrum, n, a, b) -> float:
    """Largest residual over the four Moebius-lattice identities."""
    return moebius_identity_residuals(spec, n, a, b).max
