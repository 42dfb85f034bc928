"""One-level density of a single L-function, of synthetic families, and support arithmetic.

Three ways to talk about D(f; phi):

* ``one_level_D``: the leading-order formula with conductor term, the
  +-phi(0)/2 term coming from the mean of Lambda(p^2), and the sum over primes;
* ``explicit_formula_exact``: every prime power and the exact gamma-factor
  integral, which equals the zero sum for an actual L-function;
* ``zeros_side``: the zero sum itself, from a list of ordinates.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate, special

from .nf import (
    IdealRec,
    PrimeIdealRec,
    QuadField,
    enumerate_prime_ideals,
    make_field,
    primes_up_to,
    principal_ideal,
)
from .testfn import FejerTestFunction, integral_against_kernel

MODES = ("Generic", "HMF", "RS", "Synthetic")
KAPPA_FLOOR = 0.25


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class LDescriptor:
    degree: int
    field_degree: int
    conductor: float
    kappa: tuple[complex, ...]
    delta: int
    mode: str = "Generic"
    k: tuple[int, ...] = ()
    level_norm: int = 1
    k2: tuple[int, ...] = ()
    level2_norm: int = 1
    bad_primes: tuple[IdealRec, ...] = ()
    log_conductor: float | None = None  # Synthetic members only

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.conductor <= 0:
            raise ValueError("conductor must be positive")
        if len(self.kappa) != self.degree * self.field_degree:
            raise ValueError(f"need {self.degree * self.field_degree} gamma shifts, got {len(self.kappa)}")
        for x in self.kappa:
            z = complex(x)
            if z.real <= -1:
                raise ValueError("gamma shifts need real part > -1")
            if z.imag and not any(abs(complex(y) - z.conjugate()) < 1e-12 for y in self.kappa):
                raise ValueError("complex gamma shifts must come in conjugate pairs")
        if self.mode == "Synthetic" and self.log_conductor is None:
            raise ValueError("synthetic descriptors need log_conductor")

    @classmethod
    def hmf(cls, F: QuadField, k: Sequence[int], level: IdealRec | int = 1) -> "LDescriptor":
        k = _weights(F, k)
        level = _level_ideal(F, level)
        kappa = tuple(x for kj in k for x in ((kj - 1) / 2, (kj + 1) / 2))
        return cls(
            degree=2,
            field_degree=F.degree,
            conductor=level.norm * F.disc,
            kappa=kappa,
            delta=-1,
            mode="HMF",
            k=k,
            level_norm=level.norm,
            bad_primes=_prime_support(F, level),
        )

    @classmethod
    def rs(
        cls,
        F: QuadField,
        k: Sequence[int],
        level: IdealRec | int,
        k2: Sequence[int],
        level2: IdealRec | int,
        delta: int,
    ) -> "LDescriptor":
        k, k2 = _weights(F, k), _weights(F, k2)
        level, level2 = _level_ideal(F, level), _level_ideal(F, level2)
        if math.gcd(level.norm, level2.norm) != 1:
            raise ValueError("levels must be coprime")
        if delta < 1:
            raise ValueError("pole order of the Rankin-Selberg square must be >= 1")
        kappa = []
        for a, b in zip(k, k2):
            lo, hi = abs(a - b) / 2, (a + b) / 2
            kappa += [lo, lo + 1, hi - 1, hi]
        return cls(
            degree=4,
            field_degree=F.degree,
            conductor=float(F.disc**2 * level.norm * level2.norm) ** 2,
            kappa=tuple(kappa),
            delta=delta,
            mode="RS",
            k=k,
            level_norm=level.norm,
            k2=k2,
            level2_norm=level2.norm,
            bad_primes=_prime_support(F, level) + _prime_support(F, level2),
        )

    @classmethod
    def synthetic(cls, F: QuadField, log_conductor: float, delta: int, degree: int = 2) -> "LDescriptor":
        """A stand-in member whose conductor term is phi_hat(0) log_conductor / log R."""
        return cls(
            degree=degree,
            field_degree=F.degree,
            conductor=1.0,
            kappa=(0.5,) * (degree * F.degree),
            delta=delta,
            mode="Synthetic",
            log_conductor=log_conductor,
        )


def _weights(F: QuadField, k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if len(k) != F.degree or any(x < 2 or x % 2 for x in k):
        raise ValueError(f"need {F.degree} even weights >= 2, got {k}")
    return k


def _level_ideal(F: QuadField, level: IdealRec | int) -> IdealRec:
    if isinstance(level, IdealRec):
        return level
    if int(level) < 1:
        raise ValueError("level norm must be >= 1")
    return principal_ideal(F, F.element(int(level)))


def _prime_support(F: QuadField, I: IdealRec) -> tuple[IdealRec, ...]:
    from .nf import factor_ideal

    return tuple(P.ideal for P, _ in factor_ideal(F, I))


# ---------------------------------------------------------------------------
# coefficient sources: C(p) for each prime ideal, in the order given


class CoefficientSource:
    def values(self, primes: Sequence[PrimeIdealRec]) -> np.ndarray:
        raise NotImplementedError


@dataclass
class ZeroCoefficients(CoefficientSource):
    def values(self, primes):
        return np.zeros(len(primes))


@dataclass
class FileBacked(CoefficientSource):
    """C(p) keyed by prime norm; conjugate split primes share a value."""

    table: dict[int, float]

    def values(self, primes):
        out = np.empty(len(primes))
        for i, P in enumerate(primes):
            try:
                out[i] = self.table[P.norm]
            except KeyError:
                raise ValueError(f"no coefficient for prime norm {P.norm}") from None
        return out


@dataclass
class SatoTateSampler(CoefficientSource):
    """C(p) = trace of a Haar-random element of SU(2).

    The first coordinate of a uniform point on the 3-sphere has density
    (2/pi) sqrt(1 - x^2), so 2 x follows the Sato-Tate law.  Draws are made in
    prime order, so a longer prime list extends a shorter one.
    """

    seed: int | np.random.SeedSequence

    def values(self, primes):
        ss = self.seed if isinstance(self.seed, np.random.SeedSequence) else np.random.SeedSequence(self.seed)
        g = np.random.default_rng(ss).standard_normal((len(primes), 4))
        return 2.0 * g[:, 0] / np.linalg.norm(g, axis=1)


@dataclass
class RSProduct(CoefficientSource):
    first: CoefficientSource
    second: CoefficientSource

    def values(self, primes):
        return self.first.values(primes) * self.second.values(primes)


@dataclass
class ScaledSource(CoefficientSource):
    base: CoefficientSource
    factor: float

    def values(self, primes):
        return self.factor * self.base.values(primes)


# ---------------------------------------------------------------------------
# the explicit formula


def _check_R(R: float) -> float:
    if R <= 1:
        raise ValueError("R must exceed 1")
    return math.log(R)


def conductor_term(desc: LDescriptor, phi: FejerTestFunction, R: float) -> float:
    logR = _check_R(R)
    if desc.mode == "HMF":
        log_c = math.log(desc.level_norm) + 2 * sum(math.log(x) for x in desc.k)
    elif desc.mode == "RS":
        log_c = 2 * math.log(desc.level_norm * desc.level2_norm)
        for a, b in zip(desc.k, desc.k2):
            log_c += 2 * math.log(abs(a - b) + 1) + 2 * math.log(a + b)
    elif desc.mode == "Synthetic":
        log_c = desc.log_conductor
    else:
        log_c = math.log(desc.conductor) - desc.degree * desc.field_degree * math.log(math.pi)
        log_c += sum(math.log(max(abs(complex(x)), KAPPA_FLOOR)) for x in desc.kappa)
    return phi.hat_at_zero * log_c / logR


def _skip_bad(desc: LDescriptor, primes: list[PrimeIdealRec]) -> list[PrimeIdealRec]:
    if desc.mode not in ("HMF", "RS") or not desc.bad_primes:
        return primes
    bad = set(desc.bad_primes)
    return [P for P in primes if P.ideal not in bad]


def prime_weights(desc: LDescriptor, phi: FejerTestFunction, R: float, F: QuadField, Q: float):
    """Primes in range and (2/log R) log N(p) phi_hat(log N(p)/log R) / sqrt N(p) for each."""
    logR = _check_R(R)
    if Q < 2:
        return [], np.zeros(0)
    primes = _skip_bad(desc, enumerate_prime_ideals(F, Q))
    logN = np.log(np.array([P.norm for P in primes], dtype=float))
    w = (2.0 / logR) * logN * np.asarray(phi.hat(logN / logR)) / np.exp(0.5 * logN)
    return primes, w


def prime_sum(
    desc: LDescriptor, phi: FejerTestFunction, R: float, source: CoefficientSource, F: QuadField, Q: float
) -> float:
    """(2/log R) sum_{N(p) <= Q} C(p) log N(p) phi_hat(log N(p)/log R) / sqrt N(p)."""
    primes, w = prime_weights(desc, phi, R, F, Q)
    if not primes:
        return 0.0
    # only primes inside the support of phi_hat enter, so raising Q past
    # R^u leaves the value bit-for-bit unchanged
    idx = np.flatnonzero(w != 0)
    if not len(idx):
        return 0.0
    vals = source.values([primes[i] for i in range(idx[-1] + 1)])[idx]
    return float(np.dot(vals, w[idx]))


def one_level_D(
    desc: LDescriptor, phi: FejerTestFunction, R: float, source: CoefficientSource, F: QuadField, Q: float
) -> float:
    return (
        conductor_term(desc, phi, R)
        - 0.5 * desc.delta * phi.value_at_zero
        - prime_sum(desc, phi, R, source, F, Q)
    )


def zeros_side(zeros: Iterable[float], phi: FejerTestFunction, R: float) -> float:
    logR = _check_R(R)
    g = np.asarray(list(zeros), dtype=float)
    if g.size == 0:
        return 0.0
    return float(np.sum(phi(g * logR / (2 * math.pi))))


def gamma_term(desc: LDescriptor, phi: FejerTestFunction, R: float, L: float = 4000.0) -> float:
    """(1/pi) int gamma'/gamma(1/2 + it) phi(t log R / 2 pi) dt, by quadrature."""
    logR = _check_R(R)
    u = float(phi.u)
    a = [(0.5 + complex(x)) / 2 for x in desc.kappa]

    def integrand(x: float) -> float:
        z = [s + 1j * math.pi * x / logR for s in a]
        return 2.0 * sum(special.digamma(v).real for v in z) * float(phi(x))

    edges = np.arange(0.0, L + 1e-12, 1.0 / u)
    body = sum(integrate.quad(integrand, lo, hi, limit=200)[0] for lo, hi in zip(edges[:-1], edges[1:]))
    # beyond L: phi averages to 1/(2 pi^2 u^2 x^2) and Re digamma ~ log(pi x / log R)
    tail = sum(2.0 * (math.log(math.pi * L / logR) + 1.0) / (2 * math.pi**2 * u * u * L) for _ in a)
    n = desc.degree * desc.field_degree
    return (-n * math.log(math.pi) * phi.hat_at_zero + body + tail) / logR


def gl2_prime_powers(lam: dict[int, float], R: float, u: float) -> list[tuple[int, float]]:
    """(p^m, Lambda(p^m)) for unramified degree-two data over Q with p^m < R^u.

    alpha + beta = C(p), alpha beta = 1, so alpha^m + beta^m = s_m with
    s_0 = 2, s_1 = C(p), s_{m+1} = C(p) s_m - s_{m-1}.
    """
    cap = R**u
    out = []
    for p in sorted(lam):
        prev, cur = 2.0, lam[p]
        q = p
        while q < cap:
            out.append((q, math.log(p) * cur))
            prev, cur = cur, lam[p] * cur - prev
            q *= p
    return out


def explicit_formula_exact(
    desc: LDescriptor,
    phi: FejerTestFunction,
    R: float,
    prime_powers: Sequence[tuple[int, float]],
    poles: int = 0,
) -> float:
    """phi_hat(0) log A / log R + gamma term - (2/log R) sum Lambda(n) phi_hat(log n / log R)/sqrt n,
    plus the pole contributions of a completed L-function with poles at 0 and 1 of order ``poles``.

    For an actual L-function this equals the sum over all zeros (both signs of
    the ordinate) of phi(gamma log R / 2 pi).
    """
    logR = _check_R(R)
    total = phi.hat_at_zero * math.log(desc.conductor) / logR + gamma_term(desc, phi, R)
    for n, lam in prime_powers:
        t = math.log(n) / logR
        total -= 2.0 / logR * lam * float(phi.hat(t)) / math.sqrt(n)
    if poles:
        # the poles sit at gamma = +-i/2; phi_u(i y) = (sinh(pi u y) / (pi u y))^2
        y = math.pi * float(phi.u) * logR / (4 * math.pi)
        total += 2 * poles * (math.sinh(y) / y) ** 2
    return total


def two_sided(
    desc: LDescriptor,
    phi: FejerTestFunction,
    R: float,
    lam: dict[int, float],
    zeros: Sequence[float] | None = None,
    poles: int = 0,
) -> dict:
    """Prime side of the exact formula next to the sum over listed zeros.

    ``lam`` maps rational primes to C(p) and must cover every p < R^u.
    Listed ordinates are positive; each stands for the pair +-gamma.
    """
    cap = R ** float(phi.u)
    missing = [p for p in primes_up_to(cap - 1e-9) if p not in lam]
    if missing:
        raise ValueError(f"no coefficient for primes {missing[:5]}")
    out = {"prime_side": explicit_formula_exact(desc, phi, R, gl2_prime_powers(lam, R, float(phi.u)), poles)}
    if zeros is not None:
        out["zeros_side"] = 2.0 * zeros_side(zeros, phi, R)
        out["zero_count"] = len(zeros)
        out["difference"] = out["zeros_side"] - out["prime_side"]
    return out


# ---------------------------------------------------------------------------
# synthetic families


FAMILY_KINDS = {"Orthogonal": ("O", -1), "RSSymplectic": ("Sp", 1)}


@dataclass
class DensityReport:
    family: str
    M: int
    average: float
    stderr: float
    stderr_defined: bool
    prediction: float
    kernel: str
    Q: float
    u: float
    R: float
    field: int
    seed: int

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def family_average(
    kind: str,
    M: int,
    u: float,
    F: QuadField | int = 1,
    seed: int = 0,
    Q: float = 10_000,
    R: float | None = None,
) -> DensityReport:
    """Average D over M synthetic members with Sato-Tate coefficients.

    R defaults to Q^(1/u), which makes the prime sum exact at cutoff Q.
    Member i draws from (seed, i + 1); the fixed partner of the
    Rankin-Selberg family draws from (seed, 0).
    """
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {tuple(FAMILY_KINDS)}")
    if M < 1:
        raise ValueError("family size must be >= 1")
    F = make_field(F) if isinstance(F, int) else F
    kernel, delta = FAMILY_KINDS[kind]
    R = Q ** (1.0 / u) if R is None else R
    logR = _check_R(R)
    phi = FejerTestFunction(u)
    member = LDescriptor.synthetic(F, logR, delta, degree=2 if delta < 0 else 4)
    primes, w = prime_weights(member, phi, R, F, Q)
    if kind == "RSSymplectic":
        partner = SatoTateSampler(np.random.SeedSequence(seed, spawn_key=(0,))).values(primes)
    base = conductor_term(member, phi, R) - 0.5 * delta * phi.value_at_zero
    D = np.empty(M)
    for i in range(M):
        c = SatoTateSampler(np.random.SeedSequence(seed, spawn_key=(i + 1,))).values(primes)
        if kind == "RSSymplectic":
            c = c * partner
        D[i] = base - float(np.dot(c, w))
    avg = float(D.mean())
    defined = M > 1
    err = float(D.std(ddof=1) / math.sqrt(M)) if defined else float("nan")
    pred = integral_against_kernel(u, kernel)
    return DensityReport(kind, M, avg, err, defined, float(pred), kernel, Q, float(u), R, F.d, seed)


# ---------------------------------------------------------------------------
# support and non-vanishing arithmetic


def admissible_u(mode: str, k: Sequence[int], level_norm: float, k2=None, level2_norm=None) -> float:
    """Support limit for the one-level density of the family.

    ``mode`` is "HMF" (orthogonal family) or "RS" (convolutions with a fixed
    form); the RS limit depends only on the varying form's weight and level.
    """
    coeffs = {"HMF": (1.5, 4 / 3), "RS": (0.75, 2 / 3)}
    if mode not in coeffs:
        raise ValueError("mode must be HMF or RS")
    if level_norm < 1 or any(x < 2 or x % 2 for x in k):
        raise ValueError("need level norm >= 1 and even weights >= 2")
    Nk = math.prod(k)
    den = math.log(level_norm) + 2 * math.log(Nk)
    if den == 0:
        raise ValueError("degenerate: N(n) = N(k) = 1")
    a, b = coeffs[mode]
    return a * math.log(level_norm) / den + b * math.log(Nk) / den


def admissible_limits() -> dict[str, Fraction]:
    """Limits of admissible_u when the level or the weight dominates."""
    return {
        "HMF_level": Fraction(3, 2),
        "HMF_weight": Fraction(4, 3) / 2,
        "RS_level": Fraction(3, 4),
        "RS_weight": Fraction(2, 3) / 2,
    }


@dataclass(frozen=True)
class NonvanishingBounds:
    mP_bound: float | Fraction
    mQ_bound: float | Fraction
    Q0_lower: float | Fraction

    def as_dict(self) -> dict:
        return {"mP_bound": self.mP_bound, "mQ_bound": self.mQ_bound, "Q0_lower": self.Q0_lower}


def nonvanishing_bounds(u) -> NonvanishingBounds:
    if u <= 0:
        raise ValueError("u must be positive")
    if isinstance(u, (int, Fraction)):
        u = Fraction(u)
        return NonvanishingBounds(1 / u + Fraction(1, 2), 1 / (2 * u) - Fraction(1, 4), Fraction(5, 4) - 1 / (2 * u))
    u = float(u)
    return NonvanishingBounds(1 / u + 0.5, 1 / (2 * u) - 0.25, 1.25 - 1 / (2 * u))


# ---------------------------------------------------------------------------
# data files and the discriminant function


def read_coefficients(path: str | Path) -> FileBacked:
    table = {}
    with open(path, newline="") as fh:
        for row in csv.reader(line for line in fh if line.strip() and not line.lstrip().startswith("#")):
            if len(row) != 2:
                raise ValueError(f"expected 'prime_norm,lambda', got {row}")
            table[int(row[0])] = float(row[1])
    return FileBacked(table)


def read_zeros(path: str | Path) -> list[float]:
    zeros = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            zeros.append(float(line))
    if any(z <= 0 for z in zeros) or zeros != sorted(zeros):
        raise ValueError("zeros must be positive and ascending")
    return zeros


def ramanujan_tau(n_max: int) -> list[int]:
    """tau(0..n_max) from q prod (1 - q^n)^24 with exact integers.

    prod (1 - q^n) comes from the pentagonal number theorem and is then
    raised to the 24th power by repeated squaring.
    """
    size = n_max  # coefficients of prod(1 - q^n) up to q^(n_max - 1)
    eta = [0] * max(size, 1)
    k = 0
    while True:
        done = True
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2) if k else (0,):
            if g < size:
                eta[g] = -1 if k % 2 else 1
                done = False
        if done and k:
            break
        k += 1

    def mul(a, b):
        out = [0] * size
        for i, x in enumerate(a):
            if x:
                for j in range(size - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out

    p = eta
    for _ in range(3):  # eta^8
        p = mul(p, p)
    p = mul(mul(p, p), p)  # eta^24
    return [0] + p[: n_max]


def normalized_tau(primes: Iterable[int]) -> dict[int, float]:
    """C(p) = tau(p) / p^(11/2)."""
    primes = list(primes)
    if not primes:
        return {}
    tau = ramanujan_tau(max(primes))
    return {p: tau[p] / p**5.5 for p in primes}
