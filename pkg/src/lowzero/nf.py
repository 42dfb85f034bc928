"""Exact arithmetic in Q and real quadratic fields Q(sqrt d).

Elements are kept as exact rationals ``a + b*sqrt(d)``; integral ideals are
stored in Hermite normal form over the integral basis ``{1, omega}`` with
``omega = (1 + sqrt d)/2`` when ``d = 1 mod 4`` and ``omega = sqrt d``
otherwise.  The rational field is represented by the sentinel ``d = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable

import numpy as np

RATIONAL = 1
CF_STEP_CAP = 10**6


class UnsupportedFieldError(ValueError):
    """Raised when an operation needs narrow class number one."""


# ---------------------------------------------------------------------------
# elementary number theory


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorisation of a positive integer."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factor_int(n) == {n: 1}


def primes_up_to(x: float) -> list[int]:
    n = int(math.floor(x))
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(D, n)


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for e in factor_int(n).values()) if n > 1 else 1


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FieldElement:
    """The number a + b*sqrt(d); for the rational sentinel b is always 0."""

    d: int
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d == RATIONAL and self.b != 0:
            raise ValueError("rational elements have no sqrt part")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise ValueError("elements of different fields")
            return other
        return FieldElement(self.d, Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(
            self.d, self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        q = self * o.conj()
        return FieldElement(self.d, q.a / n, q.b / n)

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.d, 1) / (self ** (-e))
        out = FieldElement(self.d, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "FieldElement":
        return FieldElement(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        if self.d == RATIONAL:
            return self.a
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return self.a if self.d == RATIONAL else 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def embeddings(self) -> tuple[float, ...]:
        if self.d == RATIONAL:
            return (float(self.a),)
        r = math.sqrt(self.d)
        e1 = float(self.a) + float(self.b) * r
        e2 = float(self.a) - float(self.b) * r
        # the smaller conjugate loses digits to cancellation; take it from the norm
        if (self.a >= 0) == (self.b >= 0):
            return (e1, float(self.norm()) / e1) if e1 else (e1, e2)
        return (float(self.norm()) / e2, e2) if e2 else (e1, e2)

    def sign(self, j: int = 0) -> int:
        """Exact sign of the j-th embedding."""
        a, b = self.a, (self.b if j == 0 else -self.b)
        if b == 0 or self.d == RATIONAL:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with d*b^2
        bigger_a = a * a > self.d * b * b
        return (1 if a > 0 else -1) if bigger_a else (1 if b > 0 else -1)

    def is_totally_positive(self) -> bool:
        if self.d == RATIONAL:
            return self.a > 0
        return self.sign(0) > 0 and self.sign(1) > 0

    def coords(self) -> tuple[int, int]:
        """Integer coordinates (u, v) with self = u + v*omega; raises if not integral."""
        if self.d == RATIONAL:
            if self.a.denominator != 1:
                raise ValueError(f"{self} is not integral")
            return int(self.a), 0
        if self.d % 4 == 1:
            v = 2 * self.b
            u = self.a - self.b
        else:
            u, v = self.a, self.b
        if u.denominator != 1 or v.denominator != 1:
            raise ValueError(f"{self} is not integral")
        return int(u), int(v)

    def is_integral(self) -> bool:
        try:
            self.coords()
        except ValueError:
            return False
        return True

    def __str__(self) -> str:
        if self.d == RATIONAL or self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt({self.d})"


def from_coords(d: int, u: int, v: int) -> FieldElement:
    if d == RATIONAL:
        return FieldElement(d, Fraction(u))
    if d % 4 == 1:
        return FieldElement(d, Fraction(2 * u + v, 2), Fraction(v, 2))
    return FieldElement(d, Fraction(u), Fraction(v))


def omega_relation(d: int) -> tuple[int, int]:
    """(s, t) with omega^2 = s + t*omega."""
    if d % 4 == 1:
        return (d - 1) // 4, 1
    return d, 0


def mul_coords(d: int, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    s, t = omega_relation(d)
    u1, v1 = x
    u2, v2 = y
    return u1 * u2 + v1 * v2 * s, u1 * v2 + u2 * v1 + v1 * v2 * t


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int
    fund_unit: FieldElement
    unit_norm: int
    regulator: float
    zeta2: float
    degree: int
    narrow_class_number: int
    class_number: int

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def totally_positive_unit(self) -> FieldElement:
        """Generator of the totally positive units (epsilon or epsilon^2)."""
        eps = self.fund_unit
        return eps if self.unit_norm == 1 else eps * eps

    def element(self, a, b=0) -> FieldElement:
        return FieldElement(self.d, Fraction(a), Fraction(b))

    def sqrt_disc(self) -> FieldElement:
        if self.is_rational:
            return self.element(1)
        return self.element(0, 1) if self.d % 4 == 1 else self.element(0, 2)

    def require_narrow_one(self) -> None:
        if self.narrow_class_number != 1:
            raise UnsupportedFieldError(
                f"Q(sqrt {self.d}) has narrow class number {self.narrow_class_number}; "
                "only narrow class number one is supported here"
            )

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt {self.d})"


def _continued_fraction_unit(d: int) -> FieldElement:
    """Fundamental unit of the maximal order from the periodic expansion of omega.

    With h/k the convergent just before the first period closes, the unit is
    h - k*conj(omega).
    """
    if d % 4 == 1:
        P, Q = 1, 2
        omega_bar = FieldElement(d, Fraction(1, 2), Fraction(-1, 2))
    else:
        P, Q = 0, 1
        omega_bar = FieldElement(d, 0, -1)
    r = math.isqrt(d)
    a = (P + r) // Q
    h_prev, h = 1, a
    k_prev, k = 0, 1
    P = a * Q - P
    Q = (d - P * P) // Q
    start = (P, Q)
    for _ in range(CF_STEP_CAP):
        if Q <= 0:
            raise ArithmeticError("continued fraction left the reduced regime")
        a = (P + r) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == start:
            unit = FieldElement(d, h) - k * omega_bar
            if abs(unit.norm()) != 1:
                raise ArithmeticError(f"period end did not yield a unit for d={d}")
            return unit
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    raise ArithmeticError(f"no unit found for d={d} within {CF_STEP_CAP} steps")


def _l_value_2(D: int) -> float:
    """L(2, chi_D) by direct summation over whole periods plus an asymptotic tail."""
    chi = np.array([kronecker(D, a) for a in range(1, D + 1)], dtype=float)
    periods = max(1000, int(2e5 // D))
    n = np.arange(1, periods * D + 1, dtype=float)
    head = math.fsum(np.tile(chi, periods) / (n * n))
    # tail sum_{m >= periods} 1/(m*D + a)^2 = trigamma(periods + a/D) / D^2
    tail = 0.0
    for a in range(1, D + 1):
        if chi[a - 1]:
            z = periods + a / D
            iz = 1.0 / z
            trigamma = iz + iz**2 / 2 + iz**3 / 6 - iz**5 / 30 + iz**7 / 42 - iz**9 / 30
            tail += chi[a - 1] * trigamma
    return head + tail / (D * D)


def _class_number(D: int, regulator: float) -> int:
    s = math.fsum(
        kronecker(D, a) * math.log(math.sin(math.pi * a / D)) for a in range(1, D)
    )
    h = -s / (2 * regulator)
    hr = round(h)
    if hr < 1 or abs(h - hr) > 1e-6:
        raise ArithmeticError(f"class number formula gave {h} for D={D}")
    return int(hr)


@lru_cache(maxsize=None)
def make_field(d: int) -> QuadField:
    """Build Q (d = 1) or the real quadratic field Q(sqrt d)."""
    d = int(d)
    if d == RATIONAL:
        return QuadField(
            d=1,
            disc=1,
            fund_unit=FieldElement(1, Fraction(1)),
            unit_norm=1,
            regulator=1.0,
            zeta2=math.pi**2 / 6,
            degree=1,
            narrow_class_number=1,
            class_number=1,
        )
    if d <= 1 or not is_squarefree(d):
        raise ValueError(f"d must be a squarefree integer > 1 (or 1 for Q), got {d}")
    D = d if d % 4 == 1 else 4 * d
    eps = _continued_fraction_unit(d)
    norm = int(eps.norm())
    reg = math.log(eps.embeddings()[0])
    h = _class_number(D, reg)
    return QuadField(
        d=d,
        disc=D,
        fund_unit=eps,
        unit_norm=norm,
        regulator=reg,
        zeta2=math.pi**2 / 6 * _l_value_2(D),
        degree=2,
        narrow_class_number=h if norm == -1 else 2 * h,
        class_number=h,
    )


def totally_positive_unit_reps(F: QuadField) -> list[FieldElement]:
    one = F.element(1)
    if F.is_rational or F.unit_norm == -1:
        return [one]
    eps = F.fund_unit
    return [one, eps if eps.is_totally_positive() else -eps]


# ---------------------------------------------------------------------------
# ideals


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the rank-2 lattice spanned by integer (u, v) vectors.

    The lattice is Z*(a, 0) + Z*(b, c) with a, c > 0 and 0 <= b < a.
    """
    pivot = None
    g_u = 0
    for u, v in vectors:
        if v == 0:
            g_u = math.gcd(g_u, u)
            continue
        if pivot is None:
            pivot = (u, v)
            continue
        pu, pv = pivot
        g, s, t = _xgcd(pv, v)
        pivot = (s * pu + t * u, g)
        g_u = math.gcd(g_u, (v // g) * pu - (pv // g) * u)
    if pivot is None or g_u == 0:
        raise ValueError("generators do not span a full-rank lattice")
    pu, pv = pivot
    if pv < 0:
        pu, pv = -pu, -pv
    return g_u, pu % g_u, pv


@dataclass(frozen=True)
class IdealRec:
    """Integral ideal Z*a + Z*(b + c*omega); for Q it is (a) and b = 0, c = 1."""

    d: int
    a: int
    b: int
    c: int
    norm: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "norm", self.a * self.c)

    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, 0), (self.b, self.c)

    def reduce(self, u: int, v: int) -> tuple[int, int]:
        """Canonical representative of u + v*omega modulo this ideal."""
        if self.d == RATIONAL:
            return u % self.a, 0
        q = v // self.c
        v -= q * self.c
        u -= q * self.b
        return u % self.a, v

    def contains_coords(self, u: int, v: int) -> bool:
        return self.reduce(u, v) == (0, 0)

    def contains(self, x: FieldElement) -> bool:
        return self.contains_coords(*x.coords())

    def divides(self, other: "IdealRec") -> bool:
        return all(self.contains_coords(*w) for w in other.basis())

    def is_unit_ideal(self) -> bool:
        return self.norm == 1


@dataclass(frozen=True)
class PrimeIdealRec:
    p: int
    split_type: str
    residue_degree: int
    ideal: IdealRec

    @property
    def norm(self) -> int:
        return self.p**self.residue_degree


class SplitType(str, Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


def ideal_from_generators(F: QuadField, gens: Iterable[FieldElement]) -> IdealRec:
    gens = list(gens)
    if F.is_rational:
        g = 0
        for x in gens:
            g = math.gcd(g, x.coords()[0])
        if g == 0:
            raise ValueError("zero ideal")
        return IdealRec(F.d, g, 0, 1)
    vecs = []
    for x in gens:
        xc = x.coords()
        vecs.append(xc)
        vecs.append(mul_coords(F.d, xc, (0, 1)))
    return IdealRec(F.d, *_hnf(vecs))


def principal_ideal(F: QuadField, x: FieldElement) -> IdealRec:
    return ideal_from_generators(F, [x])


def unit_ideal(F: QuadField) -> IdealRec:
    return IdealRec(F.d, 1, 0, 1)


def ideal_norm(I: IdealRec) -> int:
    return I.norm


def _basis_elements(I: IdealRec) -> list[tuple[int, int]]:
    return list(I.basis())


def ideal_mul(I: IdealRec, J: IdealRec) -> IdealRec:
    if I.d != J.d:
        raise ValueError("ideals of different fields")
    if I.d == RATIONAL:
        return IdealRec(I.d, I.a * J.a, 0, 1)
    vecs = [mul_coords(I.d, x, y) for x in I.basis() for y in J.basis()]
    return IdealRec(I.d, *_hnf(vecs))


def ideal_sum(I: IdealRec, J: IdealRec) -> IdealRec:
    """I + J, the greatest common divisor."""
    if I.d == RATIONAL:
        return IdealRec(I.d, math.gcd(I.a, J.a), 0, 1)
    return IdealRec(I.d, *_hnf(list(I.basis()) + list(J.basis())))


def ideal_pow(I: IdealRec, e: int) -> IdealRec:
    out = IdealRec(I.d, 1, 0, 1)
    for _ in range(e):
        out = ideal_mul(out, I)
    return out


def splitting_type(F: QuadField, p: int) -> SplitType:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if F.is_rational:
        return SplitType.SPLIT
    k = kronecker(F.disc, p)
    return {1: SplitType.SPLIT, -1: SplitType.INERT, 0: SplitType.RAMIFIED}[k]


def _omega_roots_mod(d: int, p: int) -> list[int]:
    s, t = omega_relation(d)
    # roots of x^2 - t*x - s mod p
    if p == 2:
        return [x for x in (0, 1) if (x * x - t * x - s) % 2 == 0]
    disc = (t * t + 4 * s) % p
    r = sqrt_mod_prime(disc, p)
    inv2 = (p + 1) // 2
    roots = {((t + r) * inv2) % p, ((t - r) * inv2) % p}
    return sorted(roots)


@lru_cache(maxsize=None)
def primes_above(F: QuadField, p: int) -> tuple[PrimeIdealRec, ...]:
    st = splitting_type(F, p)
    if F.is_rational:
        return (PrimeIdealRec(p, st.value, 1, IdealRec(F.d, p, 0, 1)),)
    if st is SplitType.INERT:
        return (PrimeIdealRec(p, st.value, 2, IdealRec(F.d, p, 0, p)),)
    out = []
    for r in _omega_roots_mod(F.d, p):
        I = IdealRec(F.d, *_hnf([(p, 0), (-r, 1)]))
        out.append(PrimeIdealRec(p, st.value, 1, I))
    return tuple(out)


def enumerate_prime_ideals(F: QuadField, X: float) -> list[PrimeIdealRec]:
    """All prime ideals of norm <= X, sorted by norm, then p, then conjugate order."""
    out: list[PrimeIdealRec] = []
    for p in primes_up_to(X):
        for P in primes_above(F, p):
            if P.norm <= X:
                out.append(P)
    out.sort(key=lambda P: (P.norm, P.p, P.ideal.b))
    return out


def factor_ideal(F: QuadField, I: IdealRec) -> list[tuple[PrimeIdealRec, int]]:
    """Prime factorisation of an integral ideal."""
    out = []
    if I.norm == 1:
        return out
    for p in sorted(factor_int(I.norm)):
        for P in primes_above(F, p):
            e = 0
            power = P.ideal
            while power.divides(I):
                e += 1
                power = ideal_mul(power, P.ideal)
            if e:
                out.append((P, e))
    if math.prod(P.norm**e for P, e in out) != I.norm:
        raise ArithmeticError("factorisation does not account for the norm")
    return out


def divisors(F: QuadField, I: IdealRec) -> list[IdealRec]:
    fac = factor_ideal(F, I)
    out = []
    for exps in product(*[range(e + 1) for _, e in fac]):
        J = unit_ideal(F)
        for (P, _), e in zip(fac, exps):
            J = ideal_mul(J, ideal_pow(P.ideal, e))
        out.append(J)
    out.sort(key=lambda J: (J.norm, J.a, J.b, J.c))
    return out


def moebius(F: QuadField, I: IdealRec) -> int:
    fac = factor_ideal(F, I)
    if any(e > 1 for _, e in fac):
        return 0
    return (-1) ** len(fac)


def tau(F: QuadField, I: IdealRec) -> int:
    return math.prod(e + 1 for _, e in factor_ideal(F, I))


def euler_level_product(F: QuadField, I: IdealRec) -> Fraction:
    return math.prod(
        (1 - Fraction(1, P.norm) for P, _ in factor_ideal(F, I)), start=Fraction(1)
    )


def is_squarefree_ideal(F: QuadField, I: IdealRec) -> bool:
    return all(e == 1 for _, e in factor_ideal(F, I))


def ideal_quotient(F: QuadField, I: IdealRec, J: IdealRec) -> IdealRec:
    """I / J for J | I, computed through the factorisations."""
    if not J.divides(I):
        raise ValueError("divisor does not divide")
    fj = {P.ideal: e for P, e in factor_ideal(F, J)}
    out = unit_ideal(F)
    for P, e in factor_ideal(F, I):
        out = ideal_mul(out, ideal_pow(P.ideal, e - fj.get(P.ideal, 0)))
    return out


def ideals_up_to(F: QuadField, Y: float, coprime_to: IdealRec | None = None) -> list[IdealRec]:
    """All integral ideals of norm <= Y (optionally coprime to a given ideal)."""
    primes = [
        P
        for P in enumerate_prime_ideals(F, Y)
        if coprime_to is None or not P.ideal.divides(coprime_to)
    ]
    out = [unit_ideal(F)]

    def extend(start: int, current: IdealRec):
        for i in range(start, len(primes)):
            P = primes[i]
            if current.norm * P.norm > Y:
                break
            nxt = ideal_mul(current, P.ideal)
            while nxt.norm <= Y:
                out.append(nxt)
                extend(i + 1, nxt)
                nxt = ideal_mul(nxt, P.ideal)

    if Y >= 1:
        extend(0, unit_ideal(F))
    else:
        return []
    out.sort(key=lambda J: (J.norm, J.a, J.b, J.c))
    return out


# ---------------------------------------------------------------------------
# elements of ideals modulo units


def _first_coordinate_box(F: QuadField, I: IdealRec, T: float):
    """Integer coefficient pairs (p, q) with |sigma_j(p*a + q*(b + c*omega))| <= T."""
    s, t = omega_relation(F.d)
    root = math.sqrt(F.d)
    w1, w2 = ((1 + root) / 2, (1 - root) / 2) if F.d % 4 == 1 else (root, -root)
    b1 = I.b + I.c * w1
    b2 = I.b + I.c * w2
    qmax = int(math.floor(2 * T / (I.c * abs(w1 - w2)))) + 1
    qs = np.arange(-qmax, qmax + 1)
    pairs = []
    for q in qs:
        lo = max((-T - q * b1) / I.a, (-T - q * b2) / I.a)
        hi = min((T - q * b1) / I.a, (T - q * b2) / I.a)
        if hi < lo:
            continue
        ps = np.arange(math.floor(lo) - 1, math.ceil(hi) + 2)
        pairs.append(np.column_stack([ps, np.full_like(ps, q)]))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(pairs)


def enumerate_ideal_elements(F: QuadField, I: IdealRec, B: float) -> list[FieldElement]:
    """Nonzero c in I with |N(c)| <= B, one per orbit of {+-1} x <totally positive unit>.

    Representatives satisfy c_1 > 0 and 1 <= |c_1/c_2| < eps_+^2, ordered by
    |N(c)| and then by c_1.
    """
    F.require_narrow_one()
    if B < 1:
        return []
    if F.is_rational:
        return [F.element(I.a * j) for j in range(1, int(B // I.a) + 1)]
    eps_p = F.totally_positive_unit
    E = eps_p.embeddings()[0] ** 2
    T = math.sqrt(B * E) * (1 + 1e-9) + 1e-9
    pq = _first_coordinate_box(F, I, T)
    s, t = omega_relation(F.d)
    u = pq[:, 0] * I.a + pq[:, 1] * I.b
    v = pq[:, 1] * I.c
    root = math.sqrt(F.d)
    w1, w2 = ((1 + root) / 2, (1 - root) / 2) if F.d % 4 == 1 else (root, -root)
    c1 = u + v * w1
    c2 = u + v * w2
    approx_norm = np.abs(c1 * c2)
    keep = (approx_norm <= B * (1 + 1e-9) + 1e-9) & (approx_norm > 0.5) & (c1 > -1e-9)
    eps_bar = eps_p.conj()
    reps = []
    for uu, vv in zip(u[keep].tolist(), v[keep].tolist()):
        x = from_coords(F.d, uu, vv)
        n = abs(x.norm())
        if n == 0 or n > B or x.sign(0) <= 0:
            continue
        # |x_1| >= |x_2|  <=>  a*b >= 0
        if x.a * x.b < 0:
            continue
        y = x * eps_bar
        if y.a * y.b >= 0:
            continue
        reps.append(x)
    reps.sort(key=lambda x: (abs(x.norm()), x.embeddings()[0], x.a, x.b))
    return reps


def ideal_generator(F: QuadField, I: IdealRec) -> FieldElement:
    """A totally positive generator of I (requires narrow class number one)."""
    F.require_narrow_one()
    if F.is_rational:
        return F.element(I.a)
    for x in enumerate_ideal_elements(F, I, I.norm):
        if abs(x.norm()) == I.norm:
            if x.sign(1) < 0:
                x = x * F.fund_unit
                if x.sign(0) < 0:
                    x = -x
            if not x.is_totally_positive():
                raise ArithmeticError("could not make generator totally positive")
            return x
    raise ArithmeticError(f"no generator found for ideal of norm {I.norm}")
