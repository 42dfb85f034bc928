"""Kloosterman sums over Z and over real quadratic rings of integers.

Phases are reduced to an integer numerator modulo an integer denominator
before the exponential is taken, so large moduli do not lose accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .nf import (
    FieldElement,
    IdealRec,
    QuadField,
    divisor_count,
    factor_int,
    is_prime,
    factor_ideal,
    ideal_from_generators,
    make_field,
    mul_coords,
    omega_relation,
    principal_ideal,
    tau,
)

IMAG_TOL = 1e-9


def inverse_mod(x: np.ndarray, m: int) -> np.ndarray:
    """Elementwise inverse of x modulo m (entries assumed coprime to m)."""
    x = np.asarray(x, dtype=np.int64)
    r0 = np.full_like(x, m)
    r1 = x % m
    s0 = np.zeros_like(x)
    s1 = np.ones_like(x)
    while np.any(r1):
        nz = r1 != 0
        q = np.where(nz, r0 // np.where(nz, r1, 1), 0)
        r0, r1 = np.where(nz, r1, r0), np.where(nz, r0 - q * r1, r1)
        s0, s1 = np.where(nz, s1, s0), np.where(nz, s0 - q * s1, s1)
    return s0 % m


def _phase_sum_complex(numerators: np.ndarray, den: int) -> complex:
    """Sum of exp(2*pi*i*n/den) over integer numerators already reduced mod den."""
    ang = (2.0 * np.pi / den) * numerators.astype(np.float64)
    return complex(float(np.sum(np.cos(ang))), float(np.sum(np.sin(ang))))


def _phase_sum(numerators: np.ndarray, den: int) -> float:
    z = _phase_sum_complex(numerators, den)
    re, im = z.real, z.imag
    if abs(im) > IMAG_TOL * max(1.0, math.sqrt(len(numerators))):
        raise ArithmeticError(f"Kloosterman sum has imaginary part {im}")
    return re


def _pow_mod(x: np.ndarray, e: int, m: int) -> np.ndarray:
    out = np.ones_like(x)
    base = x % m
    while e:
        if e & 1:
            out = out * base % m
        base = base * base % m
        e >>= 1
    return out


def _classical_numerators(a: int, b: int, c: int) -> np.ndarray:
    if c > 2 and c < 3_000_000_000 and is_prime(c):
        x = np.arange(1, c, dtype=np.int64)
        xbar = _pow_mod(x, c - 2, c)
        return (a % c * x + b % c * xbar) % c
    x = np.arange(c, dtype=np.int64)
    x = x[np.gcd(x, c) == 1]
    xbar = inverse_mod(x, c)
    return (a % c * x + b % c * xbar) % c


def kloosterman_classical(a: int, b: int, c: int) -> float:
    """S(a, b; c) = sum over x mod c coprime to c of e((a x + b xbar)/c)."""
    if c < 1:
        raise ValueError("modulus must be positive")
    return _phase_sum(_classical_numerators(a, b, c), c)


def kloosterman_factored(a: int, b: int, c: int) -> float:
    """S(a, b; c) assembled from prime-power moduli.

    Uses S(a, b; qr) = S(a rbar^2, b; q) S(a qbar^2, b; r) for coprime q, r,
    so the work is the sum of the prime-power sizes rather than c.
    """
    if c < 1:
        raise ValueError("modulus must be positive")
    out = 1.0
    for p, e in factor_int(c).items():
        q = p**e
        r = c // q
        rbar = pow(r, -1, q) if q > 1 else 0
        out *= _prime_power_sum((a * rbar * rbar) % q, b % q, q)
    return out


@lru_cache(maxsize=200_000)
def _prime_power_sum(a: int, b: int, q: int) -> float:
    return _phase_sum(_classical_numerators(a, b, q), q)


def weil_ratio_classical(a: int, b: int, c: int, value: float | None = None) -> float:
    s = kloosterman_classical(a, b, c) if value is None else value
    g = math.gcd(math.gcd(a, b), c)
    return abs(s) / (divisor_count(c) * math.sqrt(g) * math.sqrt(c))


@dataclass(frozen=True)
class KloostermanInput:
    field: QuadField
    alpha: FieldElement
    beta: FieldElement
    c: FieldElement


class ResidueSystem:
    """Units of O/(c) with their inverses, in integral-basis coordinates.

    The system depends only on the ideal (c), so it can be reused for every
    generator c*eta of that ideal.
    """

    def __init__(self, F: QuadField, c: FieldElement):
        if c.is_zero():
            raise ValueError("modulus must be nonzero")
        if F.is_rational:
            raise ValueError("use the classical routines over Q")
        self.field = F
        self.ideal = principal_ideal(F, c)
        I = self.ideal
        n = I.norm
        uu, vv = np.meshgrid(np.arange(I.a, dtype=np.int64), np.arange(I.c, dtype=np.int64))
        u = uu.ravel()
        v = vv.ravel()
        unit = np.ones(u.shape, dtype=bool)
        for P, _ in factor_ideal(F, I):
            unit &= ~self._in_ideal(P.ideal, u, v)
        u, v = u[unit], v[unit]
        self.u, self.v = u, v
        self.ubar, self.vbar = self._inverses(c, u, v, n)

    @staticmethod
    def _in_ideal(P: IdealRec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        ok = v % P.c == 0
        q = v // P.c
        return ok & ((u - q * P.b) % P.a == 0)

    def _reduce(self, u: np.ndarray, v: np.ndarray):
        I = self.ideal
        q = v // I.c
        return (u - q * I.b) % I.a, v - q * I.c

    def _norms(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        s, t = omega_relation(self.field.d)
        return u * u + t * u * v - s * v * v

    def _inverses(self, c: FieldElement, u: np.ndarray, v: np.ndarray, n: int):
        """x^{-1} = conj(x) * N(x)^{-1} mod n, after shifting x by multiples of c
        until its norm is coprime to n."""
        d = self.field.d
        s, t = omega_relation(d)
        cu, cv = c.coords()
        ubar = np.zeros_like(u)
        vbar = np.zeros_like(v)
        todo = np.arange(len(u))
        shifts = [(0, 0)] + [(i, j) for i in range(0, 6) for j in range(0, 6) if (i, j) != (0, 0)]
        for su, sv in shifts:
            if len(todo) == 0:
                break
            du, dv = mul_coords(d, (su, sv), (cu, cv))
            xu = (u[todo] + du) % n
            xv = (v[todo] + dv) % n
            nx = self._norms(xu, xv) % n
            good = np.gcd(nx, n) == 1
            if not np.any(good):
                continue
            idx = todo[good]
            xu, xv, nx = xu[good], xv[good], nx[good]
            ninv = inverse_mod(nx, n)
            # conj(u + v w) = (u + t v) - v w
            cu_, cv_ = (xu + t * xv) % n, (-xv) % n
            ru, rv = self._reduce(cu_ * ninv % n, cv_ * ninv % n)
            ubar[idx], vbar[idx] = ru, rv
            todo = todo[~good]
        if len(todo):
            raise ArithmeticError("could not invert every unit residue")
        return ubar, vbar

    def linear_form(self, gamma: FieldElement, den: int) -> tuple[int, int]:
        """Coefficients (A, B) mod den with Tr(gamma * (u + v w)) = A u + B v."""
        d = self.field.d
        gu, gv = gamma.coords()
        s, t = omega_relation(d)
        # Tr(u' + v' w) = 2 u' + t v'
        tr1 = 2 * gu + t * gv
        wu, wv = mul_coords(d, (gu, gv), (0, 1))
        trw = 2 * wu + t * wv
        return tr1 % den, trw % den

    def kloosterman(self, alpha: FieldElement, beta: FieldElement, c: FieldElement, as_complex: bool = False):
        """Kl(alpha, beta; c) for any generator c of this residue system's ideal.

        The sum is real; ``as_complex`` returns it before the imaginary part is dropped.
        """
        F = self.field
        nc = int(c.norm())
        sgn = 1 if nc > 0 else -1
        den = abs(nc) * F.disc
        # 1/(c sqrt D) = sgn * conj(c) * sqrt D / (|N c| D)
        gamma = c.conj() * F.sqrt_disc() * sgn
        A1, B1 = self.linear_form(alpha * gamma, den)
        A2, B2 = self.linear_form(beta * gamma, den)
        num = (A1 * self.u % den + B1 * self.v % den + A2 * self.ubar % den + B2 * self.vbar % den) % den
        return _phase_sum_complex(num, den) if as_complex else _phase_sum(num, den)


def _check_input(inp: KloostermanInput) -> None:
    F = inp.field
    if inp.c.is_zero():
        raise ValueError("modulus c must be nonzero")
    for x in (inp.alpha, inp.beta, inp.c):
        if x.d != F.d:
            raise ValueError("element from a different field")
        if not x.is_integral():
            raise ValueError(f"{x} is not an algebraic integer")
    F.require_narrow_one()


def kloosterman_nf(inp: KloostermanInput) -> float:
    """Kl(alpha, beta; c) = sum_x e(Tr((alpha x + beta xbar)/(c sqrt D)))."""
    _check_input(inp)
    F = inp.field
    if F.is_rational:
        a, b, c = int(inp.alpha.a), int(inp.beta.a), int(inp.c.a)
        return _phase_sum(_classical_numerators(a, b, abs(c)), abs(c))
    return ResidueSystem(F, inp.c).kloosterman(inp.alpha, inp.beta, inp.c)


def kloosterman_nf_complex(inp: KloostermanInput) -> complex:
    """kloosterman_nf without discarding the (numerically tiny) imaginary part."""
    _check_input(inp)
    F = inp.field
    if F.is_rational:
        a, b, c = int(inp.alpha.a), int(inp.beta.a), abs(int(inp.c.a))
        return _phase_sum_complex(_classical_numerators(a, b, c), c)
    return ResidueSystem(F, inp.c).kloosterman(inp.alpha, inp.beta, inp.c, as_complex=True)


def weil_ratio(inp: KloostermanInput, value: float | None = None) -> float:
    """|Kl| / (N(gcd)^{1/2} tau((c)) N(c)^{1/2})."""
    _check_input(inp)
    F = inp.field
    kl = kloosterman_nf(inp) if value is None else value
    if F.is_rational:
        a, b, c = int(inp.alpha.a), int(inp.beta.a), abs(int(inp.c.a))
        return weil_ratio_classical(a, b, c, kl)
    cid = principal_ideal(F, inp.c)
    gens = [x for x in (inp.alpha, inp.beta) if not x.is_zero()] + [inp.c]
    g = ideal_from_generators(F, gens)
    return abs(kl) / (math.sqrt(g.norm) * tau(F, cid) * math.sqrt(cid.norm))


def kloosterman_sweep(d: int, alpha, beta, max_norm: int) -> list[tuple[int, FieldElement, float, float]]:
    """Kl over unit-orbit representatives c of O with |N(c)| <= max_norm."""
    from .nf import enumerate_ideal_elements, unit_ideal

    F = make_field(d)
    alpha = alpha if isinstance(alpha, FieldElement) else F.element(alpha)
    beta = beta if isinstance(beta, FieldElement) else F.element(beta)
    rows = []
    for c in enumerate_ideal_elements(F, unit_ideal(F), max_norm):
        inp = KloostermanInput(F, alpha, beta, c)
        val = kloosterman_nf(inp)
        rows.append((abs(int(c.norm())), c, val, weil_ratio(inp, val)))
    return rows
