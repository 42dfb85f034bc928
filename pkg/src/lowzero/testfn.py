"""Fejer test functions and the symmetry-type density kernels.

phi_u(x) = (sin(pi u x)/(pi u x))^2 has Fourier transform (u - |t|)/u^2 on
[-u, u].  Integrals of phi_u against each kernel have closed forms; the
quadrature routines here exist to check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

KINDS = ("O", "SOeven", "SOodd", "Sp", "U")


def _check_u(u) -> None:
    if u <= 0:
        raise ValueError(f"support parameter u must be positive, got {u}")


def fejer_eval(u: float, x):
    _check_u(u)
    x = np.asarray(x, dtype=float)
    y = np.pi * float(u) * x
    safe = np.where(y == 0, 1.0, y)
    out = np.where(y == 0, 1.0, (np.sin(safe) / safe) ** 2)
    return float(out) if out.ndim == 0 else out


def fejer_hat(u, t):
    _check_u(u)
    if np.ndim(t) == 0 and isinstance(u, (int, Fraction)) and isinstance(t, (int, Fraction)):
        return (u - abs(t)) / Fraction(u) ** 2 if abs(t) < u else Fraction(0)
    t = np.asarray(t, dtype=float)
    uf = float(u)
    out = np.where(np.abs(t) < uf, (uf - np.abs(t)) / (uf * uf), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FejerTestFunction:
    u: float

    def __post_init__(self):
        _check_u(self.u)

    def __call__(self, x):
        return fejer_eval(self.u, x)

    def hat(self, t):
        return fejer_hat(self.u, t)

    @property
    def value_at_zero(self) -> float:
        return 1.0

    @property
    def hat_at_zero(self) -> float:
        return 1.0 / float(self.u)


@dataclass(frozen=True)
class SampledTestFunction:
    """An even function known only on a symmetric grid; for quadrature paths."""

    x: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        return np.interp(np.abs(x), self.x[self.x >= 0], self.values[self.x >= 0], right=0.0)

    @property
    def value_at_zero(self) -> float:
        return float(self(0.0))


@dataclass(frozen=True)
class DensityKernel:
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KINDS}")

    @property
    def sinc_sign(self) -> int:
        return {"O": 0, "U": 0, "SOeven": 1, "Sp": -1, "SOodd": -1}[self.kind]

    @property
    def delta_mass(self) -> Fraction:
        return {"O": Fraction(1, 2), "SOodd": Fraction(1)}.get(self.kind, Fraction(0))

    def smooth(self, x):
        x = np.asarray(x, dtype=float)
        y = 2 * np.pi * x
        safe = np.where(y == 0, 1.0, y)
        sinc = np.where(y == 0, 1.0, np.sin(safe) / safe)
        return 1.0 + self.sinc_sign * sinc


def integral_against_kernel(u, kind: str):
    """Closed form of the integral of phi_u against W(kind).

    Exact (Fraction) when u is an int or Fraction, float otherwise.
    """
    _check_u(u)
    K = DensityKernel(kind)
    exact = isinstance(u, (int, Fraction))
    uu = Fraction(u) if exact else float(u)
    half = Fraction(1, 2) if exact else 0.5
    base = 1 / uu
    # integral of phi_u * sin(2 pi x)/(2 pi x) = half the mass of hat(phi_u) on [-1, 1]
    sinc_part = half if uu <= 1 else (2 * uu - 1) / (2 * uu * uu)
    return base + K.sinc_sign * sinc_part + K.delta_mass * (1 if exact else 1.0)


def _tail_integral(weight: str, omega: float, power: int, L: float) -> float:
    """int_L^inf trig(omega x) / x^power dx with trig in {cos, sin}."""
    if omega == 0:
        if weight == "sin":
            return 0.0
        return L ** (1 - power) / (power - 1)
    val, _ = integrate.quad(lambda x: x ** (-power), L, np.inf, weight=weight, wvar=omega, limlst=200)
    return val


def kernel_integral_numeric(u: float, kind: str, h: float = 1e-3, L: float = 50.0) -> float:
    """Trapezoid rule for phi_u W_0 on [-L, L], oscillatory tails beyond L, plus the point mass."""
    K = DensityKernel(kind)
    u = float(u)
    n = int(round(L / h))
    x = np.linspace(0.0, L, n + 1)
    f = fejer_eval(u, x) * K.smooth(x)
    core = h * (np.sum(f) - 0.5 * (f[0] + f[-1]))
    # beyond L: phi_u = (1 - cos(2 pi u x)) / (2 pi^2 u^2 x^2)
    s = K.sinc_sign
    pref = 1.0 / (2 * np.pi**2 * u * u)
    tail = _tail_integral("cos", 0.0, 2, L) - _tail_integral("cos", 2 * np.pi * u, 2, L)
    if s:
        # sin(2 pi x)/(2 pi x) * (1 - cos(2 pi u x)) / x^2
        extra = _tail_integral("sin", 2 * np.pi, 3, L)
        extra -= 0.5 * _tail_integral("sin", 2 * np.pi * (u + 1), 3, L)
        extra -= 0.5 * math.copysign(1.0, 1 - u) * _tail_integral("sin", 2 * np.pi * abs(1 - u), 3, L)
        tail += s * extra / (2 * np.pi)
    tail *= pref
    return 2 * (core + tail) + float(K.delta_mass) * 1.0


def quadrature_cross_check(u: float, kind: str, h: float = 1e-3, L: float = 50.0) -> float:
    """|closed form - quadrature| for the pair (u, kind)."""
    if h > 1e-3 or L < 50:
        raise ValueError("need step h <= 1e-3 and range at least [-50, 50]")
    return abs(float(integral_against_kernel(u, kind)) - kernel_integral_numeric(u, kind, h, L))


def fourier_transform_numeric(u: float, t: float, h: float = 1e-3, L: float = 50.0) -> float:
    """Numerical transform of phi_u at t (cosine transform plus oscillatory tails)."""
    u = float(u)
    n = int(round(L / h))
    x = np.linspace(0.0, L, n + 1)
    f = fejer_eval(u, x) * np.cos(2 * np.pi * t * x)
    core = h * (np.sum(f) - 0.5 * (f[0] + f[-1]))
    # (1 - cos(2 pi u x)) cos(2 pi t x) / x^2
    a = 2 * np.pi * abs(t)
    tail = _tail_integral("cos", a, 2, L)
    tail -= 0.5 * _tail_integral("cos", 2 * np.pi * (u + abs(t)), 2, L)
    tail -= 0.5 * _tail_integral("cos", 2 * np.pi * abs(u - abs(t)), 2, L)
    tail /= 2 * np.pi**2 * u * u
    return 2 * (core + tail)


def sampled_kernel_integral(fn: SampledTestFunction, kind: str) -> float:
    """Trapezoid integral of a sampled even function against W(kind)."""
    K = DensityKernel(kind)
    vals = fn.values * K.smooth(fn.x)
    return float(integrate.trapezoid(vals, fn.x)) + float(K.delta_mass) * fn.value_at_zero
