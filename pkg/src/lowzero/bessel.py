"""Integer-order Bessel functions of the first kind.

Small arguments use the ascending series; everything else uses Miller's
backward recurrence normalised by J_0 + 2 sum J_2k = 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

MAX_ORDER = 500
MAX_ARG = 1e5
_RESCALE = 1e250


def _check(nu: int, x: float) -> None:
    if nu < 0 or nu > MAX_ORDER:
        raise OverflowError(f"order {nu} outside [0, {MAX_ORDER}]")
    if not (0 <= x <= MAX_ARG):
        raise OverflowError(f"argument {x} outside [0, {MAX_ARG:g}]")


def series_is_stable(nu: int, x: float) -> bool:
    """True when the alternating series has little cancellation.

    For x <= 2 sqrt(nu + 1) the terms shrink from the first one on; below
    x = 4 the worst cancellation is about e^4.
    """
    return x <= 4.0 or x * x <= 4.0 * (nu + 1)


def bessel_series(nu: int, x: float) -> float:
    """Ascending series in double precision."""
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    half = 0.5 * x
    log_first = nu * math.log(half) - math.lgamma(nu + 1)
    if log_first < -745:
        return 0.0
    term = math.exp(log_first)
    total = term
    q = -half * half
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and m > half:
            return total
        if m > 500:
            return total


def bessel_series_exact(nu: int, x: float, rel: float = 1e-30) -> float:
    """Ascending series summed in exact rational arithmetic (oracle use)."""
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    half = Fraction(x) / 2
    term = half**nu / math.factorial(nu)
    total = term
    q = -half * half
    m = 0
    while True:
        m += 1
        term = term * q / (m * (m + nu))
        total += term
        if m > half and abs(term) <= rel * abs(total):
            return float(total)


def _miller_start(nu: int, x: float) -> int:
    n = nu + math.ceil(x) + 40 + 8 * math.ceil(x ** (1.0 / 3.0))
    return n + (n % 2)


def bessel_miller(nu: int, x: float) -> float:
    """Miller backward recurrence from an even start index."""
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    n = _miller_start(nu, x)
    two_over_x = 2.0 / x
    j_next, j = 0.0, 1e-300
    norm = 0.0
    target = 0.0
    for k in range(n, 0, -1):
        # here j = J_k (unnormalised), j_next = J_{k+1}
        if k == nu:
            target = j
        if k % 2 == 0:
            norm += 2.0 * j
        j_prev = k * two_over_x * j - j_next
        j_next, j = j, j_prev
        if abs(j) > _RESCALE:
            j /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            target /= _RESCALE
    if nu == 0:
        target = j
    norm += j
    return target / norm


def bessel_j(nu: int, x: float) -> float:
    """J_nu(x) for integer 0 <= nu <= 500 and 0 <= x <= 1e5."""
    nu = int(nu)
    x = float(x)
    _check(nu, x)
    if series_is_stable(nu, x):
        return bessel_series(nu, x)
    return bessel_miller(nu, x)


def bessel_product(k: Sequence[int], x: Sequence[float]) -> float:
    """prod_j J_{k_j - 1}(x_j)."""
    if len(k) == 0:
        raise ValueError("empty weight vector")
    if len(k) != len(x):
        raise ValueError(f"weight has {len(k)} entries but {len(x)} arguments given")
    out = 1.0
    for kj, xj in zip(k, x):
        if kj < 2 or kj % 2:
            raise ValueError(f"weights must be even and >= 2, got {kj}")
        out *= bessel_j(kj - 1, xj)
    return out


def bessel_bound_ratio(k: int, x: float) -> float:
    """|J_{k-1}(x)| / (min(1, x/k) k^{-1/3})."""
    if k < 2 or x <= 0:
        raise ValueError("need k >= 2 and x > 0")
    return abs(bessel_j(k - 1, x)) / (min(1.0, x / k) * k ** (-1.0 / 3.0))


def bessel_j_orders(nmax: int, x: float) -> list[float]:
    """[J_0(x), ..., J_nmax(x)] from a single backward recurrence."""
    _check(nmax, x)
    if x == 0:
        return [1.0] + [0.0] * nmax
    n = _miller_start(nmax, x)
    two_over_x = 2.0 / x
    vals = [0.0] * (n + 2)
    vals[n] = 1e-300
    norm = 0.0
    for k in range(n, 0, -1):
        if k % 2 == 0:
            norm += 2.0 * vals[k]
        vals[k - 1] = k * two_over_x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > _RESCALE:
            for i in range(k - 1, min(n, nmax + 60) + 1):
                vals[i] /= _RESCALE
            norm /= _RESCALE
    norm += vals[0]
    return [v / norm for v in vals[: nmax + 1]]


def bound_ratio_sweep(k_max: int = 200, x_min: float = 1e-3, x_max: float = 1e3, points: int = 400):
    """Largest bessel_bound_ratio over 2 <= k <= k_max and a log grid in x.

    Returns (max ratio, k, x) at the maximiser.
    """
    if k_max < 2 or points < 2 or not (0 < x_min < x_max):
        raise ValueError("invalid sweep")
    step = math.log(x_max / x_min) / (points - 1)
    best = (-1.0, 0, 0.0)
    for i in range(points):
        x = x_min * math.exp(i * step)
        js = bessel_j_orders(k_max - 1, x)
        for k in range(2, k_max + 1):
            r = abs(js[k - 1]) / (min(1.0, x / k) * k ** (-1.0 / 3.0))
            if r > best[0]:
                best = (r, k, x)
    return best


def bessel_j_large(nu: int, x: float) -> float:
    """Hankel asymptotic expansion, for x well beyond nu^2 (used past MAX_ARG)."""
    if x <= 0:
        raise ValueError("need x > 0")
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        size = abs(term)
        if size > prev or size < 1e-17:
            break
        prev = size
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q += sign * term
        else:
            p += sign * term
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))
