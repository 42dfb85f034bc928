"""Metropolis sampling of eigenangles for U(N), SO(2N), SO(2N+1) and USp(2N).

Each chain owns a random stream derived from (seed, chain index), so the
output does not depend on how chains are scheduled across worker threads.
The inner Metropolis loop is compiled with numba.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .testfn import FejerTestFunction

ENSEMBLES = ("U", "SOeven", "SOodd", "Sp")


def worker_count() -> int:
    raw = os.environ.get("LOWZERO_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    N: int

    def __post_init__(self):
        if self.kind not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.kind!r}; expected one of {ENSEMBLES}")
        if self.N < 2:
            raise ValueError("N must be at least 2")

    @property
    def paired(self) -> bool:
        return self.kind != "U"

    @property
    def eigenvalue_count(self) -> int:
        if self.kind == "U":
            return self.N
        return 2 * self.N + 1 if self.kind == "SOodd" else 2 * self.N

    @property
    def upper(self) -> float:
        return math.pi if self.paired else 2 * math.pi


@dataclass(frozen=True)
class ChainConfig:
    seed: int
    samples: int = 10_000
    chains: int = 16
    burn_in: int | None = None
    stride: int | None = None
    sigma: float | None = None

    def resolved(self, N: int) -> "ChainConfig":
        return ChainConfig(
            seed=self.seed,
            samples=self.samples,
            chains=self.chains,
            burn_in=10_000 * N if self.burn_in is None else self.burn_in,
            stride=10 * N if self.stride is None else self.stride,
            sigma=math.pi / (4 * N) if self.sigma is None else self.sigma,
        )


@dataclass
class SampleBatches:
    spec: EnsembleSpec
    angles: np.ndarray  # (chains, samples_per_chain, N)
    acceptance_rate: float
    config: ChainConfig = field(repr=False)


def log_joint_density(spec: EnsembleSpec, angles) -> float:
    th = np.asarray(angles, dtype=float)
    if th.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} angles")
    if np.any(th < 0) or np.any(th > spec.upper) or (not spec.paired and np.any(th >= spec.upper)):
        raise ValueError("angles outside the ensemble domain")
    with np.errstate(divide="ignore"):
        iu = np.triu_indices(spec.N, 1)
        if spec.kind == "U":
            diff = 2 * np.sin((th[:, None] - th[None, :]) / 2)
            total = 2 * np.sum(np.log(np.abs(diff[iu])))
        else:
            c = np.cos(th)
            total = 2 * np.sum(np.log(np.abs((c[:, None] - c[None, :])[iu])))
            if spec.kind == "Sp":
                total += 2 * np.sum(np.log(np.abs(np.sin(th))))
            elif spec.kind == "SOodd":
                total += 2 * np.sum(np.log(np.abs(np.sin(th / 2))))
    return float(total)


_KIND_CODE = {"U": 0, "SOeven": 1, "SOodd": 2, "Sp": 3}


@njit(cache=True, nogil=True)
def _local(kind: int, theta, j: int, value: float) -> float:
    """Terms of the log density that involve coordinate j, with theta_j = value."""
    total = 0.0
    N = theta.shape[0]
    if kind == 0:
        for k in range(N):
            if k != j:
                total += 2.0 * math.log(abs(2.0 * math.sin(0.5 * (value - theta[k]))))
        return total
    cv = math.cos(value)
    for k in range(N):
        if k != j:
            total += 2.0 * math.log(abs(cv - math.cos(theta[k])))
    if kind == 3:
        total += 2.0 * math.log(abs(math.sin(value)))
    elif kind == 2:
        total += 2.0 * math.log(abs(math.sin(0.5 * value)))
    return total


@njit(cache=True, nogil=True)
def _chain(kind, theta, z, logu, sigma, burn_in, stride, per_chain, upper, periodic):
    N = theta.shape[0]
    out = np.empty((per_chain, N))
    accepted = 0
    total = burn_in + per_chain * stride
    for step in range(total):
        j = step % N
        x = theta[j] + sigma * z[step]
        if periodic:
            x = x % upper
        else:
            x = x % (2.0 * upper)
            if x > upper:
                x = 2.0 * upper - x
        delta = _local(kind, theta, j, x) - _local(kind, theta, j, theta[j])
        if logu[step] < delta:
            theta[j] = x
            if step >= burn_in:
                accepted += 1
        if step >= burn_in:
            k = step - burn_in + 1
            if k % stride == 0:
                out[k // stride - 1, :] = theta
    return out, accepted


def _run_chain(spec: EnsembleSpec, cfg: ChainConfig, chain_id: int, per_chain: int):
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(chain_id,)))
    total = cfg.burn_in + per_chain * cfg.stride
    z = rng.standard_normal(total)
    with np.errstate(divide="ignore"):
        logu = np.log(rng.random(total))
    theta = (np.arange(spec.N) + 0.5) * spec.upper / spec.N
    out, acc = _chain(
        _KIND_CODE[spec.kind], theta, z, logu, float(cfg.sigma), int(cfg.burn_in),
        int(cfg.stride), int(per_chain), float(spec.upper), not spec.paired,
    )
    return out, acc, per_chain * cfg.stride


def sample_eigenangles(spec: EnsembleSpec, config: ChainConfig) -> SampleBatches:
    """Run config.chains independent chains and collect thinned samples."""
    cfg = config.resolved(spec.N)
    if cfg.samples < 1 or cfg.chains < 1 or cfg.burn_in < 0 or cfg.stride < 1 or cfg.sigma <= 0:
        raise ValueError("invalid chain configuration")
    per_chain = math.ceil(cfg.samples / cfg.chains)
    with ThreadPoolExecutor(max_workers=min(worker_count(), cfg.chains)) as pool:
        results = list(pool.map(lambda i: _run_chain(spec, cfg, i, per_chain), range(cfg.chains)))
    angles = np.stack([r[0] for r in results])
    acc = sum(r[1] for r in results)
    props = sum(r[2] for r in results)
    return SampleBatches(spec, angles, acc / props, cfg)


def statistic_per_sample(batches: SampleBatches, phi) -> np.ndarray:
    """Sum of phi over rescaled eigenangles, one value per stored sample."""
    spec = batches.spec
    th = batches.angles
    scale = spec.eigenvalue_count / (2 * math.pi)
    if spec.paired:
        vals = 2 * phi(th * scale)
    else:
        centred = np.where(th > math.pi, th - 2 * math.pi, th)
        vals = phi(centred * scale)
    s = np.sum(vals, axis=-1)
    if spec.kind == "SOodd":
        s = s + phi(0.0)
    return s


def one_level_statistic(batches: SampleBatches, phi, spec: EnsembleSpec | None = None) -> tuple[float, float]:
    """Mean and standard error of the one-level statistic.

    The error uses the spread of per-chain means, so correlation inside a
    chain is accounted for.
    """
    if batches.angles.size == 0:
        raise ValueError("no samples")
    if spec is not None and spec != batches.spec:
        raise ValueError("ensemble spec does not match the batches")
    s = statistic_per_sample(batches, phi)
    chain_means = s.mean(axis=1)
    mean = float(chain_means.mean())
    if len(chain_means) > 1:
        stderr = float(chain_means.std(ddof=1) / math.sqrt(len(chain_means)))
    elif s.shape[1] > 1:
        stderr = float(s[0].std(ddof=1) / math.sqrt(s.shape[1]))
    else:
        stderr = float("nan")
    return mean, stderr


def kernel_kind(ensemble: str) -> str:
    return ensemble


def run_density(kind: str, N: int, u: float, seed: int, samples: int = 10_000, chains: int = 16, **kw):
    spec = EnsembleSpec(kind, N)
    batches = sample_eigenangles(spec, ChainConfig(seed=seed, samples=samples, chains=chains, **kw))
    mean, err = one_level_statistic(batches, FejerTestFunction(u))
    return batches, mean, err
