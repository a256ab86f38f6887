"""Bernoulli sampling and l1-minimization recovery via Douglas-Rachford splitting.

The program solved is

    min ||c||_1   subject to   || restrict_X(synthesize(c)) - y ||_2 <= sigma.

Sampling-after-synthesis is a partial isometry, so the projection onto the
fidelity ball has a closed form and the splitting needs no inner solves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import binom

from .groups import FiniteAbelianGroup, Signal
from .systems import OrthonormalSystem


@dataclass(frozen=True)
class SampleSet:
    """Subset of the domain kept by seeded Bernoulli(p) sampling."""

    group: FiniteAbelianGroup
    kept: np.ndarray = field(repr=False)
    p: float
    seed: int

    def __post_init__(self):
        kept = np.asarray(self.kept, dtype=np.int64).reshape(-1).copy()
        kept.setflags(write=False)
        object.__setattr__(self, "kept", kept)

    @property
    def count(self) -> int:
        return int(self.kept.shape[0])


def bernoulli_sample(group: FiniteAbelianGroup, p: float, seed: int) -> SampleSet:
    if not 0.0 < p <= 1.0:
        raise ValueError(f"keep probability must lie in (0, 1], got {p}")
    rng = np.random.default_rng(seed)
    mask = rng.random(group.size) < p
    return SampleSet(group=group, kept=np.flatnonzero(mask), p=float(p), seed=int(seed))


def restrict(signal_values: np.ndarray, sample: SampleSet) -> np.ndarray:
    return signal_values[sample.kept]


def extend_by_zero(sampled: np.ndarray, sample: SampleSet) -> np.ndarray:
    full = np.zeros(sample.group.size, dtype=np.complex128)
    full[sample.kept] = sampled
    return full


def soft_threshold(c: np.ndarray, lam: float) -> np.ndarray:
    """Complex soft thresholding z -> z * max(0, 1 - lam/|z|), with 0 -> 0."""
    if lam < 0:
        raise ValueError("threshold must be nonnegative")
    v = np.asarray(c, dtype=np.complex128)
    mags = np.abs(v)
    scale = np.zeros_like(mags)
    np.divide(np.maximum(mags - lam, 0.0), mags, out=scale, where=mags > 0)
    return v * scale


def project_fidelity(
    system: OrthonormalSystem,
    c: np.ndarray,
    sample: SampleSet,
    y: np.ndarray,
    sigma: float,
) -> np.ndarray:
    """Exact Euclidean projection of c onto the fidelity ball.

    Because restriction-after-synthesis has orthonormal rows, the projection is
    c minus the analyzed zero-extension of the clipped residual.
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.shape[0] != sample.count:
        raise ValueError("sampled values do not match the sample set")
    synth = system._synthesize_array(np.asarray(c, dtype=np.complex128))
    rho = restrict(synth, sample) - y
    norm_rho = float(np.linalg.norm(rho))
    if norm_rho <= sigma:
        return np.asarray(c, dtype=np.complex128).copy()
    clipped = (1.0 - sigma / norm_rho) * rho
    return c - system._analyze_array(extend_by_zero(clipped, sample))


@dataclass(frozen=True)
class RecoveryConfig:
    max_iterations: int = 5000
    step: float = 1.0
    tolerance: float = 1e-9
    fidelity_radius: float = 0.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.fidelity_radius < 0:
            raise ValueError("fidelity radius must be nonnegative")


@dataclass(frozen=True)
class RecoveryResult:
    recovered: Signal
    coefficient_l1: float
    fidelity_residual: float
    iterations: int
    converged: bool
    tau: float
    relative_error: Optional[float] = None


def recover_l1(
    system: OrthonormalSystem,
    sample: SampleSet,
    y: np.ndarray,
    config: RecoveryConfig = RecoveryConfig(),
    truth: Optional[Signal] = None,
) -> RecoveryResult:
    """Douglas-Rachford splitting between soft thresholding and the fidelity projection.

    The returned coefficients are post-processed by one fidelity projection so
    the constraint holds up to the stopping tolerance even on early exit.
    """
    y = np.asarray(y, dtype=np.complex128)
    sigma = config.fidelity_radius
    z = system._analyze_array(extend_by_zero(y, sample))
    best = z
    converged = False
    iterations = config.max_iterations
    for it in range(1, config.max_iterations + 1):
        x = project_fidelity(system, z, sample, y, sigma)
        shrunk = soft_threshold(2.0 * x - z, config.step)
        z_next = z + shrunk - x
        delta = float(np.linalg.norm(z_next - z))
        z = z_next
        best = shrunk
        if delta <= config.tolerance * max(1.0, float(np.linalg.norm(z))):
            converged = True
            iterations = it
            break
    c_star = project_fidelity(system, best, sample, y, sigma)
    recovered = system.synthesize(c_star)
    residual = float(np.linalg.norm(restrict(recovered.values, sample) - y))
    rel_err = None
    if truth is not None and truth.l2 > 0:
        rel_err = float(np.linalg.norm(recovered.values - truth.values)) / truth.l2
    return RecoveryResult(
        recovered=recovered,
        coefficient_l1=float(np.sum(np.abs(c_star))),
        fidelity_residual=residual,
        iterations=iterations,
        converged=converged,
        tau=system.tau,
        relative_error=rel_err,
    )


def sample_complexity(r: float, eps: float, M: int, tau: float, C: float = 1.0) -> float:
    """Threshold on p*M for stable recovery, with the (tau sqrt(M))^2 system scaling.

    The log(r/eps) factor is floored at 1 so r/eps <= e stays nondegenerate.
    """
    if r < 1:
        raise ValueError("ratio bound r must be >= 1")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if M < 2:
        raise ValueError("M must be >= 2")
    if tau <= 0:
        raise ValueError("tau must be positive")
    log_factor = max(1.0, math.log(r / eps))
    return C * (tau * math.sqrt(M)) ** 2 * (r / eps) ** 2 * log_factor**2 * math.log(M)


@dataclass(frozen=True)
class ErasureStatistics:
    empirical_prob: float
    exact_prob: float
    threshold: float


def erasure_row_statistics(
    N: int, T: int, theta: float, E_max: int, trials: int, seed: int
) -> ErasureStatistics:
    """P(max over T rows of Binomial(N, theta) < N / (2 E_max)), exact and simulated.

    Each of the N frequencies in each of the T rows is lost independently with
    probability theta; the event is that no row loses enough frequencies to
    break the half-support margin.
    """
    if E_max < 1:
        raise ValueError("E_max must be >= 1")
    if not 0.0 < theta < 1.0 / (2 * E_max):
        raise ValueError(f"loss probability must satisfy 0 < theta < 1/(2*E_max) = {1.0 / (2 * E_max)}")
    if N < 1 or T < 1 or trials < 1:
        raise ValueError("N, T, trials must be >= 1")
    threshold = N / (2.0 * E_max)
    per_row = float(binom.cdf(math.ceil(threshold) - 1, N, theta))
    exact = per_row**T
    rng = np.random.default_rng(seed)
    losses = rng.binomial(N, theta, size=(trials, T))
    empirical = float(np.mean(losses.max(axis=1) < threshold))
    return ErasureStatistics(empirical_prob=empirical, exact_prob=exact, threshold=threshold)
