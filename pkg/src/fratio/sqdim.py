"""Randomized coefficient-sampling estimator, covering quantizer, and the
log-scale dimension bound.

A signal f with coefficients g is estimated by drawing basis indices with
probability |g(m)| / ||g||_1 and averaging the rank-one synthesis terms; the
estimate is unbiased with mean-squared error at most M tau^2 r^2 / k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import Signal
from .ratio import fourier_ratio
from .systems import OrthonormalSystem


@dataclass(frozen=True)
class RandomFunctional:
    """k-term random estimate P(x) = A * sum_i phi_{m_i}(x) u_i of a signal."""

    system: OrthonormalSystem
    indices: np.ndarray = field(repr=False)
    amplitude: float
    phases: np.ndarray = field(repr=False)
    seed: int

    @property
    def k(self) -> int:
        return int(self.indices.shape[0])

    def coefficient_weights(self) -> np.ndarray:
        """Aggregated coefficient vector A * sum_i u_i e_{m_i}."""
        w = np.zeros(self.system.size, dtype=np.complex128)
        np.add.at(w, self.indices, self.phases)
        return self.amplitude * w

    def evaluate(self) -> np.ndarray:
        """Values of the functional on the whole domain."""
        return self.system._synthesize_array(self.coefficient_weights())


def sq_sample(system: OrthonormalSystem, f: Signal, k: int, seed: int) -> RandomFunctional:
    """Draw k indices from the |g|-weighted distribution of the coefficients g."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = system.analyze(f).entries
    l1 = float(np.sum(np.abs(g)))
    if l1 == 0.0:
        raise ValueError("cannot sample from the zero signal")
    probs = np.abs(g) / l1
    rng = np.random.default_rng(seed)
    indices = rng.choice(system.size, size=k, p=probs)
    phases = g[indices] / np.abs(g[indices])
    return RandomFunctional(
        system=system,
        indices=indices.astype(np.int64),
        amplitude=l1 / k,
        phases=phases,
        seed=int(seed),
    )


def pointwise_variance(system: OrthonormalSystem, f: Signal) -> np.ndarray:
    """Exact Var[Z(x)] of a single draw: ||g||_1 sum_m |g(m)| |phi_m(x)|^2 - |f(x)|^2.

    Uses the dense basis matrix; intended for small domains.
    """
    g = system.analyze(f).entries
    l1 = float(np.sum(np.abs(g)))
    phi = system.basis_matrix()
    second_moment = l1 * (np.abs(phi) ** 2) @ np.abs(g)
    return second_moment - np.abs(f.values) ** 2


@dataclass(frozen=True)
class MseReport:
    empirical_mse: float
    bound: float
    k: int
    trials: int
    std_error: float = 0.0


def sq_mse(
    system: OrthonormalSystem,
    f: Signal,
    k: int,
    trials: int,
    seed: int,
    distribution: np.ndarray | None = None,
) -> MseReport:
    """Empirical weighted MSE of the k-term estimator against the M tau^2 r^2 / k bound."""
    M = system.size
    if distribution is None:
        distribution = np.full(M, 1.0 / M)
    distribution = np.asarray(distribution, dtype=np.float64)
    if distribution.shape[0] != M or np.any(distribution < 0) or abs(distribution.sum() - 1.0) > 1e-9:
        raise ValueError("distribution must be a probability vector over the domain")
    g = system.analyze(f).entries
    r = fourier_ratio(g)
    rng = np.random.default_rng(seed)
    probs = np.abs(g) / float(np.sum(np.abs(g)))
    l1 = float(np.sum(np.abs(g)))
    amplitude = l1 / k
    nonzero = np.flatnonzero(probs)
    unit = np.zeros(M, dtype=np.complex128)
    unit[nonzero] = g[nonzero] / np.abs(g[nonzero])
    per_trial = np.empty(trials)
    for t in range(trials):
        idx = rng.choice(M, size=k, p=probs)
        w = np.zeros(M, dtype=np.complex128)
        np.add.at(w, idx, unit[idx])
        P = system._synthesize_array(amplitude * w)
        per_trial[t] = float(np.sum(distribution * np.abs(f.values - P) ** 2))
    bound = M * system.tau**2 * r**2 / k
    std_error = float(per_trial.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MseReport(
        empirical_mse=float(per_trial.mean()),
        bound=bound,
        k=k,
        trials=trials,
        std_error=std_error,
    )


@dataclass(frozen=True)
class CoveringParams:
    """Minimal grid sizes making each term of the covering budget < 1/16."""

    M: int
    tau: float
    r: float
    k: int
    N1: int
    N2: int
    eps: float = 1.0 / 16.0


def covering_params(M: int, tau: float, r: float) -> CoveringParams:
    if M < 1:
        raise ValueError("M must be >= 1")
    if tau < M**-0.5 * (1 - 1e-12):
        raise ValueError("tau cannot be below M^{-1/2}")
    if r < 1:
        raise ValueError("r must be >= 1")
    k = math.ceil(16**2 * M * tau**2 * r**2)
    N2 = math.ceil(16 * tau * r * math.sqrt(M))
    N1 = math.ceil(16 * tau * k)
    return CoveringParams(M=M, tau=tau, r=r, k=k, N1=N1, N2=N2)


def quantize_functional(P: RandomFunctional, params: CoveringParams) -> RandomFunctional:
    """Snap the amplitude to the N1-step grid and each phase to an N2-th root of unity."""
    a_max = params.r * math.sqrt(params.M) / P.k
    if P.amplitude > a_max * (1 + 1e-12):
        raise ValueError("amplitude exceeds r sqrt(M) / k; the ratio bound r is too small")
    grid_step = a_max / params.N1
    amplitude = round(P.amplitude / grid_step) * grid_step
    angles = np.angle(P.phases)
    snapped = np.round(angles * params.N2 / (2.0 * math.pi))
    phases = np.exp(2j * math.pi * snapped / params.N2)
    return RandomFunctional(
        system=P.system,
        indices=P.indices.copy(),
        amplitude=float(amplitude),
        phases=phases,
        seed=P.seed,
    )


def quantizer_deviation_bound(params: CoveringParams, k: int) -> float:
    """Sup-norm budget tau k ((r sqrt(M)/k)/N2 + 1/N1 + 1/(N1 N2))."""
    a_max = params.r * math.sqrt(params.M) / k
    return params.tau * k * (a_max / params.N2 + 1.0 / params.N1 + 1.0 / (params.N1 * params.N2))


def sq_dim_log2(M: int, tau: float, r: float) -> float:
    """log2 of M^E (16^3 tau^3 M r^2 + 1) (16 tau r sqrt(M))^E with E = 16^2 M tau^2 r^2.

    Evaluated in log space, so it never overflows.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if tau < M**-0.5 * (1 - 1e-12):
        raise ValueError("tau cannot be below M^{-1/2}")
    if r < 1:
        raise ValueError("r must be >= 1")
    E = 16**2 * M * tau**2 * r**2
    middle = 16**3 * tau**3 * M * r**2 + 1.0
    return E * math.log2(M) + math.log2(middle) + E * math.log2(16 * tau * r * math.sqrt(M))
