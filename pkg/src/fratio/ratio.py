"""The l1/l2 coefficient ratio and soft sparsification built on it."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import CoefficientVector


def _entries(c) -> np.ndarray:
    if isinstance(c, CoefficientVector):
        return c.entries
    return np.asarray(c, dtype=np.complex128).reshape(-1)


def fourier_ratio(c) -> float:
    """||c||_1 / ||c||_2; lies in [1, sqrt(nnz(c))].  Undefined (raises) for c = 0."""
    v = _entries(c)
    l2 = float(np.linalg.norm(v))
    if l2 == 0.0:
        raise ValueError("ratio undefined for the zero vector")
    return float(np.sum(np.abs(v))) / l2


@dataclass(frozen=True)
class SparsifyResult:
    support: np.ndarray
    truncation: np.ndarray
    s: int
    tail_l2: float
    tail_l1: float


def top_indices(c, s: int) -> np.ndarray:
    """Indices of the s largest magnitudes, ties broken by lowest index."""
    mags = np.abs(_entries(c))
    order = np.argsort(-mags, kind="stable")
    return np.sort(order[:s])


def soft_sparsify(c, eta: float) -> SparsifyResult:
    """Truncate c to its s = ceil(FR^2/eta^2) largest entries (clamped to M).

    The choice of s guarantees an l2 tail of at most eta * ||c||_2.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    v = _entries(c)
    r = fourier_ratio(v)
    s = min(v.shape[0], math.ceil(r * r / (eta * eta)))
    support = top_indices(v, s)
    truncation = np.zeros_like(v)
    truncation[support] = v[support]
    tail = v - truncation
    return SparsifyResult(
        support=support,
        truncation=truncation,
        s=s,
        tail_l2=float(np.linalg.norm(tail)),
        tail_l1=float(np.sum(np.abs(tail))),
    )


def sorted_decay_check(c, slack: float = 1e-12) -> bool:
    """Verify |c_(j)| <= FR(c) * ||c||_2 / j for the magnitude-sorted entries.

    Holds for every nonzero vector; exposed as a self-test oracle.
    """
    v = _entries(c)
    r = fourier_ratio(v)
    l2 = float(np.linalg.norm(v))
    mags = np.sort(np.abs(v))[::-1]
    j = np.arange(1, mags.shape[0] + 1)
    return bool(np.all(mags * j <= r * l2 * (1.0 + slack)))


def harmonic_model(M: int) -> np.ndarray:
    """Coefficient vector (1, 1/2, ..., 1/M): dense but with ratio ~ log M."""
    if M < 3:
        raise ValueError(f"harmonic model needs M >= 3, got {M}")
    return 1.0 / np.arange(1, M + 1, dtype=np.float64) + 0j
