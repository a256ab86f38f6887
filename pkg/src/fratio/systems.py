"""Orthonormal systems on finite abelian groups.

Each system is an analysis/synthesis pair with an incoherence constant
tau = max_{x,j} |phi_j(x)|.  Analysis computes <f, phi_j> with the inner
product sum_x f(x) conj(phi_j(x)); synthesis is the adjoint (exact inverse).
The character system uses the negative-exponent kernel on the analysis side,
so it coincides with the conventional orthonormal FFT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import CoefficientVector, FiniteAbelianGroup, Signal

_SQRT2 = math.sqrt(2.0)


class OrthonormalSystem:
    """Analysis/synthesis pair over a fixed group, with incoherence constant tau."""

    label: str

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group

    @property
    def size(self) -> int:
        return self.group.size

    @property
    def system_id(self) -> str:
        return f"{self.label}:{self._param_string()}"

    def _param_string(self) -> str:
        return str(self.group)

    @property
    def tau(self) -> float:
        raise NotImplementedError

    def _analyze_array(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _synthesize_array(self, entries: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def analyze(self, f: Signal) -> CoefficientVector:
        if f.group != self.group:
            raise ValueError(f"signal on {f.group} does not match system on {self.group}")
        return CoefficientVector(self.system_id, self._analyze_array(f.values))

    def synthesize(self, c) -> Signal:
        entries = c.entries if isinstance(c, CoefficientVector) else np.asarray(c, dtype=np.complex128)
        if entries.shape[0] != self.size:
            raise ValueError(f"expected {self.size} coefficients, got {entries.shape[0]}")
        return Signal(self.group, self._synthesize_array(entries))

    def basis_matrix(self) -> np.ndarray:
        """Dense matrix Phi with Phi[x, j] = phi_j(x).  Intended for small groups."""
        eye = np.eye(self.size, dtype=np.complex128)
        cols = [self._synthesize_array(eye[:, j]) for j in range(self.size)]
        return np.stack(cols, axis=1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.system_id})"


class CharacterSystem(OrthonormalSystem):
    """Character basis phi_gamma(x) = M^{-1/2} exp(2 pi i <gamma, x>) on a product group."""

    label = "dft"

    @property
    def tau(self) -> float:
        return self.size ** -0.5

    def _analyze_array(self, values: np.ndarray) -> np.ndarray:
        shaped = values.reshape(self.group.shape)
        return np.fft.fftn(shaped, norm="ortho").reshape(-1)

    def _synthesize_array(self, entries: np.ndarray) -> np.ndarray:
        shaped = entries.reshape(self.group.shape)
        return np.fft.ifftn(shaped, norm="ortho").reshape(-1)


class WalshHadamardSystem(CharacterSystem):
    """Walsh system on Z_2^n: entries (-1)^{<j, x>} / 2^{n/2}."""

    label = "wht"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("Walsh system needs n >= 1")
        self.n = int(n)
        super().__init__(FiniteAbelianGroup((2,) * self.n))

    def _param_string(self) -> str:
        return str(self.n)


class GaborBlockSystem(OrthonormalSystem):
    """Block Gabor system on Z_N x Z_T: per-row modulations of the width-N window.

    Basis function indexed by (m, a) is supported on row a and carries the
    frequency-m character there, so analysis is the orthonormal DFT applied to
    each row independently.  tau = N^{-1/2}, which exceeds (NT)^{-1/2} when T > 1.
    """

    label = "gabor"

    def __init__(self, N: int, T: int):
        if N < 1 or T < 1:
            raise ValueError("Gabor block system needs N, T >= 1")
        self.N = int(N)
        self.T = int(T)
        super().__init__(FiniteAbelianGroup((self.N, self.T)))

    def _param_string(self) -> str:
        return f"N={self.N},T={self.T}"

    @property
    def tau(self) -> float:
        return self.N ** -0.5

    def _analyze_array(self, values: np.ndarray) -> np.ndarray:
        shaped = values.reshape(self.N, self.T)
        return np.fft.fft(shaped, axis=0, norm="ortho").reshape(-1)

    def _synthesize_array(self, entries: np.ndarray) -> np.ndarray:
        shaped = entries.reshape(self.N, self.T)
        return np.fft.ifft(shaped, axis=0, norm="ortho").reshape(-1)


class HaarSystem(OrthonormalSystem):
    """Orthonormal Haar system on Z_M, M a power of two.

    Coefficient 0 is the scaling function; coefficient 2^j + q is the wavelet
    at scale j (coarse to fine) and shift q.
    """

    label = "haar"

    def __init__(self, M: int):
        M = int(M)
        if M < 1 or (M & (M - 1)) != 0:
            raise ValueError(f"Haar system needs a power-of-two length, got {M}")
        super().__init__(FiniteAbelianGroup((M,)))

    def _param_string(self) -> str:
        return str(self.size)

    @property
    def tau(self) -> float:
        M = self.size
        if M == 1:
            return 1.0
        n = M.bit_length() - 1
        # finest-scale wavelets have modulus 2^{(n-1)/2} / sqrt(M)
        finest = 2.0 ** ((n - 1) / 2.0) / math.sqrt(M)
        return max(M ** -0.5, finest)

    def _analyze_array(self, values: np.ndarray) -> np.ndarray:
        out = np.empty_like(values.astype(np.complex128))
        approx = values.astype(np.complex128)
        while approx.shape[0] > 1:
            even, odd = approx[0::2], approx[1::2]
            half = approx.shape[0] // 2
            out[half : 2 * half] = (even - odd) / _SQRT2
            approx = (even + odd) / _SQRT2
        out[0] = approx[0]
        return out

    def _synthesize_array(self, entries: np.ndarray) -> np.ndarray:
        approx = entries[:1].astype(np.complex128)
        half = 1
        while half < entries.shape[0]:
            detail = entries[half : 2 * half]
            merged = np.empty(2 * half, dtype=np.complex128)
            merged[0::2] = (approx + detail) / _SQRT2
            merged[1::2] = (approx - detail) / _SQRT2
            approx = merged
            half *= 2
        return approx


def make_dft(group: FiniteAbelianGroup) -> CharacterSystem:
    return CharacterSystem(group)


def make_wht(n: int) -> WalshHadamardSystem:
    return WalshHadamardSystem(n)


def make_gabor_block(N: int, T: int) -> GaborBlockSystem:
    return GaborBlockSystem(N, T)


def make_haar(M: int) -> HaarSystem:
    return HaarSystem(M)


@dataclass(frozen=True)
class BoundednessCheck:
    tau: float
    bound: float
    passes: bool


def check_boundedness(system: OrthonormalSystem) -> BoundednessCheck:
    """Check the incoherence hypothesis tau <= M^{-1/2} (up to float slack)."""
    bound = system.size ** -0.5
    tau = system.tau
    return BoundednessCheck(tau=tau, bound=bound, passes=tau <= bound * (1.0 + 1e-12))


def parse_system(spec: str) -> OrthonormalSystem:
    """Build a system from a spec string: "dft:4x6", "wht:5", "gabor:N=16,T=8", "haar:64"."""
    label, _, params = spec.partition(":")
    label = label.strip().lower()
    params = params.strip()
    if not params:
        raise ValueError(f"system spec {spec!r} is missing parameters")
    if label == "dft":
        factors = tuple(int(v) for v in params.split("x"))
        return make_dft(FiniteAbelianGroup(factors))
    if label == "wht":
        return make_wht(int(params))
    if label == "gabor":
        kv = dict(item.split("=") for item in params.split(","))
        return make_gabor_block(int(kv["N"]), int(kv["T"]))
    if label == "haar":
        return make_haar(int(params))
    raise ValueError(f"unknown system label {label!r}")
