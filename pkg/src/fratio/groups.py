"""Finite abelian groups as products of cyclic factors, and vectors indexed by them.

Element indexing is mixed-radix, factor-major with the last factor varying
fastest, i.e. the flat index of (x_1, ..., x_d) is the C-order index of the
tuple in an array of shape (n_1, ..., n_d).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups Z_{n_1} x ... x Z_{n_d}."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        if not factors:
            raise ValueError("group needs at least one cyclic factor")
        if any(n < 1 for n in factors):
            raise ValueError(f"cyclic factors must be >= 1, got {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def size(self) -> int:
        return int(np.prod(self.factors, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.factors

    def index_to_tuple(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} out of range for group of size {self.size}")
        return tuple(int(v) for v in np.unravel_index(index, self.factors))

    def tuple_to_index(self, element: tuple[int, ...]) -> int:
        if len(element) != len(self.factors):
            raise ValueError("element arity does not match the factor list")
        reduced = tuple(x % n for x, n in zip(element, self.factors))
        return int(np.ravel_multi_index(reduced, self.factors))

    def __str__(self) -> str:
        return "x".join(str(n) for n in self.factors)


def _as_complex_vector(values, size: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).reshape(-1).copy()
    if arr.shape[0] != size:
        raise ValueError(f"expected {size} values, got {arr.shape[0]}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Signal:
    """Complex-valued function on a finite abelian group (spatial side)."""

    group: FiniteAbelianGroup
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_complex_vector(self.values, self.group.size))

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.values)))

    @property
    def l2(self) -> float:
        return float(np.linalg.norm(self.values))

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    @property
    def is_nonzero(self) -> bool:
        return self.l2 > 0.0


@dataclass(frozen=True)
class CoefficientVector:
    """Expansion coefficients of a signal in some orthonormal system."""

    system_id: str
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128).reshape(-1).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.entries)))

    @property
    def l2(self) -> float:
        return float(np.linalg.norm(self.entries))

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0
