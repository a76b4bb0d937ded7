"""Uniform interior-point grids with Dirichlet ends and their trapezoid weights.

Boundary nodes are never stored: the Dirichlet condition pins them to zero,
so every grid function, Hamiltonian and kernel is an ``n``-vector or an
``n x n`` matrix over the interior points only.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from lanczoskit.errors import domain_error, grid_mismatch


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int
    h: float = field(init=False)
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise domain_error(
                "invalid_interval",
                f"Grid interval requires b > a, got a={self.a}, b={self.b}",
                {"a": self.a, "b": self.b},
            )
        if self.n < 3:
            raise domain_error(
                "too_few_points", f"Grid requires n >= 3 interior points, got {self.n}",
                {"n": self.n},
            )
        h = (self.b - self.a) / (self.n + 1)
        object.__setattr__(self, "h", h)
        object.__setattr__(
            self, "points", _frozen(self.a + h * np.arange(1, self.n + 1, dtype=float))
        )

    @property
    def length(self) -> float:
        return self.b - self.a

    def same_as(self, other: Grid1D) -> bool:
        return (self.a, self.b, self.n) == (other.a, other.b, other.n)

    def require_same(self, other: Grid1D) -> None:
        if not self.same_as(other):
            raise grid_mismatch(self, other)


@dataclass(frozen=True)
class QuadratureWeights:
    grid: Grid1D
    w: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        w = np.asarray(self.w, dtype=float)
        if w.shape != (self.grid.n,):
            raise domain_error(
                "bad_weights", f"Expected {self.grid.n} weights, got shape {w.shape}"
            )
        if np.any(w <= 0.0):
            raise domain_error("bad_weights", "Quadrature weights must be positive")
        object.__setattr__(self, "w", _frozen(w.copy()))

    @property
    def total(self) -> float:
        return float(np.sum(self.w))


def make_grid(a: float, b: float, n: int) -> Grid1D:
    return Grid1D(float(a), float(b), int(n))


def trapezoid_weights(grid: Grid1D) -> QuadratureWeights:
    # End corrections vanish because grid functions are zero at a and b.
    return QuadratureWeights(grid, np.full(grid.n, grid.h))


def integrate(
    weights: QuadratureWeights, values: np.ndarray | Callable[[np.ndarray], np.ndarray]
) -> float:
    """Quadrature sum of real ``values`` (an array or a vectorized function of x)."""
    if callable(values):
        values = values(weights.grid.points)
    return float(np.sum(weights.w * np.asarray(values, dtype=float)))


def inner(weights: QuadratureWeights, u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.sum(weights.w * np.conj(u) * v))


def norm(weights: QuadratureWeights, u: np.ndarray) -> float:
    return float(np.sqrt(np.sum(weights.w * np.abs(u) ** 2)))
