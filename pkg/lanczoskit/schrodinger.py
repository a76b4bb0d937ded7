"""Finite-difference Hamiltonian ``H = -d^2/dx^2 + V`` on an interior-point grid.

Units: hbar = 1 and 2m = 1, so the kinetic term is exactly ``-d^2/dx^2``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from lanczoskit.config import settings
from lanczoskit.errors import domain_error
from lanczoskit.linalg import Spectrum, SymmetricMatrix, eigensolve, tridiagonal_eigen
from lanczoskit.numgrid import Grid1D

Sampler = Callable[[np.ndarray], np.ndarray]

POTENTIAL_NAMES = ("zero", "harmonic", "quartic", "well-bump")
HARMONIC_WALL_MARGIN = 3.0


@dataclass(frozen=True)
class Potential:
    label: str
    sampler: Sampler = field(repr=False, compare=False)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.sampler(x), dtype=float), np.shape(x))

    def shifted(self, c: float) -> Potential:
        return Potential(f"{self.label}+{c:g}", lambda x: self.sampler(x) + c)


def potential_from_name(name: str, grid: Grid1D | None = None, **params: Any) -> Potential:
    """Named potential library exposed to the CLI.

    ``well-bump`` takes ``c``, ``x0`` and ``s``; ``x0`` and ``s`` default to the
    midpoint and a tenth of the interval of ``grid``.
    """
    if name == "zero":
        return Potential("zero", lambda x: np.zeros_like(x))
    if name == "harmonic":
        return Potential("harmonic", lambda x: x**2)
    if name == "quartic":
        return Potential("quartic", lambda x: x**4)
    if name == "well-bump":
        c = float(params.get("c", 50.0))
        x0 = params.get("x0")
        s = params.get("s")
        if x0 is None or s is None:
            if grid is None:
                raise domain_error("missing_parameter", "well-bump needs x0 and s or a grid")
            x0 = 0.5 * (grid.a + grid.b) if x0 is None else x0
            s = grid.length / 10.0 if s is None else s
        x0, s = float(x0), float(s)
        if s <= 0.0:
            raise domain_error("invalid_parameter", "well-bump width s must be positive")
        return Potential(
            f"well-bump(c={c:g},x0={x0:g},s={s:g})",
            lambda x: c * np.exp(-((x - x0) ** 2) / s**2),
        )
    raise domain_error(
        "unknown_potential", f"Unknown potential {name!r}", {"known": list(POTENTIAL_NAMES)}
    )


@dataclass(frozen=True)
class Hamiltonian:
    grid: Grid1D
    potential: str
    matrix: SymmetricMatrix = field(repr=False)
    diagonal: np.ndarray = field(repr=False, compare=False)
    off_diagonal: np.ndarray = field(repr=False, compare=False)
    potential_values: np.ndarray = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.grid.n


def assemble_hamiltonian(grid: Grid1D, potential: Potential) -> Hamiltonian:
    x = grid.points
    with np.errstate(all="ignore"):
        v = np.array(potential(x), dtype=float)
    bad = ~np.isfinite(v)
    if np.any(bad):
        where = float(x[np.argmax(bad)])
        raise domain_error(
            "non_finite_potential",
            f"Potential {potential.label} is not finite at x={where!r}",
            {"x": where, "potential": potential.label},
        )
    inv_h2 = 1.0 / grid.h**2
    diagonal = 2.0 * inv_h2 + v
    off_diagonal = np.full(grid.n - 1, -inv_h2)
    m = np.diag(diagonal) + np.diag(off_diagonal, 1) + np.diag(off_diagonal, -1)
    for arr in (diagonal, off_diagonal, v):
        arr.setflags(write=False)
    return Hamiltonian(grid, potential.label, SymmetricMatrix(m), diagonal, off_diagonal, v)


def solve_spectrum(h: Hamiltonian, k: int) -> Spectrum:
    if not 1 <= k <= h.dim:
        raise domain_error(
            "bad_eigen_count", f"k must satisfy 1 <= k <= {h.dim}, got {k}", {"k": k}
        )
    if h.dim <= settings.jacobi_max_dim:
        return eigensolve(h.matrix).lowest(k)
    return tridiagonal_eigen(np.asarray(h.diagonal), np.asarray(h.off_diagonal), k)


def analytic_levels(name: str, grid: Grid1D, k: int) -> np.ndarray | None:
    """Continuum eigenvalues for potentials with a closed form, else ``None``.

    ``harmonic`` has a reference only when both walls are at least
    ``sqrt(2k + 1) + HARMONIC_WALL_MARGIN`` from the origin.
    """
    j = np.arange(1, k + 1, dtype=float)
    if name == "zero":
        return (j * math.pi / grid.length) ** 2
    if name == "harmonic":
        if min(-grid.a, grid.b) < math.sqrt(2.0 * k + 1.0) + HARMONIC_WALL_MARGIN:
            return None
        return 2.0 * j - 1.0
    return None
