"""Green's kernel of ``-d^2/dx^2 + V`` with Dirichlet ends and its Fredholm spectrum.

The kernel K(P, Q) solves ``-Psi'' + V Psi = u`` as ``Psi(P) = int K(P, Q) u(Q) dQ``;
its eigenvalues are the reciprocals of the energies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from lanczoskit.config import settings
from lanczoskit.errors import domain_error, singular_hamiltonian
from lanczoskit.linalg import Spectrum, SymmetricMatrix, canonical_spectrum, eigensolve
from lanczoskit.numgrid import Grid1D, QuadratureWeights
from lanczoskit.schrodinger import Hamiltonian, analytic_levels, solve_spectrum

KernelOrigin = Literal["discrete-inverse", "analytic"]


@dataclass(frozen=True)
class Kernel:
    grid: Grid1D
    weights: QuadratureWeights
    K: np.ndarray = field(repr=False)
    origin: KernelOrigin

    @property
    def dim(self) -> int:
        return self.grid.n


@dataclass(frozen=True)
class ReciprocityPair:
    E: float
    mu: float

    @property
    def product(self) -> float:
        return self.E * self.mu

    @property
    def abs_dev(self) -> float:
        return abs(self.product - 1.0)


@dataclass(frozen=True)
class ReciprocityReport:
    origin: KernelOrigin
    pairs: list[ReciprocityPair]
    max_abs_deviation: float
    # Analytic kernels only: deviation against the discrete energies of H.
    discrete_deviation: float | None = None


def _frozen_symmetric(k: np.ndarray) -> np.ndarray:
    k = 0.5 * (k + k.T)
    k.setflags(write=False)
    return k


def kernel_from_inverse(h: Hamiltonian, weights: QuadratureWeights) -> Kernel:
    """``K = H^-1 diag(1/w)``, the kernel whose quadrature action inverts H exactly."""
    h.grid.require_same(weights.grid)
    if np.any(weights.w != weights.w[0]):
        raise domain_error(
            "nonuniform_weights", "A symmetric inverse kernel needs uniform quadrature weights"
        )
    threshold = settings.singular_tol * float(np.max(np.abs(h.matrix.entries)))
    lowest = float(
        scipy.linalg.eigvalsh_tridiagonal(
            h.diagonal, h.off_diagonal, select="i", select_range=(0, 0)
        )[0]
    )
    if lowest <= threshold:
        raise singular_hamiltonian(lowest, threshold)
    factor = scipy.linalg.cho_factor(h.matrix.entries)
    h_inv = scipy.linalg.cho_solve(factor, np.eye(h.dim))
    return Kernel(h.grid, weights, _frozen_symmetric(h_inv / weights.w[None, :]),
                  "discrete-inverse")


def kernel_analytic_free(grid: Grid1D, weights: QuadratureWeights) -> Kernel:
    """Closed-form Green's function of ``-d^2/dx^2`` on (a, b) with Dirichlet ends."""
    grid.require_same(weights.grid)
    x = grid.points
    lo = np.minimum.outer(x, x)
    hi = np.maximum.outer(x, x)
    k = (lo - grid.a) * (grid.b - hi) / grid.length
    k.setflags(write=False)
    return Kernel(grid, weights, k, "analytic")


def nystrom_matrix(kernel: Kernel) -> SymmetricMatrix:
    """``diag(sqrt w) K diag(sqrt w)``; exactly symmetric because the outer product is."""
    sqrt_w = np.sqrt(kernel.weights.w)
    return SymmetricMatrix(kernel.K * np.outer(sqrt_w, sqrt_w))


def kernel_spectrum(kernel: Kernel, k: int) -> Spectrum:
    """Largest ``k`` Fredholm eigenpairs, ascending, as quadrature-normalized grid functions."""
    n = kernel.dim
    if not 1 <= k <= n:
        raise domain_error("bad_eigen_count", f"k must satisfy 1 <= k <= {n}, got {k}", {"k": k})
    top = eigensolve(nystrom_matrix(kernel), subset=(n - k, n - 1))
    return canonical_spectrum(top.values, top.vectors / np.sqrt(kernel.weights.w)[:, None])


def apply_kernel(kernel: Kernel, u: np.ndarray) -> np.ndarray:
    """Quadrature action ``sum_j K[i, j] w[j] u[j]``: the solution Psi of ``H Psi = u``."""
    return kernel.K @ (kernel.weights.w * np.asarray(u))


def inverse_residual(h: Hamiltonian, kernel: Kernel) -> float:
    h.grid.require_same(kernel.grid)
    product = h.matrix.entries @ kernel.K * kernel.weights.w[None, :]
    return float(np.max(np.abs(product - np.eye(h.dim))))


def _deviation(energies: np.ndarray, mus: np.ndarray) -> float:
    return float(np.max(np.abs(energies * mus - 1.0)))


def certify_reciprocity(h: Hamiltonian, kernel: Kernel, k: int) -> ReciprocityReport:
    """Pair the lowest ``k`` energies with the largest ``k`` kernel eigenvalues.

    Sampled on the nodes, the closed-form free kernel is the exact inverse of
    the free stencil, so analytic kernels are certified against the continuum
    energies (k pi / L)^2; the discrete comparison is kept as
    ``discrete_deviation``.
    """
    h.grid.require_same(kernel.grid)
    discrete = np.asarray(solve_spectrum(h, k).values)
    mus = np.asarray(kernel_spectrum(kernel, k).values)[::-1]
    if kernel.origin == "analytic":
        if np.any(h.potential_values != 0.0):
            raise domain_error(
                "potential_mismatch",
                "The closed-form kernel inverts the free operator; H must have V = 0",
                {"potential": h.potential},
            )
        energies = analytic_levels("zero", h.grid, k)
        discrete_deviation = _deviation(discrete, mus)
    else:
        energies = discrete
        discrete_deviation = None
    pairs = [ReciprocityPair(float(e), float(mu)) for e, mu in zip(energies, mus, strict=True)]
    return ReciprocityReport(
        origin=kernel.origin,
        pairs=pairs,
        max_abs_deviation=_deviation(energies, mus),
        discrete_deviation=discrete_deviation,
    )


def reciprocity_rows(report: ReciprocityReport) -> list[tuple[int, float, float, float, float]]:
    return [
        (index, pair.E, pair.mu, pair.product, pair.abs_dev)
        for index, pair in enumerate(report.pairs, start=1)
    ]
