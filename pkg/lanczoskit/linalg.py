"""Dense symmetric/Hermitian linear algebra.

The reference eigensolver is cyclic Jacobi. Rotations are applied in a fixed
round-robin ordering: each round pairs every index with exactly one partner,
so the rotations of a round touch disjoint rows/columns and are applied
together as whole-array updates. Results are deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np
import scipy.linalg

from lanczoskit.config import settings
from lanczoskit.errors import dimension_mismatch, domain_error, non_convergence
from lanczoskit.numgrid import QuadratureWeights
from lanczoskit.observability import increment

Backend = Literal["auto", "jacobi", "lapack"]


def _square(entries: np.ndarray, kind: str) -> np.ndarray:
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise domain_error("not_square", f"{kind} must be a non-empty square matrix",
                           {"shape": list(entries.shape)})
    if not np.all(np.isfinite(entries)):
        raise domain_error("non_finite_matrix", f"{kind} has non-finite entries")
    return entries


def _max_abs(entries: np.ndarray) -> float:
    return float(np.max(np.abs(entries))) if entries.size else 0.0


@dataclass(frozen=True)
class SymmetricMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        a = _square(np.array(self.entries, dtype=float), "SymmetricMatrix")
        defect = _max_abs(a - a.T)
        if defect > settings.symmetry_tol * max(1.0, _max_abs(a)):
            raise domain_error("not_symmetric", "Matrix is not symmetric", {"defect": defect})
        sym = 0.5 * (a + a.T)
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        a = _square(np.array(self.entries, dtype=complex), "HermitianMatrix")
        defect = _max_abs(a - a.conj().T)
        if defect > settings.hermitian_tol * max(1.0, _max_abs(a)):
            raise domain_error("not_hermitian", "Matrix is not Hermitian", {"defect": defect})
        herm = 0.5 * (a + a.conj().T)
        herm.setflags(write=False)
        object.__setattr__(self, "entries", herm)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


MatrixLike = SymmetricMatrix | HermitianMatrix | np.ndarray


def as_array(m: MatrixLike) -> np.ndarray:
    if isinstance(m, SymmetricMatrix | HermitianMatrix):
        return m.entries
    return np.asarray(m)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues; column ``k`` of ``vectors`` belongs to ``values[k]``."""

    values: np.ndarray
    vectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return len(self.values)

    def lowest(self, k: int) -> Spectrum:
        _check_count(k, len(self))
        return Spectrum(self.values[:k], self.vectors[:, :k])

    def highest(self, k: int) -> Spectrum:
        _check_count(k, len(self))
        return Spectrum(self.values[-k:], self.vectors[:, -k:])

    def residual(self, a: MatrixLike) -> float:
        m = as_array(a)
        return _max_abs(m @ self.vectors - self.vectors * self.values)

    def orthonormality_defect(self, weights: QuadratureWeights | None = None) -> float:
        v = self.vectors
        gram = v.conj().T @ (v if weights is None else weights.w[:, None] * v)
        return _max_abs(gram - np.eye(gram.shape[0]))


def _check_count(k: int, available: int) -> None:
    if not 1 <= k <= available:
        raise domain_error(
            "bad_eigen_count", f"Requested {k} eigenpairs, {available} available",
            {"k": k, "available": available},
        )


def canonical_spectrum(values: np.ndarray, vectors: np.ndarray) -> Spectrum:
    """Sort ascending and rotate each eigenvector so its first large entry is real positive."""
    order = np.argsort(values, kind="stable")
    values = np.asarray(values, dtype=float)[order].copy()
    vectors = np.array(vectors[:, order])
    if vectors.size:
        pivot_rows = np.argmax(np.abs(vectors) > settings.sign_threshold, axis=0)
        pivots = vectors[pivot_rows, np.arange(vectors.shape[1])]
        vectors *= np.conj(pivots) / np.abs(pivots)
        if np.iscomplexobj(vectors):
            vectors[pivot_rows, np.arange(vectors.shape[1])] = np.abs(pivots)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors)


@lru_cache(maxsize=16)
def _round_robin(dim: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    m = dim + dim % 2
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        keep = (p < dim) & (q < dim)
        lo, hi = np.minimum(p[keep], q[keep]), np.maximum(p[keep], q[keep])
        rounds.append((lo, hi))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    apq = a[p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    if not np.any(active):
        return
    p, q, apq, mag = p[active], q[active], apq[active], mag[active]
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    phase = apq / mag
    sw, swc = s * phase, s * np.conj(phase)

    rp, rq = a[p, :], a[q, :]
    a[p, :] = c[:, None] * rp - sw[:, None] * rq
    a[q, :] = swc[:, None] * rp + c[:, None] * rq
    cp, cq = a[:, p], a[:, q]
    a[:, p] = cp * c - cq * swc
    a[:, q] = cp * sw + cq * c
    a[p, q] = 0.0
    a[q, p] = 0.0
    vp, vq = v[:, p], v[:, q]
    v[:, p] = vp * c - vq * swc
    v[:, q] = vp * sw + vq * c
    increment("linalg.jacobi.rotations", int(p.size))


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(entries: np.ndarray, tol: float, max_sweeps: int) -> Spectrum:
    a = np.array(entries)
    dim = a.shape[0]
    v = np.eye(dim, dtype=a.dtype)
    target = tol * float(np.linalg.norm(a))
    rounds = _round_robin(dim)
    sweep = 0
    while (off := _off_norm(a)) > target:
        if sweep == max_sweeps:
            raise non_convergence(sweep, off, target)
        for p, q in rounds:
            _rotate(a, v, p, q)
        a = 0.5 * (a + a.conj().T)
        sweep += 1
    increment("linalg.jacobi.sweeps", sweep)
    return canonical_spectrum(np.diag(a).real, v)


def jacobi_eigen(
    a: SymmetricMatrix, tol: float | None = None, max_sweeps: int | None = None
) -> Spectrum:
    return _jacobi(
        a.entries,
        settings.jacobi_tol if tol is None else tol,
        settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps,
    )


def hermitian_eigen(
    a: HermitianMatrix, tol: float | None = None, max_sweeps: int | None = None
) -> Spectrum:
    return _jacobi(
        a.entries,
        settings.jacobi_tol if tol is None else tol,
        settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps,
    )


def eigensolve(
    a: SymmetricMatrix | HermitianMatrix,
    backend: Backend = "auto",
    subset: tuple[int, int] | None = None,
) -> Spectrum:
    """Eigendecomposition through Jacobi for small inputs and LAPACK for large ones.

    ``subset`` is an inclusive ascending index range, as in ``scipy.linalg.eigh``.
    """
    if backend == "auto":
        backend = "jacobi" if a.dim <= settings.jacobi_max_dim else "lapack"
    if backend == "jacobi":
        full = jacobi_eigen(a) if isinstance(a, SymmetricMatrix) else hermitian_eigen(a)
        if subset is None:
            return full
        lo, hi = subset
        return Spectrum(full.values[lo : hi + 1], full.vectors[:, lo : hi + 1])
    values, vectors = scipy.linalg.eigh(a.entries, subset_by_index=subset)
    increment("linalg.lapack.calls")
    return canonical_spectrum(values, vectors)


def tridiagonal_eigen(diagonal: np.ndarray, off_diagonal: np.ndarray, k: int) -> Spectrum:
    """Lowest ``k`` eigenpairs of a symmetric tridiagonal matrix."""
    _check_count(k, len(diagonal))
    values, vectors = scipy.linalg.eigh_tridiagonal(
        diagonal, off_diagonal, select="i", select_range=(0, k - 1)
    )
    increment("linalg.lapack.calls")
    return canonical_spectrum(values, vectors)


def spectral_exp(
    h: SymmetricMatrix, scale: complex, spectrum: Spectrum | None = None
) -> np.ndarray:
    """``V diag(exp(scale * lambda)) V^H`` from the eigendecomposition of ``h``."""
    spec = spectrum if spectrum is not None else eigensolve(h)
    v = spec.vectors
    return (v * np.exp(complex(scale) * spec.values)) @ v.conj().T


def commutator(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    left, right = as_array(a), as_array(b)
    if left.shape != right.shape:
        raise dimension_mismatch(left.shape[0], right.shape[0])
    return left @ right - right @ left
