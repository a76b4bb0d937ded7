"""Schrödinger-picture states and Heisenberg-picture observables under one Hamiltonian.

Convention: ``i dPsi/dt = H Psi`` so ``Psi(t) = exp(-iHt) Psi(0)`` and
``O_H(t) = exp(+iHt) O exp(-iHt)``, whence ``dO_H/dt = i [H, O_H]``.
Both pictures are computed from one cached eigendecomposition of H.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from lanczoskit.config import settings
from lanczoskit.errors import dimension_mismatch, domain_error
from lanczoskit.linalg import HermitianMatrix, Spectrum, commutator, eigensolve, spectral_exp
from lanczoskit.numgrid import Grid1D, QuadratureWeights, norm
from lanczoskit.observability import increment
from lanczoskit.schrodinger import Hamiltonian

NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    grid: Grid1D
    psi: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        psi = np.array(self.psi, dtype=complex)
        if psi.shape != (self.grid.n,):
            raise dimension_mismatch(self.grid.n, psi.shape[0] if psi.ndim else 0)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    def check_normalized(self, weights: QuadratureWeights) -> None:
        value = norm(weights, self.psi) ** 2
        if abs(value - 1.0) > NORM_TOL:
            raise domain_error("not_normalized", "State is not normalized", {"norm2": value})


@dataclass(frozen=True)
class Observable:
    label: str
    matrix: HermitianMatrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.dim


def state_from_vector(
    grid: Grid1D, weights: QuadratureWeights, vector: np.ndarray
) -> StateVector:
    """Normalize ``vector`` in the quadrature norm."""
    v = np.asarray(vector, dtype=complex)
    size = norm(weights, v)
    if size == 0.0:
        raise domain_error("zero_state", "Cannot normalize the zero vector")
    return StateVector(grid, v / size)


def gaussian_packet(
    grid: Grid1D, weights: QuadratureWeights, x0: float, sigma: float, k0: float = 0.0
) -> StateVector:
    x = grid.points
    return state_from_vector(
        grid, weights, np.exp(-((x - x0) ** 2) / (2.0 * sigma**2) + 1j * k0 * x)
    )


def position_observable(grid: Grid1D) -> Observable:
    return Observable("position", HermitianMatrix(np.diag(grid.points)))


def momentum_observable(grid: Grid1D) -> Observable:
    """``p = -i D`` with D the central difference, truncated at the Dirichlet ends."""
    off = np.full(grid.n - 1, 1.0 / (2.0 * grid.h))
    d = np.diag(off, 1) - np.diag(off, -1)
    return Observable("momentum", HermitianMatrix(-1j * d))


def hamiltonian_observable(h: Hamiltonian) -> Observable:
    return Observable("hamiltonian", HermitianMatrix(h.matrix.entries))


class Propagator:
    """Time evolution under ``h`` from a single eigendecomposition."""

    def __init__(self, h: Hamiltonian, spectrum: Spectrum | None = None):
        self.hamiltonian = h
        self.spectrum = spectrum if spectrum is not None else eigensolve(h.matrix)

    @property
    def spread(self) -> float:
        values = self.spectrum.values
        return float(values[-1] - values[0])

    def unitary(self, t: float) -> np.ndarray:
        increment("pictures.unitaries")
        return spectral_exp(self.hamiltonian.matrix, -1j * t, spectrum=self.spectrum)

    def evolve(self, state: StateVector, t: float) -> StateVector:
        if state.grid.n != self.hamiltonian.dim:
            raise dimension_mismatch(self.hamiltonian.dim, state.grid.n)
        return StateVector(state.grid, self.unitary(t) @ state.psi)

    def heisenberg(self, o: Observable, t: float) -> Observable:
        if o.dim != self.hamiltonian.dim:
            raise dimension_mismatch(self.hamiltonian.dim, o.dim)
        u = self.unitary(t)
        evolved = u.conj().T @ o.matrix.entries @ u
        return Observable(f"{o.label}(t={t:g})", HermitianMatrix(evolved))


def schrodinger_evolve(h: Hamiltonian, psi0: StateVector, t: float) -> StateVector:
    return Propagator(h).evolve(psi0, t)


def heisenberg_evolve(h: Hamiltonian, o: Observable, t: float) -> Observable:
    return Propagator(h).heisenberg(o, t)


def expectation(o: Observable, state: StateVector, weights: QuadratureWeights) -> float:
    """``<psi, O psi>`` in the quadrature inner product, O acting on grid values."""
    if o.dim != state.grid.n:
        raise dimension_mismatch(o.dim, state.grid.n)
    value = np.sum(weights.w * np.conj(state.psi) * (o.matrix.entries @ state.psi))
    if abs(value.imag) > settings.hermitian_tol * max(1.0, abs(value.real)):
        raise domain_error(
            "complex_expectation",
            f"Expectation of {o.label} has imaginary part {value.imag:.3e}",
            {"imag": float(value.imag)},
        )
    return float(value.real)


@dataclass(frozen=True)
class PictureSample:
    t: float
    expect_schrodinger: float
    expect_heisenberg: float

    @property
    def abs_diff(self) -> float:
        return abs(self.expect_schrodinger - self.expect_heisenberg)


def picture_series(
    h: Hamiltonian,
    o: Observable,
    psi0: StateVector,
    weights: QuadratureWeights,
    times: Sequence[float],
    propagator: Propagator | None = None,
) -> list[PictureSample]:
    prop = propagator or Propagator(h)
    samples = []
    for t in times:
        moving_state = expectation(o, prop.evolve(psi0, t), weights)
        moving_operator = expectation(prop.heisenberg(o, t), psi0, weights)
        samples.append(PictureSample(float(t), moving_state, moving_operator))
    return samples


def verify_picture_equivalence(
    h: Hamiltonian,
    o: Observable,
    psi0: StateVector,
    times: Sequence[float],
    weights: QuadratureWeights,
) -> float:
    samples = picture_series(h, o, psi0, weights, times)
    return max((s.abs_diff for s in samples), default=0.0)


def default_derivative_step(h: Hamiltonian, scale: float = 0.05) -> float:
    """Step whose phase increment over the widest Bohr frequency is ``scale``."""
    return scale / max(Propagator(h).spread, 1.0)


def verify_heisenberg_derivative(
    h: Hamiltonian, o: Observable, t: float, dt: float, propagator: Propagator | None = None
) -> float:
    """Max-norm gap between the central difference of O_H and ``i [H, O_H(t)]``."""
    if dt <= 0.0:
        raise domain_error("bad_step", f"dt must be positive, got {dt}")
    prop = propagator or Propagator(h)
    forward = prop.heisenberg(o, t + dt).matrix.entries
    backward = prop.heisenberg(o, t - dt).matrix.entries
    at_t = prop.heisenberg(o, t).matrix.entries
    derivative = (forward - backward) / (2.0 * dt)
    return float(np.max(np.abs(derivative - 1j * commutator(h.matrix, at_t))))


@dataclass(frozen=True)
class MatrixMechanics:
    """Heisenberg's matrix representation: elements of O between energy eigenstates.

    ``at(t)[m, n] = O_mn exp(i (E_m - E_n) t)``; each element oscillates at a Bohr
    frequency.
    """

    energies: np.ndarray
    basis: np.ndarray = field(repr=False)
    elements: np.ndarray = field(repr=False)

    def at(self, t: float) -> np.ndarray:
        phase = np.exp(1j * self.energies * t)
        return phase[:, None] * self.elements * np.conj(phase)[None, :]

    def in_grid_basis(self, t: float) -> np.ndarray:
        return self.basis @ self.at(t) @ self.basis.conj().T


def matrix_representation(
    h: Hamiltonian, o: Observable, propagator: Propagator | None = None
) -> MatrixMechanics:
    prop = propagator or Propagator(h)
    v = prop.spectrum.vectors
    return MatrixMechanics(
        energies=np.asarray(prop.spectrum.values),
        basis=v,
        elements=v.conj().T @ o.matrix.entries @ v,
    )


def displaced_ground_state(
    h: Hamiltonian, weights: QuadratureWeights, shift: float, propagator: Propagator | None = None
) -> StateVector:
    """Ground state of ``h`` translated by ``shift`` (linear interpolation, zero outside)."""
    prop = propagator or Propagator(h)
    x = h.grid.points
    ground = np.asarray(prop.spectrum.vectors[:, 0]).real
    padded_x = np.concatenate(([h.grid.a], x, [h.grid.b]))
    padded = np.concatenate(([0.0], ground, [0.0]))
    moved = np.interp(x - shift, padded_x, padded, left=0.0, right=0.0)
    return state_from_vector(h.grid, weights, moved)


def ground_state(
    h: Hamiltonian, weights: QuadratureWeights, propagator: Propagator | None = None
) -> StateVector:
    prop = propagator or Propagator(h)
    return state_from_vector(h.grid, weights, prop.spectrum.vectors[:, 0])
