from __future__ import annotations

import math

import numpy as np
import pytest

from lanczoskit.errors import DomainError
from lanczoskit.linalg import tridiagonal_eigen
from lanczoskit.numgrid import make_grid
from lanczoskit.schrodinger import (
    Potential,
    analytic_levels,
    assemble_hamiltonian,
    potential_from_name,
    solve_spectrum,
)

ZERO = potential_from_name("zero")
HARMONIC = potential_from_name("harmonic")


def test_three_point_stencil():
    h = assemble_hamiltonian(make_grid(0.0, 1.0, 3), ZERO)
    assert h.diagonal.tolist() == [32.0, 32.0, 32.0]
    assert h.off_diagonal.tolist() == [-16.0, -16.0]
    assert h.matrix.entries[0, 2] == 0.0

    shifted = assemble_hamiltonian(make_grid(0.0, 1.0, 3), ZERO.shifted(7.0))
    assert shifted.diagonal.tolist() == [39.0, 39.0, 39.0]


def test_singular_potential_rejected():
    pole = Potential("pole", lambda x: 1.0 / (x - 0.5))
    with pytest.raises(DomainError) as exc:
        assemble_hamiltonian(make_grid(0.0, 1.0, 3), pole)
    assert exc.value.code == "non_finite_potential"
    assert exc.value.details["x"] == 0.5


def test_full_spectrum_of_three_point_grid():
    values = solve_spectrum(assemble_hamiltonian(make_grid(0.0, 1.0, 3), ZERO), 3).values
    root2 = math.sqrt(2.0)
    np.testing.assert_allclose(values, [32 - 16 * root2, 32, 32 + 16 * root2], rtol=1e-13)


def test_eigen_count_preconditions():
    h = assemble_hamiltonian(make_grid(0.0, 1.0, 5), ZERO)
    for k in (0, 6):
        with pytest.raises(DomainError) as exc:
            solve_spectrum(h, k)
        assert exc.value.code == "bad_eigen_count"


def test_square_well_levels():
    grid = make_grid(0.0, 1.0, 2000)
    values = solve_spectrum(assemble_hamiltonian(grid, ZERO), 5).values
    expected = [9.8696, 39.478, 88.826, 157.91, 246.74]
    np.testing.assert_allclose(values, expected, rtol=1e-3)
    np.testing.assert_allclose(values, analytic_levels("zero", grid, 5), rtol=1e-3)


def test_harmonic_levels():
    grid = make_grid(-10.0, 10.0, 2000)
    values = solve_spectrum(assemble_hamiltonian(grid, HARMONIC), 3).values
    np.testing.assert_allclose(values, [1.0, 3.0, 5.0], rtol=1e-3)
    np.testing.assert_allclose(analytic_levels("harmonic", grid, 3), [1.0, 3.0, 5.0])


@pytest.mark.parametrize(("a", "b", "k"), [(0.0, 1.0, 1), (-5.0, 5.0, 5), (-10.0, 4.0, 2)])
def test_harmonic_reference_needs_room(a, b, k):
    assert analytic_levels("harmonic", make_grid(a, b, 50), k) is None


def test_second_order_convergence():
    errors = []
    for n in (99, 199):
        values = solve_spectrum(assemble_hamiltonian(make_grid(0.0, 1.0, n), ZERO), 1).values
        errors.append(abs(values[0] - math.pi**2) / math.pi**2)
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=1e-2)


def test_jacobi_and_tridiagonal_paths_agree():
    h = assemble_hamiltonian(make_grid(-4.0, 4.0, 300), potential_from_name("quartic"))
    dense = solve_spectrum(h, 6)
    tri = tridiagonal_eigen(np.asarray(h.diagonal), np.asarray(h.off_diagonal), 6)
    np.testing.assert_allclose(dense.values, tri.values, rtol=1e-10)


@pytest.mark.parametrize("name", ["zero", "harmonic", "well-bump"])
def test_positive_and_shift_covariant(name):
    grid = make_grid(0.0, 1.0, 50)
    potential = potential_from_name(name, grid)
    base = solve_spectrum(assemble_hamiltonian(grid, potential), 5).values
    moved = solve_spectrum(assemble_hamiltonian(grid, potential.shifted(3.5)), 5).values
    assert base[0] > 0
    np.testing.assert_allclose(moved - base, 3.5, atol=1e-9)


def test_well_bump_defaults_and_validation():
    grid = make_grid(0.0, 2.0, 9)
    bump = potential_from_name("well-bump", grid)
    assert bump(np.array([1.0]))[0] == pytest.approx(50.0)
    assert bump(np.array([1.2]))[0] == pytest.approx(50.0 * math.exp(-1.0))
    with pytest.raises(DomainError):
        potential_from_name("well-bump")
    with pytest.raises(DomainError) as exc:
        potential_from_name("coulomb")
    assert exc.value.code == "unknown_potential"
    assert analytic_levels("quartic", grid, 3) is None
