from __future__ import annotations

import numpy as np
import pytest

from lanczoskit.errors import DomainError, NumericalError
from lanczoskit.linalg import (
    HermitianMatrix,
    SymmetricMatrix,
    commutator,
    eigensolve,
    hermitian_eigen,
    jacobi_eigen,
    spectral_exp,
    tridiagonal_eigen,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _random_symmetric(dim: int, seed: int) -> np.ndarray:
    m = np.random.default_rng(seed).standard_normal((dim, dim))
    return m + m.T


def test_jacobi_small_closed_forms():
    assert jacobi_eigen(SymmetricMatrix(np.eye(3))).values.tolist() == [1.0, 1.0, 1.0]
    assert jacobi_eigen(SymmetricMatrix(np.diag([3.0, 1.0, 2.0]))).values.tolist() == [1, 2, 3]

    spectrum = jacobi_eigen(SymmetricMatrix(np.array([[2.0, 1.0], [1.0, 2.0]])))
    np.testing.assert_allclose(spectrum.values, [1.0, 3.0], atol=1e-14)
    r = 1.0 / np.sqrt(2.0)
    np.testing.assert_allclose(spectrum.vectors, [[r, r], [-r, r]], atol=1e-14)


def test_hermitian_closed_forms():
    np.testing.assert_allclose(hermitian_eigen(HermitianMatrix(SIGMA_Y)).values, [-1, 1],
                               atol=1e-14)
    np.testing.assert_allclose(hermitian_eigen(HermitianMatrix(np.eye(2))).values, [1, 1])
    np.testing.assert_allclose(
        hermitian_eigen(HermitianMatrix(np.diag([5.0, -5.0]))).values, [-5, 5]
    )


def test_constructors_reject_asymmetry():
    with pytest.raises(DomainError) as exc:
        SymmetricMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert exc.value.code == "not_symmetric"
    with pytest.raises(DomainError) as exc:
        HermitianMatrix(np.array([[0.0, 1j], [1j, 0.0]]))
    assert exc.value.code == "not_hermitian"
    with pytest.raises(DomainError) as exc:
        SymmetricMatrix(np.ones((2, 3)))
    assert exc.value.code == "not_square"


@pytest.mark.parametrize("dim", [1, 2, 7, 40, 200])
def test_jacobi_spectrum_contract(dim):
    a = _random_symmetric(dim, seed=dim)
    scale = max(1.0, float(np.max(np.abs(a))))
    spectrum = jacobi_eigen(SymmetricMatrix(a))
    v, lam = spectrum.vectors, spectrum.values
    assert np.all(np.diff(lam) >= 0)
    assert spectrum.orthonormality_defect() <= 1e-10
    assert spectrum.residual(a) <= 1e-9 * scale
    assert np.max(np.abs(v * lam @ v.T - a)) <= 1e-9 * scale
    assert abs(lam.sum() - np.trace(a)) <= 1e-9 * scale * dim
    first_large = np.argmax(np.abs(v) > 1e-8, axis=0)
    assert np.all(v[first_large, np.arange(dim)] > 0)


def test_jacobi_agrees_with_lapack():
    a = SymmetricMatrix(_random_symmetric(60, seed=11))
    reference = eigensolve(a, backend="lapack")
    jacobi = eigensolve(a, backend="jacobi")
    np.testing.assert_allclose(jacobi.values, reference.values, atol=1e-10)
    # Sign convention makes simple eigenvectors comparable column by column.
    np.testing.assert_allclose(jacobi.vectors, reference.vectors, atol=1e-6)


def test_complex_jacobi_matches_lapack():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    a = HermitianMatrix(m + m.conj().T)
    spectrum = hermitian_eigen(a)
    np.testing.assert_allclose(spectrum.values, np.linalg.eigvalsh(a.entries), atol=1e-10)
    assert spectrum.orthonormality_defect() <= 1e-10
    assert spectrum.residual(a) <= 1e-9 * np.max(np.abs(a.entries))


def test_subset_selects_top_pairs():
    a = SymmetricMatrix(_random_symmetric(20, seed=3))
    top = eigensolve(a, subset=(17, 19))
    assert len(top) == 3
    np.testing.assert_allclose(top.values, eigensolve(a).highest(3).values, atol=1e-10)


def test_non_convergence_is_numerical_error():
    with pytest.raises(NumericalError) as exc:
        jacobi_eigen(SymmetricMatrix(_random_symmetric(10, seed=1)), tol=1e-30, max_sweeps=1)
    assert exc.value.code == "non_convergence"
    assert exc.value.exit_code == 3


def test_tridiagonal_matches_dense():
    d = np.linspace(1.0, 2.0, 50)
    e = np.full(49, -0.3)
    dense = SymmetricMatrix(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    np.testing.assert_allclose(
        tridiagonal_eigen(d, e, 4).values, eigensolve(dense).lowest(4).values, atol=1e-12
    )


def test_spectral_exp_cases():
    h = SymmetricMatrix(_random_symmetric(5, seed=9))
    np.testing.assert_allclose(spectral_exp(h, 0.0), np.eye(5), atol=1e-12)
    np.testing.assert_allclose(spectral_exp(SymmetricMatrix([[np.pi]]), -1j), [[-1.0]],
                               atol=1e-15)
    t = 0.7
    forward, backward = spectral_exp(h, -1j * t), spectral_exp(h, 1j * t)
    np.testing.assert_allclose(forward @ backward, np.eye(5), atol=1e-10)


def test_spectral_exp_group_property():
    h = SymmetricMatrix(_random_symmetric(8, seed=4))
    combined = spectral_exp(h, -1j * 0.3) @ spectral_exp(h, -1j * 1.1)
    np.testing.assert_allclose(combined, spectral_exp(h, -1j * 1.4), atol=1e-9)


def test_commutator_algebra():
    a = HermitianMatrix(SIGMA_X)
    assert np.all(commutator(a, a) == 0)
    assert np.all(commutator(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])) == 0)
    np.testing.assert_allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z, atol=1e-15)
    rng = np.random.default_rng(2)
    x, y = rng.standard_normal((4, 4)), rng.standard_normal((4, 4))
    assert np.max(np.abs(commutator(x, y) + commutator(y, x))) <= 1e-14
    with pytest.raises(DomainError):
        commutator(np.eye(2), np.eye(3))
