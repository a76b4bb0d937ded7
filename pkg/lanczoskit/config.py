from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    jacobi_tol: float = 1e-12
    jacobi_max_sweeps: int = 100
    # Dense Jacobi at or below this dimension, LAPACK above.
    jacobi_max_dim: int = 512
    sign_threshold: float = 1e-8
    symmetry_tol: float = 1e-10
    hermitian_tol: float = 1e-10
    singular_tol: float = 1e-12
    r_min_margin: float = 0.5
    csv_digits: int = 17
    manifest_name: str = "manifest.json"


settings = Settings()
