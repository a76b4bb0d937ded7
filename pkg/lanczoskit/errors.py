from __future__ import annotations

from typing import Any

EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class LanczosKitError(Exception):
    exit_code = EXIT_CONFIG

    def __init__(self, code: str, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    def as_dict(self) -> dict[str, Any]:
        return {"error": {"code": self.code, "message": self.message, "details": self.details}}


class DomainError(LanczosKitError):
    """An operation was called outside its preconditions."""


class ConfigError(LanczosKitError):
    pass


class NumericalError(LanczosKitError):
    exit_code = EXIT_NUMERICAL


def domain_error(code: str, message: str, details: dict[str, Any] | None = None) -> DomainError:
    return DomainError(code, message, details)


def dimension_mismatch(left: int, right: int) -> DomainError:
    return domain_error(
        "dimension_mismatch",
        f"Operand dimensions differ: {left} != {right}",
        {"left": left, "right": right},
    )


def grid_mismatch(left: Any, right: Any) -> DomainError:
    return domain_error(
        "grid_mismatch",
        "Operands are defined on different grids",
        {"left": repr(left), "right": repr(right)},
    )


def non_convergence(sweeps: int, off_norm: float, target: float) -> NumericalError:
    return NumericalError(
        "non_convergence",
        f"Jacobi iteration did not converge within {sweeps} sweeps",
        {"sweeps": sweeps, "off_norm": off_norm, "target": target},
    )


def singular_hamiltonian(min_eigenvalue: float, threshold: float) -> NumericalError:
    return NumericalError(
        "singular_hamiltonian",
        "Hamiltonian is not positive definite; its Green's kernel does not exist",
        {"min_eigenvalue": min_eigenvalue, "threshold": threshold},
    )


def trajectory_crossed(step: int, radius: float, r_min: float) -> NumericalError:
    return NumericalError(
        "trajectory_crossed_r_min",
        f"Trajectory reached r={radius:.6g} <= r_min={r_min:.6g} at step {step}",
        {"step": step, "radius": radius, "r_min": r_min},
    )


def config_error(key: str, message: str, details: dict[str, Any] | None = None) -> ConfigError:
    return ConfigError("invalid_config", f"{key}: {message}", {"key": key, **(details or {})})


def parse_error(line_no: int, message: str) -> ConfigError:
    return ConfigError("parse_error", f"line {line_no}: {message}", {"line": line_no})


def linalg_failure(message: str) -> NumericalError:
    return NumericalError("linalg_failure", f"Linear algebra backend failed: {message}")


def output_error(path: Any, reason: str) -> ConfigError:
    return config_error("--out", f"cannot write results under {path}: {reason}")
