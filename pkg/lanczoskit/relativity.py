"""Static spherically symmetric fields: the static-condition motion law and geodesics.

Geometric units G = c = 1. Coordinates are Cartesian ``(x, y, z)`` at indices
0..2 and the time coordinate ``x4 = t`` at index 3. The spatial metric uses the
areal radius ``r = |x|``::

    g_44 = g44(r),  g_ij = delta_ij + (grr(r) - 1) n_i n_j,  n = x / r

so flat space has vanishing connection coefficients.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.integrate

from lanczoskit.config import settings
from lanczoskit.errors import DomainError, domain_error, trajectory_crossed
from lanczoskit.observability import increment

Law = Literal["lanczos-static", "full-geodesic"]
RadialMap = Callable[[float], float]

T = 3
DIVERGENCE_THRESHOLDS = (1e-8, 1e-6, 1e-4)
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class StaticMetric:
    label: str
    M: float
    g44: RadialMap = field(repr=False)
    grr: RadialMap = field(repr=False)
    dg44: RadialMap = field(repr=False)
    dgrr: RadialMap = field(repr=False)
    r_min: float = 0.0


def schwarzschild(M: float, margin: float | None = None) -> StaticMetric:
    if M < 0.0:
        raise domain_error("negative_mass", f"Central mass must be non-negative, got {M}")
    margin = settings.r_min_margin if margin is None else margin
    return StaticMetric(
        label=f"schwarzschild(M={M:g})",
        M=M,
        g44=lambda r: -(1.0 - 2.0 * M / r),
        grr=lambda r: 1.0 / (1.0 - 2.0 * M / r),
        dg44=lambda r: -2.0 * M / r**2,
        dgrr=lambda r: -2.0 * M / (r**2 * (1.0 - 2.0 * M / r) ** 2),
        r_min=2.0 * M * (1.0 + margin),
    )


def flat() -> StaticMetric:
    return StaticMetric(
        label="flat",
        M=0.0,
        g44=lambda r: -1.0,
        grr=lambda r: 1.0,
        dg44=lambda r: 0.0,
        dgrr=lambda r: 0.0,
    )


def _as_point(point: float | Sequence[float] | np.ndarray) -> np.ndarray:
    if np.ndim(point) == 0:
        return np.array([float(point), 0.0, 0.0])
    xi = np.asarray(point, dtype=float)
    if xi.shape != (3,):
        raise domain_error("bad_point", f"Expected a 3-vector, got shape {xi.shape}")
    return xi


def _radial(metric: StaticMetric, xi: np.ndarray) -> tuple[float, np.ndarray]:
    r = float(np.linalg.norm(xi))
    if r <= metric.r_min or r == 0.0:
        raise domain_error(
            "inside_r_min",
            f"Radius {r:.6g} is not above r_min={metric.r_min:.6g}",
            {"r": r, "r_min": metric.r_min},
        )
    return r, xi / r


def metric_tensor(metric: StaticMetric, point: float | Sequence[float] | np.ndarray) -> np.ndarray:
    r, n = _radial(metric, _as_point(point))
    g = np.zeros((4, 4))
    g[:3, :3] = np.eye(3) + (metric.grr(r) - 1.0) * np.outer(n, n)
    g[T, T] = metric.g44(r)
    return g


@dataclass(frozen=True)
class Christoffel:
    """``components[mu, alpha, beta]`` = Gamma^mu_{alpha beta} at ``point``."""

    point: np.ndarray
    components: np.ndarray = field(repr=False)

    def __call__(self, upper: int, lower1: int, lower2: int) -> float:
        return float(self.components[upper, lower1, lower2])


def christoffel(metric: StaticMetric, point: float | Sequence[float] | np.ndarray) -> Christoffel:
    """Connection coefficients from the analytic metric derivatives.

    A scalar ``point`` is read as the radius on the +x axis, where
    ``Gamma^x_44`` is the radial component.
    """
    xi = _as_point(point)
    r, n = _radial(metric, xi)
    a, da = metric.g44(r), metric.dg44(r)
    b, db = metric.grr(r), metric.dgrr(r)
    f = b - 1.0
    eye = np.eye(3)
    nnn = np.einsum("k,i,j->kij", n, n, n)
    # dg[k, i, j] = d_k g_ij
    dg = db * nnn + (f / r) * (
        np.einsum("ki,j->kij", eye, n) + np.einsum("i,kj->kij", n, eye) - 2.0 * nnn
    )
    g_inv = eye + (1.0 / b - 1.0) * np.outer(n, n)
    lowered = np.einsum("jlk->ljk", dg) + np.einsum("klj->ljk", dg) - dg
    gamma = np.zeros((4, 4, 4))
    gamma[:3, :3, :3] = 0.5 * np.einsum("il,ljk->ijk", g_inv, lowered)
    gamma[:3, T, T] = -0.5 * da * n / b
    gamma[T, T, :3] = 0.5 * da * n / a
    gamma[T, :3, T] = gamma[T, T, :3]
    increment("relativity.christoffel.evaluations")
    return Christoffel(xi, gamma)


def lanczos_static_rhs(metric: StaticMetric, xi: Sequence[float] | np.ndarray) -> np.ndarray:
    """``d^2 xi^i / dx4^2 = -Gamma^i_44`` of the external field. No mass enters."""
    return -christoffel(metric, np.asarray(xi, dtype=float)).components[:3, T, T]


def geodesic_coordinate_acceleration(
    metric: StaticMetric, xi: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray
) -> np.ndarray:
    """Geodesic equation with x4 as parameter; ``v = dxi/dx4``."""
    gamma = christoffel(metric, np.asarray(xi, dtype=float)).components
    big_v = np.append(np.asarray(v, dtype=float), 1.0)
    quad = np.einsum("mab,a,b->m", gamma, big_v, big_v)
    return -quad[:3] + quad[T] * big_v[:3]


@dataclass(frozen=True)
class Trajectory:
    law: Law
    x4: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)
    dxi_dx4: np.ndarray = field(repr=False)
    mass_tag: float | None = None
    tau: np.ndarray | None = field(default=None, repr=False)
    four_velocity: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.x4)

    @property
    def radius(self) -> np.ndarray:
        return np.linalg.norm(self.xi, axis=1)

    def rows(self) -> list[tuple]:
        tag = math.nan if self.mass_tag is None else self.mass_tag
        return [
            (t, *x, *v, self.law, tag)
            for t, x, v in zip(self.x4.tolist(), self.xi.tolist(), self.dxi_dx4.tolist(),
                               strict=True)
        ]


def _rk4(
    rhs: Callable[[np.ndarray], np.ndarray],
    state0: np.ndarray,
    dt: float,
    steps: int,
    metric: StaticMetric,
) -> np.ndarray:
    """Fixed-step RK4; the first three state components are the spatial position."""
    states = np.empty((steps + 1, state0.size))
    states[0] = state0
    for step in range(1, steps + 1):
        y = states[step - 1]
        try:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
        except DomainError as exc:
            if exc.code != "inside_r_min":
                raise
            raise trajectory_crossed(step, exc.details["r"], metric.r_min) from exc
        states[step] = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        radius = float(np.linalg.norm(states[step, :3]))
        if radius <= metric.r_min:
            raise trajectory_crossed(step, radius, metric.r_min)
    increment("relativity.rk4.steps", steps)
    return states


def _check_run(end: float, steps: int) -> None:
    if not end > 0.0:
        raise domain_error("bad_horizon", f"Integration end must be positive, got {end}")
    if steps < 10:
        raise domain_error("too_few_steps", f"steps must be >= 10, got {steps}")


def integrate_lanczos(
    metric: StaticMetric,
    xi0: Sequence[float] | np.ndarray,
    v0: Sequence[float] | np.ndarray,
    x4_end: float,
    steps: int,
    mass_tag: float,
    allow_nonstatic: bool = False,
) -> Trajectory:
    """Integrate ``d^2 xi/dx4^2 = -Gamma^i_44``. ``mass_tag`` is recorded, never used."""
    _check_run(x4_end, steps)
    xi0 = _as_point(xi0)
    v0 = np.asarray(v0, dtype=float)
    _radial(metric, xi0)
    if np.any(v0 != 0.0) and not allow_nonstatic:
        raise domain_error(
            "nonstatic_initial_velocity",
            "The static-condition law applies to a particle initially at rest; "
            "pass allow_nonstatic to start it from a nonzero velocity",
            {"v0": v0.tolist()},
        )

    def rhs(y: np.ndarray) -> np.ndarray:
        return np.concatenate((y[3:], lanczos_static_rhs(metric, y[:3])))

    dt = x4_end / steps
    states = _rk4(rhs, np.concatenate((xi0, v0)), dt, steps, metric)
    return Trajectory(
        law="lanczos-static",
        x4=dt * np.arange(steps + 1),
        xi=states[:, :3],
        dxi_dx4=states[:, 3:],
        mass_tag=mass_tag,
    )


def _normalization(metric: StaticMetric, xi: np.ndarray, u: np.ndarray) -> float:
    g = metric_tensor(metric, xi)
    return float(u @ g @ u)


def rest_four_velocity(metric: StaticMetric, xi: Sequence[float] | np.ndarray) -> np.ndarray:
    r, _ = _radial(metric, _as_point(xi))
    return np.array([0.0, 0.0, 0.0, 1.0 / math.sqrt(-metric.g44(r))])


def circular_four_velocity(metric: StaticMetric, r: float) -> np.ndarray:
    """Four-velocity at (r, 0, 0) on the circular orbit in the x-y plane.

    The angular velocity follows from ``dphi/dt = sqrt(-g44'(r) / (2 r))``, which is
    ``sqrt(M / r^3)`` for Schwarzschild.
    """
    _radial(metric, _as_point(r))
    omega2 = -metric.dg44(r) / (2.0 * r)
    denom = -metric.g44(r) - r * r * omega2
    if omega2 <= 0.0 or denom <= 0.0:
        raise domain_error("no_circular_orbit", f"No timelike circular orbit at r={r:g}")
    ut = 1.0 / math.sqrt(denom)
    return np.array([0.0, r * math.sqrt(omega2) * ut, 0.0, ut])


def integrate_full_geodesic(
    metric: StaticMetric,
    xi0: Sequence[float] | np.ndarray,
    u0: Sequence[float] | np.ndarray,
    tau_end: float,
    steps: int,
) -> Trajectory:
    """RK4 in proper time for ``d^2 x^mu/dtau^2 = -Gamma^mu_ab u^a u^b``.

    ``u0`` is ordered ``(u^x, u^y, u^z, u^t)``.
    """
    _check_run(tau_end, steps)
    xi0 = _as_point(xi0)
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (4,):
        raise domain_error("bad_four_velocity", f"Expected a 4-vector, got shape {u0.shape}")
    _radial(metric, xi0)
    norm2 = _normalization(metric, xi0, u0)
    if abs(norm2 + 1.0) > NORMALIZATION_TOL or u0[T] <= 0.0:
        raise domain_error(
            "not_normalized",
            f"Four-velocity must be future-pointing with g(u, u) = -1, got {norm2:.12g}",
            {"norm2": norm2},
        )

    def rhs(y: np.ndarray) -> np.ndarray:
        gamma = christoffel(metric, y[:3]).components
        u = y[4:]
        return np.concatenate((u, -np.einsum("mab,a,b->m", gamma, u, u)))

    state0 = np.concatenate((xi0, [0.0], u0))
    dtau = tau_end / steps
    states = _rk4(rhs, state0, dtau, steps, metric)
    u = states[:, 4:]
    return Trajectory(
        law="full-geodesic",
        x4=states[:, T],
        xi=states[:, :3],
        dxi_dx4=u[:, :3] / u[:, T:],
        tau=dtau * np.arange(steps + 1),
        four_velocity=u,
    )


def integrate_geodesic_coordinate_time(
    metric: StaticMetric,
    xi0: Sequence[float] | np.ndarray,
    v0: Sequence[float] | np.ndarray,
    x4_end: float,
    steps: int,
) -> Trajectory:
    """The geodesic with x4 as parameter, on the same grid as ``integrate_lanczos``."""
    _check_run(x4_end, steps)
    xi0 = _as_point(xi0)
    _radial(metric, xi0)

    def rhs(y: np.ndarray) -> np.ndarray:
        return np.concatenate((y[3:], geodesic_coordinate_acceleration(metric, y[:3], y[3:])))

    dt = x4_end / steps
    states = _rk4(rhs, np.concatenate((xi0, np.asarray(v0, dtype=float))), dt, steps, metric)
    return Trajectory(
        law="full-geodesic", x4=dt * np.arange(steps + 1), xi=states[:, :3],
        dxi_dx4=states[:, 3:],
    )


def conserved_quantities(
    metric: StaticMetric, trajectory: Trajectory
) -> tuple[np.ndarray, np.ndarray]:
    """Energy ``E = -g44 u^t`` and angular momentum ``L_z = x u^y - y u^x``."""
    if trajectory.four_velocity is None:
        raise domain_error("no_four_velocity", "Conserved quantities need a proper-time run")
    u = trajectory.four_velocity
    g44 = np.array([metric.g44(r) for r in trajectory.radius])
    energy = -g44 * u[:, T]
    x, y = trajectory.xi[:, 0], trajectory.xi[:, 1]
    return energy, x * u[:, 1] - y * u[:, 0]


@dataclass(frozen=True)
class DivergenceReport:
    x4: np.ndarray = field(repr=False)
    abs_divergence: np.ndarray = field(repr=False)
    first_exceeding: dict[float, float | None]
    initial_acceleration_gap: float
    lanczos: Trajectory = field(repr=False)
    geodesic: Trajectory = field(repr=False)

    @property
    def max_divergence(self) -> float:
        return float(np.max(self.abs_divergence))

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.x4.tolist(), self.abs_divergence.tolist(), strict=True))


def compare_motion_laws(
    metric: StaticMetric,
    xi0: Sequence[float] | np.ndarray,
    horizon: float,
    steps: int,
) -> DivergenceReport:
    """Run both laws from rest on one x4 grid and measure how far they drift apart.

    Agreement is exact only at the rest instant; later divergence is the
    expected breakdown of the static condition.
    """
    xi0 = _as_point(xi0)
    rest = np.zeros(3)
    lanczos = integrate_lanczos(metric, xi0, rest, horizon, steps, mass_tag=math.nan)
    geodesic = integrate_geodesic_coordinate_time(metric, xi0, rest, horizon, steps)
    divergence = np.linalg.norm(lanczos.xi - geodesic.xi, axis=1)
    first = {}
    for threshold in DIVERGENCE_THRESHOLDS:
        above = np.nonzero(divergence > threshold)[0]
        first[threshold] = float(lanczos.x4[above[0]]) if above.size else None
    gap = float(
        np.max(
            np.abs(
                lanczos_static_rhs(metric, xi0)
                - geodesic_coordinate_acceleration(metric, xi0, rest)
            )
        )
    )
    return DivergenceReport(lanczos.x4, divergence, first, gap, lanczos, geodesic)


@dataclass(frozen=True)
class RadialPotential:
    r: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    dphi_dr: np.ndarray = field(repr=False)
    enclosed_mass: np.ndarray = field(repr=False)
    total_mass: float

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.r.tolist(), self.phi.tolist(), self.dphi_dr.tolist(), strict=True))


def uniform_ball_density(M: float, R: float) -> RadialMap:
    rho0 = 3.0 * M / (4.0 * math.pi * R**3)
    return lambda r: rho0 if r <= R else 0.0


def _quad(fn: RadialMap, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    value, _ = scipy.integrate.quad(fn, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)
    return value


class _RadialPoisson:
    """Newtonian potential of a spherical body with ``laplacian(phi) = 4 pi rho``."""

    def __init__(self, density: RadialMap, R: float):
        self.density = density
        self.R = R
        self.total_mass = self.mass(R)

    def mass(self, r: float) -> float:
        return 4.0 * math.pi * _quad(lambda s: self.density(s) * s * s, 0.0, min(r, self.R))

    def interior(self, r: float) -> tuple[float, float, float]:
        m = self.mass(r)
        tail = 4.0 * math.pi * _quad(lambda s: self.density(s) * s, r, self.R)
        if r == 0.0:
            return -tail, 0.0, 0.0
        return -m / r - tail, m / r**2, m

    def exterior(self, r: float) -> tuple[float, float, float]:
        return -self.total_mass / r, self.total_mass / r**2, self.total_mass

    def __call__(self, r: float) -> tuple[float, float, float]:
        return self.interior(r) if r < self.R else self.exterior(r)


def _check_density(density: RadialMap, R: float) -> None:
    if not R > 0.0:
        raise domain_error("bad_radius", f"Body radius must be positive, got {R}")
    radii = np.linspace(0.0, R, 513)
    values = np.array([density(float(s)) for s in radii])
    if np.any(values < 0.0):
        where = float(radii[np.argmax(values < 0.0)])
        raise domain_error(
            "negative_density", f"Density is negative at r={where:g}", {"r": where}
        )


def poisson_radial(
    density: RadialMap, R: float, r_samples: Sequence[float] | np.ndarray
) -> RadialPotential:
    """Potential inside (Poisson) and outside (Laplace, ``-M/r``) a body of radius R."""
    _check_density(density, R)
    solver = _RadialPoisson(density, R)
    r = np.asarray(r_samples, dtype=float)
    if np.any(r < 0.0):
        raise domain_error("bad_radius", "Sample radii must be non-negative")
    values = np.array([solver(float(s)) for s in r]).reshape(-1, 3)
    return RadialPotential(r, values[:, 0], values[:, 1], values[:, 2], solver.total_mass)


def matching_gaps(density: RadialMap, R: float) -> tuple[float, float]:
    """Relative jumps of phi and dphi/dr across the surface r = R."""
    _check_density(density, R)
    solver = _RadialPoisson(density, R)
    phi_in, dphi_in, _ = solver.interior(R)
    phi_out, dphi_out, _ = solver.exterior(R)
    scale_phi = max(abs(phi_out), np.finfo(float).tiny)
    scale_dphi = max(abs(dphi_out), np.finfo(float).tiny)
    return abs(phi_in - phi_out) / scale_phi, abs(dphi_in - dphi_out) / scale_dphi
