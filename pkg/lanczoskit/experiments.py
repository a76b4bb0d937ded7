"""Experiment runners behind the CLI subcommands and the ``verify-all`` battery.

Every runner writes its tables through a ``ResultStorage`` and returns the
certificates it measured; nothing here prints or decides exit codes.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from lanczoskit import lanczos_kernel as lk
from lanczoskit import pictures as pic
from lanczoskit import relativity as rel
from lanczoskit.config import settings
from lanczoskit.errors import config_error
from lanczoskit.numgrid import QuadratureWeights, make_grid, norm, trapezoid_weights
from lanczoskit.observability import timed
from lanczoskit.schemas import GridSection, PotentialSection, RunConfig
from lanczoskit.schrodinger import (
    Hamiltonian,
    analytic_levels,
    assemble_hamiltonian,
    potential_from_name,
    solve_spectrum,
)
from lanczoskit.storage import ResultStorage, csv_bytes

ORDER2_RATIO_BAND = (3.5, 4.5)
RK4_RATIO_BAND = (12.0, 20.0)
REST_GAP_BOUND = 1e-10
UNITARITY_BOUND = 1e-10
ENERGY_DRIFT_BOUND = 1e-8
ORBIT_DRIFT_BOUND = 1e-6
RESIDUAL_BOUND = 1e-9

TRAJECTORY_HEADER = ("x4", "x", "y", "z", "vx", "vy", "vz", "law", "mass_tag")
RECIPROCITY_HEADER = ("index", "E", "mu", "product", "abs_dev")
PICTURES_HEADER = ("t", "expect_schrodinger", "expect_heisenberg", "abs_diff")
POISSON_HEADER = ("r", "phi", "dphi_dr", "phi_exact", "abs_err")


@dataclass(frozen=True)
class Certificate:
    name: str
    passed: bool
    measured: float
    bound: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status} measured={self.measured:.6e} bound={self.bound}"

    def as_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": format(self.measured, ".17g"),
            "bound": self.bound,
        }


def at_most(name: str, measured: float, bound: float) -> Certificate:
    return Certificate(name, bool(measured <= bound), float(measured), format(bound, "g"))


def within(name: str, measured: float, band: tuple[float, float]) -> Certificate:
    lo, hi = band
    return Certificate(name, bool(lo <= measured <= hi), float(measured), f"[{lo:g},{hi:g}]")


def above(name: str, measured: float, bound: float) -> Certificate:
    return Certificate(name, bool(measured > bound), float(measured), f">{bound:g}")


@dataclass
class ExperimentResult:
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)

    def add(self, certificate: Certificate) -> None:
        self.certificates.append(certificate)

    def extend(self, other: ExperimentResult) -> None:
        self.certificates.extend(other.certificates)


def _setup(
    grid_cfg: GridSection, pot_cfg: PotentialSection
) -> tuple[Hamiltonian, QuadratureWeights]:
    grid = make_grid(grid_cfg.a, grid_cfg.b, grid_cfg.n)
    potential = potential_from_name(pot_cfg.name, grid, c=pot_cfg.c, x0=pot_cfg.x0, s=pot_cfg.s)
    return assemble_hamiltonian(grid, potential), trapezoid_weights(grid)


def _kernel(h: Hamiltonian, weights: QuadratureWeights, origin: str) -> lk.Kernel:
    if origin == "analytic":
        if np.any(h.potential_values != 0.0):
            raise config_error("kernel.origin", "the analytic kernel requires potential 'zero'")
        return lk.kernel_analytic_free(h.grid, weights)
    return lk.kernel_from_inverse(h, weights)


# -- spectrum ---------------------------------------------------------------


def spectrum_checks(
    grid_cfg: GridSection, pot_cfg: PotentialSection, k: int, rel_tol: float, prefix: str = ""
) -> tuple[ExperimentResult, list[tuple]]:
    h, _ = _setup(grid_cfg, pot_cfg)
    spectrum = solve_spectrum(h, k)
    values = np.asarray(spectrum.values)
    reference = analytic_levels(pot_cfg.name, h.grid, k)
    ref = reference if reference is not None else np.full(k, math.nan)
    rel_err = np.abs(values - ref) / np.abs(ref)
    rows = [
        (i, float(e), float(r), float(d))
        for i, (e, r, d) in enumerate(zip(values, ref, rel_err, strict=True), start=1)
    ]
    result = ExperimentResult()
    scale = max(1.0, float(np.max(np.abs(h.diagonal))))
    if h.dim <= settings.jacobi_max_dim:
        result.add(at_most(f"{prefix}spectrum-residual", spectrum.residual(h.matrix) / scale,
                           RESIDUAL_BOUND))
    if np.all(h.potential_values >= 0.0):
        result.add(above(f"{prefix}spectrum-positive", float(values[0]), 0.0))
    if reference is not None:
        result.add(at_most(f"{prefix}spectrum-reference", float(np.max(rel_err)), rel_tol))
    return result, rows


def run_spectrum(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    result, rows = spectrum_checks(cfg.grid, cfg.potential, cfg.spectrum.k, cfg.spectrum.rel_tol)
    storage.write_table("spectrum", ("index", "E", "E_reference", "rel_error"), rows)
    return result


# -- kernel and reciprocity -------------------------------------------------


def run_kernel(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    h, weights = _setup(cfg.grid, cfg.potential)
    kernel = _kernel(h, weights, cfg.kernel.origin)
    mus = np.asarray(lk.kernel_spectrum(kernel, cfg.kernel.k).values)[::-1]
    storage.write_table(
        "kernel_spectrum", ("index", "mu"), [(i, float(mu)) for i, mu in enumerate(mus, start=1)]
    )
    nystrom = lk.nystrom_matrix(kernel).entries
    result = ExperimentResult()
    result.add(at_most("kernel-symmetric", float(np.max(np.abs(nystrom - nystrom.T))), 0.0))
    if np.all(h.potential_values >= 0.0):
        result.add(above("kernel-positive", float(mus[-1]), 0.0))
    if kernel.origin == "discrete-inverse":
        result.add(at_most("kernel-inverse", lk.inverse_residual(h, kernel), cfg.kernel.bound))
    return result


def reciprocity_report(
    grid_cfg: GridSection, pot_cfg: PotentialSection, origin: str, k: int
) -> lk.ReciprocityReport:
    h, weights = _setup(grid_cfg, pot_cfg)
    return lk.certify_reciprocity(h, _kernel(h, weights, origin), k)


def run_reciprocity(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    report = reciprocity_report(cfg.grid, cfg.potential, cfg.kernel.origin, cfg.kernel.k)
    storage.write_table("reciprocity", RECIPROCITY_HEADER, lk.reciprocity_rows(report))
    result = ExperimentResult()
    if report.origin == "discrete-inverse":
        result.add(at_most("reciprocity", report.max_abs_deviation, cfg.kernel.bound))
        return result
    assert report.discrete_deviation is not None
    result.add(at_most("reciprocity-discrete", report.discrete_deviation, cfg.kernel.bound))
    finer = cfg.grid.model_copy(update={"n": 2 * cfg.grid.n + 1})
    fine = reciprocity_report(finer, cfg.potential, "analytic", cfg.kernel.k)
    result.add(
        within(
            "reciprocity-convergence",
            report.max_abs_deviation / fine.max_abs_deviation,
            ORDER2_RATIO_BAND,
        )
    )
    return result


# -- pictures ---------------------------------------------------------------

_OBSERVABLES: dict[str, Callable[[Hamiltonian], pic.Observable]] = {
    "position": lambda h: pic.position_observable(h.grid),
    "momentum": lambda h: pic.momentum_observable(h.grid),
    "hamiltonian": pic.hamiltonian_observable,
}


def picture_checks(
    h: Hamiltonian,
    weights: QuadratureWeights,
    observable: str,
    shift: float,
    times: np.ndarray,
    bound: float,
    prefix: str = "",
) -> tuple[ExperimentResult, list[pic.PictureSample]]:
    prop = pic.Propagator(h)
    o = _OBSERVABLES[observable](h)
    psi0 = pic.displaced_ground_state(h, weights, shift, prop)
    samples = pic.picture_series(h, o, psi0, weights, times, prop)
    result = ExperimentResult()
    result.add(at_most(f"{prefix}picture-equivalence", max(s.abs_diff for s in samples), bound))
    final = prop.evolve(psi0, float(times[-1]))
    result.add(at_most(f"{prefix}unitarity", abs(norm(weights, final.psi) - 1.0),
                       UNITARITY_BOUND))
    if observable == "hamiltonian":
        energies = np.array([s.expect_schrodinger for s in samples])
        drift = float(np.max(np.abs(energies - energies[0]))) / max(1.0, abs(energies[0]))
        result.add(at_most(f"{prefix}energy-conservation", drift, ENERGY_DRIFT_BOUND))
    else:
        dt = pic.default_derivative_step(h)
        t_mid = 0.5 * float(times[-1])
        coarse = pic.verify_heisenberg_derivative(h, o, t_mid, dt, prop)
        fine = pic.verify_heisenberg_derivative(h, o, t_mid, 0.5 * dt, prop)
        result.add(within(f"{prefix}heisenberg-derivative-order", coarse / fine,
                          ORDER2_RATIO_BAND))
    return result, samples


def picture_rows(samples: list[pic.PictureSample]) -> list[tuple[float, float, float, float]]:
    return [(s.t, s.expect_schrodinger, s.expect_heisenberg, s.abs_diff) for s in samples]


def run_pictures(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    h, weights = _setup(cfg.grid, cfg.potential)
    times = np.linspace(0.0, cfg.time.t_end, cfg.time.points)
    result, samples = picture_checks(
        h, weights, cfg.time.observable, cfg.time.shift, times, cfg.time.bound
    )
    storage.write_table("pictures", PICTURES_HEADER, picture_rows(samples))
    return result


# -- geodesics --------------------------------------------------------------


def kinematic_bytes(trajectory: rel.Trajectory) -> bytes:
    """Trajectory CSV without the mass column, the part mass independence compares."""
    return csv_bytes(TRAJECTORY_HEADER[:-1], [row[:-1] for row in trajectory.rows()])


def proper_time_rest_acceleration(metric: rel.StaticMetric, r0: float) -> np.ndarray:
    """Initial ``d^2 xi/dx4^2`` of a proper-time geodesic released from rest at (r0, 0, 0)."""
    xi = np.array([r0, 0.0, 0.0])
    u = rel.rest_four_velocity(metric, xi)
    gamma = rel.christoffel(metric, xi).components
    du = -np.einsum("mab,a,b->m", gamma, u, u)
    return (du[:3] - (u[:3] / u[rel.T]) * du[rel.T]) / u[rel.T] ** 2


def rest_instant_gap(metric: rel.StaticMetric, r0: float) -> float:
    lanczos = rel.lanczos_static_rhs(metric, [r0, 0.0, 0.0])
    return float(np.max(np.abs(proper_time_rest_acceleration(metric, r0) - lanczos)))


def newtonian_gap(metric: rel.StaticMetric, r0: float) -> float:
    """Relative gap between ``|Gamma^i_44|`` and ``M / r0^2``."""
    accel = float(np.linalg.norm(rel.lanczos_static_rhs(metric, [r0, 0.0, 0.0])))
    newton = metric.M / r0**2
    return abs(accel - newton) / newton


def run_geodesic(
    cfg: RunConfig, storage: ResultStorage, allow_nonstatic: bool = False
) -> ExperimentResult:
    m = cfg.metric
    metric = rel.schwarzschild(m.M, m.margin)
    xi0 = np.array([m.r0, 0.0, 0.0])
    v0 = np.asarray(m.v0, dtype=float)

    def lanczos_run(mass_tag: float) -> rel.Trajectory:
        return rel.integrate_lanczos(
            metric, xi0, v0, m.horizon, m.steps, mass_tag, allow_nonstatic=allow_nonstatic
        )

    lanczos = lanczos_run(m.mass_tag)
    heavy = lanczos_run(m.mass_tag * 1e6 + 1.0)
    storage.write_table("trajectory_lanczos", TRAJECTORY_HEADER, lanczos.rows())
    result = ExperimentResult()
    identical = kinematic_bytes(lanczos) == kinematic_bytes(heavy)
    result.add(at_most("mass-independence", 0.0 if identical else 1.0, 0.0))
    if m.M > 0.0:
        result.add(at_most("rest-instant", rest_instant_gap(metric, m.r0), REST_GAP_BOUND))
        result.add(at_most("newtonian-limit", newtonian_gap(metric, m.r0), 3.0 * m.M / m.r0))
    if np.any(v0 != 0.0):
        return result

    u0 = rel.rest_four_velocity(metric, xi0)
    tau_end = m.horizon * math.sqrt(-metric.g44(m.r0))
    geodesic = rel.integrate_full_geodesic(metric, xi0, u0, tau_end, m.steps)
    storage.write_table("trajectory_geodesic", TRAJECTORY_HEADER, geodesic.rows())
    energy, _ = rel.conserved_quantities(metric, geodesic)
    result.add(
        at_most("geodesic-energy-drift", float(np.max(np.abs(energy / energy[0] - 1.0))),
                ENERGY_DRIFT_BOUND)
    )
    report = rel.compare_motion_laws(metric, xi0, m.horizon, m.steps)
    storage.write_table("divergence", ("x4", "abs_divergence"), report.rows())
    storage.write_table(
        "divergence_thresholds",
        ("threshold", "first_x4"),
        [
            (threshold, math.nan if x4 is None else x4)
            for threshold, x4 in sorted(report.first_exceeding.items())
        ],
    )
    result.add(at_most("rest-acceleration-gap", report.initial_acceleration_gap,
                       REST_GAP_BOUND))
    # Below ~1e-12 the divergence is rounding noise and need not grow.
    resolved = report.abs_divergence[report.abs_divergence > 1e-12]
    drops = int(np.sum(np.diff(resolved) < 0.0))
    result.add(at_most("divergence-monotone", float(drops), 0.0))
    return result


def circular_orbit_drift(
    metric: rel.StaticMetric, r: float, steps: int
) -> tuple[float, float, float]:
    """Relative drifts of radius, E and L over one proper-time period of a circular orbit."""
    u0 = rel.circular_four_velocity(metric, r)
    omega = u0[1] / (r * u0[rel.T])
    tau_period = 2.0 * math.pi / omega / u0[rel.T]
    orbit = rel.integrate_full_geodesic(metric, [r, 0.0, 0.0], u0, tau_period, steps)
    energy, angular = rel.conserved_quantities(metric, orbit)
    return (
        float(np.max(np.abs(orbit.radius / r - 1.0))),
        float(np.max(np.abs(energy / energy[0] - 1.0))),
        float(np.max(np.abs(angular / angular[0] - 1.0))),
    )


def rk4_error_ratio(
    metric: rel.StaticMetric,
    r0: float,
    horizon: float,
    steps: int,
    law: rel.Law = "full-geodesic",
) -> float:
    """Endpoint error at ``steps`` over error at ``2 * steps``, against a 64x finer run.

    Both laws start at rest at ``r0``; the geodesic runs for the proper time
    that corresponds to ``horizon`` units of x4 at the start.
    """
    xi0, rest = [r0, 0.0, 0.0], [0.0, 0.0, 0.0]
    u0 = rel.rest_four_velocity(metric, xi0)
    tau_end = horizon * math.sqrt(-metric.g44(r0))

    def endpoint(n: int) -> np.ndarray:
        if law == "full-geodesic":
            return rel.integrate_full_geodesic(metric, xi0, u0, tau_end, n).xi[-1]
        return rel.integrate_lanczos(metric, xi0, rest, horizon, n, mass_tag=0.0).xi[-1]

    reference = endpoint(64 * steps)
    coarse = float(np.linalg.norm(endpoint(steps) - reference))
    fine = float(np.linalg.norm(endpoint(2 * steps) - reference))
    return coarse / fine


# -- Poisson ----------------------------------------------------------------


def uniform_ball_exact(M: float, R: float, r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    inside = -M * (3.0 * R**2 - r**2) / (2.0 * R**3)
    outside = -M / np.where(r > 0.0, r, 1.0)
    return np.where(r < R, inside, outside)


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    scale = np.maximum(np.abs(b), np.finfo(float).tiny)
    return float(np.max(np.abs(a - b) / scale))


def run_poisson(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    p = cfg.poisson
    density = rel.uniform_ball_density(p.M, p.R)
    samples = np.asarray(p.samples, dtype=float)
    solution = rel.poisson_radial(density, p.R, samples)
    exact = uniform_ball_exact(p.M, p.R, samples)
    storage.write_table(
        "poisson",
        POISSON_HEADER,
        [
            (r, f, d, float(e), abs(f - float(e)))
            for (r, f, d), e in zip(solution.rows(), exact, strict=True)
        ],
    )
    result = ExperimentResult()
    if p.M == 0.0:
        result.add(at_most("poisson-zero", float(np.max(np.abs(solution.phi))), 0.0))
        return result
    outside = samples >= p.R
    result.add(at_most("poisson-exterior", _relative(solution.phi[outside], exact[outside]),
                       p.bound))
    centre = rel.poisson_radial(density, p.R, [0.0]).phi
    result.add(at_most("poisson-center", _relative(centre, np.array([-1.5 * p.M / p.R])),
                       p.bound))
    phi_gap, dphi_gap = rel.matching_gaps(density, p.R)
    result.add(at_most("poisson-continuity", max(phi_gap, dphi_gap), p.bound))
    return result


# -- acceptance battery -----------------------------------------------------

RECIPROCITY_CASES = (
    ("zero", GridSection(a=0.0, b=1.0, n=400)),
    ("harmonic", GridSection(a=-10.0, b=10.0, n=400)),
    ("well-bump", GridSection(a=0.0, b=1.0, n=400)),
)
CONVERGENCE_SIZES = (250, 500, 1000)
DETERMINISM_GRID = GridSection(a=0.0, b=1.0, n=200)
SPECTRUM_CASES = (
    ("zero", GridSection(a=0.0, b=1.0, n=2000), 5),
    ("harmonic", GridSection(a=-10.0, b=10.0, n=2000), 3),
)
PICTURE_CASES = (
    ("zero", GridSection(a=0.0, b=1.0, n=64)),
    ("harmonic", GridSection(a=-5.0, b=5.0, n=64)),
    ("well-bump", GridSection(a=0.0, b=1.0, n=64)),
)
PICTURE_POINTS = 20
REST_RADII = (5.0, 10.0, 100.0)
NEWTONIAN_RADIUS = 1e4
ORBIT_RADIUS = 10.0
ORBIT_STEPS = 10_000


def _criterion_reciprocity(storage: ResultStorage) -> ExperimentResult:
    result = ExperimentResult()
    for name, grid in RECIPROCITY_CASES:
        report = reciprocity_report(grid, PotentialSection(name=name), "discrete-inverse", 10)
        storage.write_table(f"reciprocity_{name}", RECIPROCITY_HEADER,
                            lk.reciprocity_rows(report))
        result.add(at_most(f"reciprocity[{name}]", report.max_abs_deviation, 1e-8))
    return result


def _criterion_convergence(storage: ResultStorage) -> ExperimentResult:
    deviations = [
        reciprocity_report(GridSection(a=0.0, b=1.0, n=n), PotentialSection(), "analytic", 10)
        .max_abs_deviation
        for n in CONVERGENCE_SIZES
    ]
    storage.write_table(
        "reciprocity_convergence",
        ("n", "max_abs_deviation"),
        list(zip(CONVERGENCE_SIZES, deviations, strict=True)),
    )
    result = ExperimentResult()
    for n, coarse, fine in zip(CONVERGENCE_SIZES, deviations, deviations[1:], strict=False):
        result.add(within(f"reciprocity-convergence[n={n}]", coarse / fine, ORDER2_RATIO_BAND))
    return result


def _criterion_spectrum(storage: ResultStorage) -> ExperimentResult:
    result = ExperimentResult()
    for name, grid, k in SPECTRUM_CASES:
        checks, rows = spectrum_checks(grid, PotentialSection(name=name), k, 1e-3, f"[{name}]")
        storage.write_table(f"spectrum_{name}", ("index", "E", "E_reference", "rel_error"), rows)
        result.extend(checks)
    return result


def _criterion_pictures(storage: ResultStorage) -> ExperimentResult:
    result = ExperimentResult()
    for name, grid_cfg in PICTURE_CASES:
        h, weights = _setup(grid_cfg, PotentialSection(name=name))
        length = grid_cfg.b - grid_cfg.a
        times = np.linspace(0.0, math.pi, PICTURE_POINTS)
        for observable in _OBSERVABLES:
            checks, samples = picture_checks(
                h, weights, observable, 0.1 * length, times, 1e-8, f"[{name}/{observable}]"
            )
            storage.write_table(f"pictures_{name}_{observable}", PICTURES_HEADER,
                                picture_rows(samples))
            result.extend(checks)
    return result


def _criterion_rest_instant(storage: ResultStorage) -> ExperimentResult:
    metric = rel.schwarzschild(1.0)
    gaps = [rest_instant_gap(metric, r0) for r0 in REST_RADII]
    storage.write_table("rest_instant", ("r0", "abs_gap"), list(zip(REST_RADII, gaps, strict=True)))
    result = ExperimentResult()
    for r0, gap in zip(REST_RADII, gaps, strict=True):
        result.add(at_most(f"rest-instant[r0={r0:g}]", gap, REST_GAP_BOUND))
    result.add(at_most("newtonian-limit", newtonian_gap(metric, NEWTONIAN_RADIUS),
                       3.0 / NEWTONIAN_RADIUS))
    return result


def _criterion_mass_independence(storage: ResultStorage) -> ExperimentResult:
    metric = rel.schwarzschild(1.0)
    runs = [
        rel.integrate_lanczos(metric, [10.0, 0.0, 0.0], [0.0, 0.0, 0.0], 20.0, 1000, tag)
        for tag in (1.0, 1e6)
    ]
    storage.write_table("mass_light", TRAJECTORY_HEADER, runs[0].rows())
    storage.write_table("mass_heavy", TRAJECTORY_HEADER, runs[1].rows())
    identical = kinematic_bytes(runs[0]) == kinematic_bytes(runs[1])
    return ExperimentResult([at_most("mass-independence", 0.0 if identical else 1.0, 0.0)])


def _criterion_integrator(storage: ResultStorage) -> ExperimentResult:
    metric = rel.schwarzschild(1.0)
    radius, energy, angular = circular_orbit_drift(metric, ORBIT_RADIUS, ORBIT_STEPS)
    geodesic_ratio = rk4_error_ratio(metric, 10.0, 20.0, 20, "full-geodesic")
    static_ratio = rk4_error_ratio(metric, 10.0, 20.0, 20, "lanczos-static")
    storage.write_table(
        "integrator",
        ("radius_drift", "energy_drift", "angular_drift", "geodesic_rk4_ratio",
         "static_rk4_ratio"),
        [(radius, energy, angular, geodesic_ratio, static_ratio)],
    )
    return ExperimentResult(
        [
            at_most("orbit-radius-drift", radius, ORBIT_DRIFT_BOUND),
            at_most("orbit-energy-drift", energy, ENERGY_DRIFT_BOUND),
            at_most("orbit-angular-drift", angular, ENERGY_DRIFT_BOUND),
            within("geodesic-rk4-order", geodesic_ratio, RK4_RATIO_BAND),
            within("static-rk4-order", static_ratio, RK4_RATIO_BAND),
        ]
    )


def _criterion_poisson(storage: ResultStorage) -> ExperimentResult:
    return run_poisson(RunConfig(experiment="poisson"), storage)


def _criterion_determinism(storage: ResultStorage) -> ExperimentResult:
    """Render one reciprocity table twice from scratch and compare digests."""
    digests = []
    for _ in range(2):
        report = reciprocity_report(
            DETERMINISM_GRID, PotentialSection(name="well-bump"), "discrete-inverse", 10
        )
        rendered = csv_bytes(RECIPROCITY_HEADER, lk.reciprocity_rows(report))
        digests.append(hashlib.sha256(rendered).hexdigest())
    storage.write_table("determinism", ("render", "sha256"), list(enumerate(digests, start=1)))
    same = digests[0] == digests[1]
    return ExperimentResult([at_most("determinism", 0.0 if same else 1.0, 0.0)])


CRITERIA: tuple[tuple[str, Callable[[ResultStorage], ExperimentResult]], ...] = (
    ("discrete-reciprocity", _criterion_reciprocity),
    ("continuum-convergence", _criterion_convergence),
    ("spectral-accuracy", _criterion_spectrum),
    ("picture-equivalence", _criterion_pictures),
    ("rest-instant", _criterion_rest_instant),
    ("mass-independence", _criterion_mass_independence),
    ("integrator-quality", _criterion_integrator),
    ("poisson-matching", _criterion_poisson),
    ("determinism", _criterion_determinism),
)


def verify_all(cfg: RunConfig, storage: ResultStorage) -> ExperimentResult:
    """The acceptance battery; ``cfg`` only selects the output directory."""
    result = ExperimentResult()
    for name, criterion in CRITERIA:
        with timed("verify.criterion", criterion=name) as extra:
            checks = criterion(storage)
            extra["passed"] = checks.passed
        result.extend(checks)
    return result
