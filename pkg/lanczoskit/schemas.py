from __future__ import annotations

from typing import Annotated, Literal

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

Experiment = Literal[
    "spectrum", "kernel", "reciprocity", "pictures", "geodesic", "poisson", "verify-all"
]


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _split_list(value: object) -> object:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


# Lists are written comma-separated in run configuration files.
FloatList = Annotated[list[float], BeforeValidator(_split_list)]


class GridSection(Section):
    a: float = 0.0
    b: float = 1.0
    n: int = Field(default=200, ge=3)

    @model_validator(mode="after")
    def _ordered(self) -> GridSection:
        if self.b <= self.a:
            raise ValueError(f"b must be greater than a (a={self.a}, b={self.b})")
        return self


class PotentialSection(Section):
    name: Literal["zero", "harmonic", "quartic", "well-bump"] = "zero"
    c: float = 50.0
    x0: float | None = None
    s: float | None = Field(default=None, gt=0)


class SpectrumSection(Section):
    k: int = Field(default=5, ge=1)
    rel_tol: float = Field(default=1e-3, gt=0)


class KernelSection(Section):
    origin: Literal["discrete-inverse", "analytic"] = "discrete-inverse"
    k: int = Field(default=10, ge=1)
    bound: float = Field(default=1e-8, gt=0)


class TimeSection(Section):
    t_end: float = Field(default=3.141592653589793, gt=0)
    points: int = Field(default=20, ge=1)
    observable: Literal["position", "momentum", "hamiltonian"] = "position"
    shift: float = 0.5
    bound: float = Field(default=1e-8, gt=0)


class MetricSection(Section):
    M: float = Field(default=1.0, ge=0)
    margin: float = Field(default=0.5, ge=0)
    r0: float = Field(default=10.0, gt=0)
    v0: FloatList = Field(default_factory=lambda: [0.0, 0.0, 0.0], min_length=3, max_length=3)
    horizon: float = Field(default=20.0, gt=0)
    steps: int = Field(default=1000, ge=10)
    mass_tag: float = 1.0

    @model_validator(mode="after")
    def _outside_horizon(self) -> MetricSection:
        r_min = 2.0 * self.M * (1.0 + self.margin)
        if self.r0 <= r_min:
            raise ValueError(f"r0 must exceed r_min = 2M(1 + margin) = {r_min:g}, got {self.r0:g}")
        return self


class PoissonSection(Section):
    M: float = Field(default=1.0, ge=0)
    R: float = Field(default=1.0, gt=0)
    samples: FloatList = Field(
        default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 8.0], min_length=1
    )
    bound: float = Field(default=1e-8, gt=0)

    @field_validator("samples")
    @classmethod
    def _non_negative(cls, value: list[float]) -> list[float]:
        if any(r < 0.0 for r in value):
            raise ValueError("sample radii must be non-negative")
        return value


class OutputSection(Section):
    path: str = "out"


class RunConfig(Section):
    experiment: Experiment = "spectrum"
    grid: GridSection = Field(default_factory=GridSection)
    potential: PotentialSection = Field(default_factory=PotentialSection)
    spectrum: SpectrumSection = Field(default_factory=SpectrumSection)
    kernel: KernelSection = Field(default_factory=KernelSection)
    time: TimeSection = Field(default_factory=TimeSection)
    metric: MetricSection = Field(default_factory=MetricSection)
    poisson: PoissonSection = Field(default_factory=PoissonSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _counts_fit_grid(self) -> RunConfig:
        for key, k in (("spectrum.k", self.spectrum.k), ("kernel.k", self.kernel.k)):
            if k > self.grid.n:
                raise ValueError(f"{key} = {k} exceeds grid.n = {self.grid.n}")
        return self


SECTIONS: dict[str, type[Section]] = {
    name: info.annotation  # type: ignore[misc]
    for name, info in RunConfig.model_fields.items()
    if name != "experiment"
}
