from __future__ import annotations

import time

import pytest

from lanczoskit import experiments, observability
from lanczoskit.cli import main
from lanczoskit.schemas import RunConfig
from lanczoskit.storage import ResultStorage

RECIPROCITY_SECONDS_PER_POTENTIAL_GATE = 60.0
CRITERION_SECONDS_GATE = 180.0

BATTERY = list(experiments.CRITERIA)


@pytest.fixture(autouse=True)
def _reset_metrics() -> None:
    observability.reset()


def _failures(result: experiments.ExperimentResult) -> list[str]:
    return [c.line() for c in result.certificates if not c.passed]


@pytest.mark.parametrize(("name", "criterion"), BATTERY, ids=[name for name, _ in BATTERY])
def test_acceptance_criterion(tmp_path, name, criterion):
    storage = ResultStorage(tmp_path)
    t0 = time.perf_counter()
    result = criterion(storage)
    elapsed = time.perf_counter() - t0
    assert result.certificates
    assert result.passed, f"{name} failed:\n" + "\n".join(_failures(result))
    assert storage.tables
    limit = CRITERION_SECONDS_GATE
    if name == "discrete-reciprocity":
        limit = RECIPROCITY_SECONDS_PER_POTENTIAL_GATE * len(experiments.RECIPROCITY_CASES)
    assert elapsed < limit, f"{name} took {elapsed:.1f}s (gate {limit:.0f}s)"


def test_picture_battery_covers_every_combination(tmp_path):
    storage = ResultStorage(tmp_path)
    result = experiments.CRITERIA[3][1](storage)
    equivalence = [c for c in result.certificates if c.name.endswith("picture-equivalence")]
    assert len(equivalence) == 9
    assert all(t.row_count == experiments.PICTURE_POINTS for t in storage.tables)


def test_reciprocity_tables_rerender_identically(tmp_path):
    first = ResultStorage(tmp_path / "a")
    second = ResultStorage(tmp_path / "b")
    for storage in (first, second):
        result = experiments.CRITERIA[0][1](storage)
        assert result.passed, "\n".join(_failures(result))
    assert [t.sha256 for t in first.tables] == [t.sha256 for t in second.tables]


def test_verify_all_twice_writes_identical_files(tmp_path):
    runs = [tmp_path / "one", tmp_path / "two"]
    for out in runs:
        assert main(["verify-all", "--out", str(out)]) == 0
    names = sorted(p.name for p in runs[0].iterdir())
    assert "manifest.json" in names
    assert names == sorted(p.name for p in runs[1].iterdir())
    for name in names:
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes(), name


def test_verify_all_reports_every_criterion(tmp_path, monkeypatch):
    calls: list[str] = []

    def fake(name: str):
        def criterion(storage: ResultStorage) -> experiments.ExperimentResult:
            calls.append(name)
            return experiments.ExperimentResult([experiments.at_most(name, 0.0, 1.0)])

        return criterion

    monkeypatch.setattr(
        experiments, "CRITERIA", tuple((name, fake(name)) for name, _ in experiments.CRITERIA)
    )
    result = experiments.verify_all(RunConfig(), ResultStorage(tmp_path))
    assert calls == [
        "discrete-reciprocity",
        "continuum-convergence",
        "spectral-accuracy",
        "picture-equivalence",
        "rest-instant",
        "mass-independence",
        "integrator-quality",
        "poisson-matching",
        "determinism",
    ]
    assert result.passed
    assert observability.snapshot()["timings_ms"]["verify.criterion.duration_ms"]["count"] == 9
