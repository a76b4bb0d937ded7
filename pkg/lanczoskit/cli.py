"""``lanczoskit`` command line: parse a run configuration, run one experiment, report.

Configuration files hold one ``key = value`` per line, ``#`` comments and
``[section]`` headers; keys before the first header are top-level.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
from pydantic import ValidationError

from lanczoskit import experiments
from lanczoskit.errors import (
    EXIT_CHECK_FAILED,
    ConfigError,
    LanczosKitError,
    config_error,
    linalg_failure,
    output_error,
    parse_error,
)
from lanczoskit.observability import log_event, snapshot, timed
from lanczoskit.schemas import SECTIONS, RunConfig
from lanczoskit.storage import ResultStorage

SUBCOMMANDS = ("spectrum", "kernel", "reciprocity", "pictures", "geodesic", "poisson", "verify-all")
TOP_LEVEL_KEYS = ("experiment",)

Runner = Callable[[RunConfig, ResultStorage], experiments.ExperimentResult]

T = TypeVar("T")

RUNNERS: dict[str, Runner] = {
    "spectrum": experiments.run_spectrum,
    "kernel": experiments.run_kernel,
    "reciprocity": experiments.run_reciprocity,
    "pictures": experiments.run_pictures,
    "poisson": experiments.run_poisson,
    "verify-all": experiments.verify_all,
}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_config(text: str) -> RunConfig:
    data: dict[str, Any] = {}
    section: str | None = None
    seen: set[tuple[str | None, str]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise parse_error(line_no, f"malformed section header {line!r}")
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise parse_error(line_no, f"unknown section [{section}]")
            data.setdefault(section, {})
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise parse_error(line_no, f"expected 'key = value', got {line!r}")
        if not value:
            raise parse_error(line_no, f"missing value for {key!r}")
        allowed = TOP_LEVEL_KEYS if section is None else tuple(SECTIONS[section].model_fields)
        if key not in allowed:
            where = "top level" if section is None else f"[{section}]"
            raise parse_error(line_no, f"unknown key {key!r} in {where}")
        if (section, key) in seen:
            raise parse_error(line_no, f"duplicate key {key!r}")
        seen.add((section, key))
        if section is None:
            data[key] = value
        else:
            data[section][key] = value
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "config"
        raise config_error(key, first["msg"], {"errors": exc.error_count()}) from exc


def load_config(path: Path | str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise config_error("--config", f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text)


def _runner(config: RunConfig, allow_nonstatic: bool) -> Runner:
    if config.experiment == "geodesic":
        return lambda cfg, storage: experiments.run_geodesic(cfg, storage, allow_nonstatic)
    return RUNNERS[config.experiment]


def _guarded(action: Callable[[], T], storage: ResultStorage) -> T:
    """Run ``action`` with filesystem and LAPACK failures mapped onto the error hierarchy."""
    try:
        return action()
    except np.linalg.LinAlgError as exc:
        raise linalg_failure(str(exc)) from exc
    except OSError as exc:
        raise output_error(storage.base_dir, exc.strerror or str(exc)) from exc


def run(
    config: RunConfig, out_dir: Path | str | None = None, allow_nonstatic: bool = False
) -> int:
    """Run ``config.experiment``, print one ``CHECK`` line per certificate, return the exit code."""
    storage = ResultStorage(out_dir if out_dir is not None else config.output.path)
    try:
        with timed("experiment.run", experiment=config.experiment) as extra:
            result = _guarded(lambda: _runner(config, allow_nonstatic)(config, storage), storage)
            extra["checks"] = len(result.certificates)
            extra["passed"] = result.passed
        for certificate in result.certificates:
            print(certificate.line())
        _guarded(
            lambda: storage.write_manifest(
                {
                    "experiment": config.experiment,
                    "config": config.model_dump(mode="json"),
                    "certificates": [c.as_dict() for c in result.certificates],
                    "passed": result.passed,
                }
            ),
            storage,
        )
    except LanczosKitError as exc:
        log_event("experiment.failed", level=logging.ERROR, **exc.as_dict())
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return exc.exit_code
    log_event("metrics.snapshot", **snapshot())
    return 0 if result.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lanczoskit",
        description="Kernel reciprocity, picture equivalence and static-field motion checks",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub = commands.add_parser(name)
        sub.add_argument("--config", help="key = value run configuration file")
        sub.add_argument("--out", help="output directory (overrides [output] path)")
        sub.add_argument(
            "--allow-nonstatic",
            action="store_true",
            help="let the static-condition law start from a nonzero velocity",
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = config.model_copy(update={"experiment": args.command})
    except ConfigError as exc:
        log_event("config.rejected", level=logging.ERROR, **exc.as_dict())
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return exc.exit_code
    return run(config, out_dir=args.out, allow_nonstatic=args.allow_nonstatic)


if __name__ == "__main__":
    raise SystemExit(main())
