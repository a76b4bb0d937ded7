import sys
import tempfile
from pathlib import Path

from lanczoskit.cli import main as cli_main

CONFIG = Path(__file__).resolve().parent.parent / "example_config.conf"
QUICK = ("spectrum", "kernel", "reciprocity", "poisson", "geodesic")


def main() -> int:
    worst = 0
    with tempfile.TemporaryDirectory() as out:
        for command in QUICK:
            code = cli_main([command, "--config", str(CONFIG), "--out", f"{out}/{command}"])
            print(f"{command}={code}", file=sys.stderr)
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
