"""Rebuild the frozen end-to-end goldens.

Run from the repository root:  python tests/golden/regen.py

The fixture inputs are written first, the CLI produces the outputs into a
scratch directory, and the report is checked against the spreadsheet
formulas and the brute-force clustering before anything is copied here.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from golden_check import DISTRICTS, FROZEN, SECTORS, SEED, check_report, golden_cli_runs  # noqa: E402
from spreadsheet import klassen_sheet  # noqa: E402

from mvhac.cli import cli_main  # noqa: E402
from mvhac.dataset import synthetic_fixture  # noqa: E402
from mvhac.output import render_panel  # noqa: E402


def main():
    data = synthetic_fixture(SEED, DISTRICTS, SECTORS)
    (HERE / "current.csv").write_text(render_panel(data.current))
    (HERE / "previous.csv").write_text(render_panel(data.previous))

    sheet = klassen_sheet(data)
    print(f"reference growth {sheet['reference_growth']:.6f}  benchmark {sheet['benchmark']:.6f}")
    for d, r, y, q in zip(sheet["districts"], sheet["growth"], sheet["contribution"], sheet["quadrants"]):
        print(f"  {d}  r={r:9.4f}  y={y:8.4f}  {q}")

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        for argv in golden_cli_runs(HERE, out):
            if cli_main(argv) != 0:
                sys.exit(f"CLI failed: {argv}")
        problems = check_report(json.loads((out / "report.json").read_text()), data)
        if problems:
            sys.exit("refusing to freeze: " + "; ".join(problems))
        produced = sorted(p.name for p in out.iterdir())
        if produced != sorted(FROZEN):
            sys.exit(f"unexpected output set {produced}")
        for name in FROZEN:
            shutil.copyfile(out / name, HERE / name)
    print(f"froze {len(FROZEN)} files in {HERE}")


if __name__ == "__main__":
    main()
