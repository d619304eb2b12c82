"""Regenerate the SHA-256 digests of every matrix cell's SVG and GeoJSON.

Run only after an intentional change to output bytes; the acceptance suite
compares fresh runs against this file.
"""

from __future__ import annotations

import json
from pathlib import Path

from graphmap.experiments import digests, run_matrix

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden" / "matrix_digests.json"


def main() -> None:
    results = run_matrix()
    table = {cell.key: digests(res) for cell, res in results.items()}
    OUT.write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(table)} cells to {OUT}")


if __name__ == "__main__":
    main()
