from __future__ import annotations

import argparse
import json
from pathlib import Path

import sympy

from latticecft.fock import build_module
from latticecft.fock.partitions import colored_partition_counts
from latticecft.scalars import ScalarBackend


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Dump graded dimensions and Gram determinants of a truncated Fock module as JSON."
    )
    parser.add_argument("--colors", type=int, default=1, help="Number of colors d (default: 1)")
    parser.add_argument("--cutoff", type=int, default=8, help="Energy cutoff E (default: 8)")
    parser.add_argument("--out", default="", help="Write JSON here instead of stdout.")
    args = parser.parse_args()

    module = build_module(int(args.colors), None, int(args.cutoff), backend=ScalarBackend())
    dims = list(module.grade_dimensions())
    oracle = [int(x) for x in colored_partition_counts(module.colors, module.cutoff)]
    grades = []
    for n, dim in enumerate(dims):
        det = sympy.Matrix(module.gram_block(n)).det() if dim else 1
        grades.append({"grade": n, "dimension": dim, "gramDeterminant": int(det)})

    payload = {
        "colors": module.colors,
        "cutoff": module.cutoff,
        "states": len(module.basis),
        "gradeDimensions": dims,
        "partitionOracle": oracle,
        "grades": grades,
    }
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out).expanduser().resolve()
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        print(f"Written to: {out}")
    else:
        print(text, end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
