"""Measure the wall-clock speed-up of lazy greedy selection over plain greedy.

For each (rows, columns, k) shape, draws a low-rank-plus-noise matrix,
times plain greedy VE selection and its lazy variant over repeated runs,
and prints the median speed-up.  Larger problems and deeper selections
favor the lazy variant because its bound list skips most gain
re-evaluations.

Usage:
    python scripts/speedup_table.py
    python scripts/speedup_table.py --shapes 500x100x5 5000x400x50 --repeats 10
"""

from __future__ import annotations

import argparse
import sys

from varsel import center_columns, gen_sim2, measure_speedup


def parse_shape(text: str) -> tuple[int, int, int]:
    try:
        m, v, k = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MxVxK, got {text!r}") from None
    if m < 2 or v < 2 or k < 1 or k > v:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}")
    return m, v, k


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--shapes",
        nargs="+",
        type=parse_shape,
        default=[(500, 100, 5), (1000, 200, 20), (5000, 400, 50)],
        metavar="MxVxK",
        help="problem shapes as rowsxcolumnsxdepth (default: three increasing sizes)",
    )
    parser.add_argument("--repeats", type=int, default=5, help="timed runs per shape (default 5)")
    parser.add_argument("--seed", type=int, default=0, help="data seed (default 0)")
    args = parser.parse_args(argv)

    print(f"{'rows':>6} {'cols':>5} {'k':>4} {'lazy speed-up':>14}")
    for m, v, k in args.shapes:
        rank = max(2, v // 4)
        data = center_columns(gen_sim2(m, rank, v, args.seed))
        ratios = measure_speedup(data, k, repeats=args.repeats, algorithms=["lfsca"])
        print(f"{m:>6} {v:>5} {k:>4} {ratios['lfsca']:>13.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
