#!/usr/bin/env python3
"""Run the full 1/J0 benchmark: both sampling schemes, all four methods.

Writes per-case comparison tables (CSV + text) plus the sample sets, and
prints the error table to stdout.  Equivalent to `ratapprox repro` with a
bit more knob exposure for experimentation.
"""

import argparse
from pathlib import Path

from ratapprox import (
    OMEGA,
    CompareConfig,
    compare_methods,
    h_of_s,
    sample_oracle,
    structured_grid,
    uniform_random_grid,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="benchmark_out")
    parser.add_argument("--seed", type=int, default=0, help="uniform grid seed")
    parser.add_argument("--nx", type=int, default=500, help="dense grid width")
    parser.add_argument("--ny", type=int, default=500, help="dense grid height")
    parser.add_argument("--loewner-order", type=int, default=11)
    parser.add_argument("--rloewner-order", type=int, default=11)
    parser.add_argument("--aaa-tol", type=float, default=1e-13)
    parser.add_argument("--vf-order", type=int, default=12)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = CompareConfig(
        loewner_order=args.loewner_order,
        rloewner_order=args.rloewner_order,
        aaa_tol=args.aaa_tol,
        vf_order=args.vf_order,
        grid_nx=args.nx,
        grid_ny=args.ny,
        seed=args.seed,
    )

    cases = {
        "structured_2121": sample_oracle(structured_grid(OMEGA, 101, 21), h_of_s),
        "uniform_2000": sample_oracle(uniform_random_grid(OMEGA, 1000, args.seed), h_of_s),
    }
    for name, samples in cases.items():
        samples.to_csv(out / f"{name}.samples.csv", meta=f"benchmark seed={args.seed}")
        table = compare_methods(samples, h_of_s, cfg)
        table.to_csv(out / f"{name}.compare.csv", meta=f"benchmark seed={args.seed}")
        (out / f"{name}.compare.txt").write_text(table.to_text() + "\n")
        print(f"== {name} ==")
        print(table.to_text())
        print()


if __name__ == "__main__":
    main()
