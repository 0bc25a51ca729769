#!/usr/bin/env python3
"""Densification study of the projected interpolation points.

Fits the Loewner model at a fixed order on grids a*a, 2a*2a, ..., na*na
(ordinate counts bumped to odd) and records where the projected left/right
interpolation points land at each step.  The CSV is ready for trajectory
plots; the summary printed per step shows the worst left/right pairing gap,
which contracts as the grids densify.
"""

import argparse

import numpy as np

from ratapprox import OMEGA, h_of_s, trajectory_study


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=int, default=10, help="coarsest grid edge")
    parser.add_argument("--steps", type=int, default=5)
    parser.add_argument("--order", type=int, default=11)
    parser.add_argument("--scheme", default="epsilon_paired",
                        choices=("alternating", "half_split", "epsilon_paired"))
    parser.add_argument("--out", default="trajectories.csv")
    args = parser.parse_args()

    steps = trajectory_study(
        h_of_s, OMEGA, a=args.a, n_steps=args.steps, order=args.order, scheme=args.scheme
    )
    with open(args.out, "w") as fh:
        fh.write("step,nx,ny,n_points,side,re,im\n")
        for i, step in enumerate(steps, start=1):
            for z in step.projected.lambda_hat:
                fh.write(f"{i},{step.nx},{step.ny},{step.n_points},right,{z.real:.17g},{z.imag:.17g}\n")
            for z in step.projected.mu_hat:
                fh.write(f"{i},{step.nx},{step.ny},{step.n_points},left,{z.real:.17g},{z.imag:.17g}\n")
            gap = max(
                float(np.min(np.abs(step.projected.mu_hat - lam)))
                for lam in step.projected.lambda_hat
            )
            print(
                f"step {i}: {step.nx}x{step.ny} grid ({step.n_points} points), "
                f"worst left/right pairing gap {gap:.3e}"
            )
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
