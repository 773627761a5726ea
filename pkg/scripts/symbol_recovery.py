#!/usr/bin/env python3
"""Numerical recovery of the boundary symbols from the half-space problems.

Runs the finite-difference refinement ladders for both boundary maps against
their predicted symbols, then cross-checks the explicit kernels against
Fourier synthesis on Gaussian data.
"""

import argparse
import math

import numpy as np

from bisteklov import (
    BoundaryMetric,
    FourierDatum,
    HalfSpaceGrid,
    MetricBlock,
    bvp_solve_p1,
    bvp_solve_p2,
    fourier_synthesis,
    solve_by_kernel,
    symbol_F,
    symbol_Theta,
    xi_norm,
)


def run_ladder(name, solver, block, eta, target, finest, levels):
    k = xi_norm(block, eta)
    print(f"\n== {name}: target {target:.10f} (decay rate {k:.4f}) ==")
    print(f"{'h':>12} {'recovered':>16} {'rel error':>12} {'ratio':>8}")
    previous = None
    for level in range(levels - 1, -1, -1):
        h = 2.0**level / (finest * k)
        steps = max(8, math.ceil((30.0 / k) / h))
        value = solver(block, FourierDatum(eta), HalfSpaceGrid(h, steps * h))
        rel = abs(value - target) / abs(target)
        ratio = "" if previous is None else f"{previous / rel:8.2f}"
        print(f"{h:>12.6f} {value:>16.10f} {rel:>12.3e} {ratio:>8}")
        previous = rel
    return previous


def run_kernel_comparison(points):
    block = MetricBlock.identity(2)
    y = np.linspace(-12.0, 12.0, points)
    data = np.exp(-(y**2))
    zero = np.zeros_like(y)
    where = [(float(x), 1.0) for x in y]
    via_kernel = solve_by_kernel(block, y, zero, data, where)
    via_fourier = fourier_synthesis(block, y, zero, data, where)
    dev = float(np.max(np.abs(via_kernel - via_fourier)))
    print(f"\n== kernel convolution vs Fourier synthesis ({points} pts) ==")
    print(f"Gaussian slope data, evaluation height 1.0: max deviation {dev:.3e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--finest", type=int, default=512,
                        help="reciprocal of the finest step size")
    parser.add_argument("--levels", type=int, default=4)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--points", type=int, default=128)
    args = parser.parse_args()

    ident = MetricBlock.identity(2)
    eta1 = np.array([1.0])
    metric1 = BoundaryMetric.identity(1)
    run_ladder("trace map, identity block", bvp_solve_p1, ident, eta1,
               symbol_F(metric1, None, eta1), args.finest, args.levels)
    run_ladder("flux map, identity block", bvp_solve_p2, ident, eta1,
               symbol_Theta(metric1, None, eta1), args.finest, args.levels)

    rng = np.random.default_rng(args.seed)
    m = rng.normal(size=(2, 2))
    block = MetricBlock(m @ m.T + 2 * np.eye(2), float(rng.uniform(0.5, 3.0)))
    eta = rng.normal(size=2)
    metric = BoundaryMetric.constant(block.a_tan)
    run_ladder("trace map, random SPD block", bvp_solve_p1, block, eta,
               symbol_F(metric, None, eta), args.finest, args.levels)
    run_ladder("flux map, random SPD block", bvp_solve_p2, block, eta,
               symbol_Theta(metric, None, eta), args.finest, args.levels)

    run_kernel_comparison(args.points)


if __name__ == "__main__":
    main()
