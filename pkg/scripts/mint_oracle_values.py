"""Recompute the multiprecision reference ranks that the test suite freezes.

    python scripts/mint_oracle_values.py --k-max 8 --points 3
"""
import argparse
import time

from circuitgrowth.architecture import brickwork
from circuitgrowth.oracle import highprec_rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--k-max", type=int, default=8)
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--k1-points", type=int, default=10)
    args = ap.parse_args()
    arch = brickwork(args.n)
    for k in range(args.k_max + 1):
        pts = args.k1_points if k == 1 else args.points
        t0 = time.time()
        ranks = [highprec_rank(arch.n, arch.slots, k, seed=1000 * k + s) for s in range(pts)]
        print(f"n={args.n} k={k} ranks={ranks} d={max(ranks)} ({time.time() - t0:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
