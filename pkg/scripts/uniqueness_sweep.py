"""Compare the MI solver with exhaustive grid search on random bodies at mid-sandwich area."""
import argparse
import sys
import time

import numpy as np

from mi_ellipse.oracle import grid_search_mi, superlevel_contains
from mi_ellipse.samplers import random_polygon, random_quartic
from mi_ellipse.solver import mi_ellipse, sandwich_range


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bodies", type=int, default=20)
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--seed", type=int, default=6)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    good = 0
    for k in range(args.bodies):
        t0 = time.perf_counter()
        b = random_polygon(rng) if k % 2 else random_quartic(rng)
        john, loewner = sandwich_range(b)
        lam = 0.5 * (john.ellipse.area + loewner.ellipse.area)
        r = mi_ellipse(b, lam, extremal=(john, loewner))
        # centre the grid between the extremal charts, wide enough to hold both
        centre = tuple(0.5 * (john.ellipse.chart + loewner.ellipse.chart))
        span = max(1.0, 1.5 * np.linalg.norm(john.ellipse.chart - loewner.ellipse.chart))
        g = grid_search_mi(b, lam, t_span=span, grid=args.grid, centre=centre)
        ok = g.info["connected"] and superlevel_contains(g, r.ellipse.chart)
        good += ok
        gap = np.abs(np.array(g.info["argmax"]) - r.ellipse.chart).max() / g.info["fine_cell"]
        print(f"{k:3d} {b.kind:8s} lambda={lam:8.4f} |D|={r.residual:.1e} "
              f"components={g.info['components']} offset={gap:.2f} cells "
              f"{'ok' if ok else 'FAIL'} {time.perf_counter() - t0:.1f}s")
    print(f"{good}/{args.bodies} unique and matched")
    return 0 if good == args.bodies else 1


if __name__ == "__main__":
    sys.exit(main())
