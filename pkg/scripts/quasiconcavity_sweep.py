"""Probe I along random chart lines of random in-sandwich polygons.

Each line is the standard family seen through a random unimodular frame.
Prints the number of violating triples and of non-unimodal profiles.
"""
import argparse
import sys
import time

import numpy as np

from mi_ellipse.body import random_unimodular
from mi_ellipse.samplers import in_sandwich_scale, random_polygon, random_quartic
from mi_ellipse.solver import quasiconcavity_probe


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bodies", type=int, default=50)
    p.add_argument("--lines", type=int, default=5)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--smooth", action="store_true", help="use quartic bodies instead of polygons")
    p.add_argument("--seed", type=int, default=5)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    violations = bumpy = 0
    t0 = time.perf_counter()
    for _ in range(args.bodies):
        base = random_quartic(rng) if args.smooth else random_polygon(rng)
        b = in_sandwich_scale(rng, base)
        for _ in range(args.lines):
            frame = random_unimodular(rng, rng.uniform(0, 1.0))
            r = quasiconcavity_probe(b, frame, (-2.0, 2.0), args.steps)
            violations += len(r["violations"])
            bumpy += not r["unimodal"]
    n = args.bodies * args.lines
    print(f"{violations} violating triples, {bumpy} non-unimodal profiles over {n} lines; "
          f"{time.perf_counter() - t0:.1f}s")
    return 0 if violations == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
