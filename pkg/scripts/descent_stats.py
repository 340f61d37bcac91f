#!/usr/bin/env python3
"""Selmer simulator statistics: dimension distribution over seeds, twist-law
spot checks, and a mode-A descent trace."""

import argparse
import random
from collections import Counter

from quadpencil.selmersim import (
    find_descent_instance,
    make_system,
    random_transverse_condition,
    selmer,
    twist_at,
    verify_pt_duality,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--systems", type=int, default=400)
    ap.add_argument("--dims", default="4,4,4")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    dims = [int(x) for x in args.dims.split(",")]
    hist = Counter()
    duality_fail = 0
    twist_fail = 0
    rng = random.Random(args.seed)
    for k in range(args.systems):
        system = make_system(args.seed + k, len(dims), dims)
        hist[len(selmer(system))] += 1
        for v in range(len(dims)):
            if not verify_pt_duality(system, v):
                duality_fail += 1
            try:
                cond = random_transverse_condition(rng, system.places[v])
                twist_at(system, v, cond)
            except RuntimeError:
                twist_fail += 1

    print(f"{args.systems} systems, dims {dims}")
    print("Selmer dimension histogram:", dict(sorted(hist.items())))
    print(f"duality failures: {duality_fail}")
    print(f"twist-law failures: {twist_fail}")

    found = find_descent_instance("A", 5, 5, [4, 4, 4, 4, 4])
    if found:
        seed, _, trace = found
        print(f"mode-A descent: seed {seed}, dims {list(trace.dims)}")
    found_b = find_descent_instance("B", 7, 3, [8, 8, 8], max_seed=500)
    if found_b:
        seed, _, trace = found_b
        print(f"mode-B descent: seed {seed}, dims {list(trace.dims)}")


if __name__ == "__main__":
    main()
