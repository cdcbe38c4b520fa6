#!/usr/bin/env python3
"""Classify zero sets of one-variable slice functions sphere by sphere.

Walks a gallery of fixed functions plus a seeded random family, classifies
each on a few spheres (alpha, |beta|), and confirms every verdict with a
dense scan over sampled imaginary units.

Usage:
    python scripts/zero_structure_demo.py
    python scripts/zero_structure_demo.py --algebra quaternion --random 10
"""

import argparse
import sys

import numpy as np

import hyperslice as hs


def describe(f, sphere, units, rng) -> bool:
    alpha, beta = sphere
    x = hs.slice_point(alpha, beta, hs.sample_unit_imaginary(f.tag, rng))
    res = hs.classify_sphere_zeros(f, x)
    norms = np.linalg.norm(hs.sphere_values(f, x, units), axis=1)
    hits = int(np.count_nonzero(norms < 1e-7))
    if res.kind is hs.ZeroKind.POINT:
        # isolated zero: the scan will rarely land on it, so check the claim directly
        detail = f"point {res.point.components()[0]}"
        near = np.linalg.norm(units - res.unit.coeffs[None, :], axis=1) < 1e-2
        ok = hs.lift_evaluate(f, res.point).norm() < 1e-7 and bool(
            np.all(~(norms < 1e-7) | near)
        )
    elif res.kind is hs.ZeroKind.SPHERICAL:
        detail = "whole sphere"
        ok = hits == len(units)
    elif res.kind is hs.ZeroKind.REAL_ZERO:
        detail = "real point"
        ok = hs.lift_evaluate(f, x).norm() < 1e-7
    else:
        detail = "no zero"
        ok = hits == 0
    flag = "ok" if ok else "MISMATCH"
    print(
        f"  ({alpha:+.2f}, {beta:.2f})  {res.kind.name:<10} {detail:<36}"
        f" scan={hits:>4}/{len(units)} min={norms.min():.1e}  {flag}"
    )
    return ok


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="octonion")
    ap.add_argument("--random", type=int, default=5)
    ap.add_argument("--units", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args(argv)

    tag = hs.parse_algebra(args.algebra)
    rng = np.random.default_rng(args.seed)
    units = hs.sample_unit_imaginaries(tag, args.units, rng)
    one, e1 = hs.one(tag), hs.basis(tag, 1)

    gallery = [
        ("z^2 + 1", {(2,): one, (0,): one}),
        ("z - 2 e1", {(1,): one, (0,): -2.0 * e1}),
        ("z", {(1,): one}),
        ("3 + e1", {(0,): 3.0 * one + e1}),
    ]
    spheres = [(0.0, 1.0), (0.0, 2.0), (0.0, 0.0), (0.5, 1.0)]

    bad = 0
    for name, coeffs in gallery:
        print(f"{name}  [{tag.name.lower()}]")
        f = hs.lift(hs.stem_polynomial(tag, 1, coeffs))
        for sphere in spheres:
            if sphere[1] == 0.0:
                x = hs.decompose_point((hs.scalar(tag, sphere[0]),))
                res = hs.classify_sphere_zeros(f, x)
                print(f"  ({sphere[0]:+.2f}, 0.00)  {res.kind.name:<10}")
                continue
            bad += not describe(f, sphere, units, rng)

    print(f"random degree <=3 family ({args.random} draws)")
    for k in range(args.random):
        deg = int(rng.integers(1, 4))
        coeffs = {(m,): hs.element(tag, rng.standard_normal(tag.dim)) for m in range(deg + 1)}
        f = hs.lift(hs.stem_polynomial(tag, 1, coeffs))
        sphere = (float(rng.uniform(-1, 1)), float(rng.uniform(0.2, 2.0)))
        bad += not describe(f, sphere, units, rng)

    print("all verdicts confirmed by scan" if bad == 0 else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
