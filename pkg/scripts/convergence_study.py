#!/usr/bin/env python3
"""Angular-node convergence of the boundary integral on the unit bidisc.

Reproduces a fixed degree-3 polynomial at an interior point for doubling M,
printing one row per run and writing the standard convergence CSV
(M,R,V,abs_error,wall_ms).

Usage:
    python scripts/convergence_study.py --out convergence.csv
    python scripts/convergence_study.py --algebra quaternion --radial 16
"""

import argparse
import sys
import time

import numpy as np

import hyperslice as hs


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="octonion")
    ap.add_argument("--radial", type=int, default=32)
    ap.add_argument("--volume", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="convergence.csv")
    args = ap.parse_args(argv)

    tag = hs.parse_algebra(args.algebra)
    rng = np.random.default_rng(args.seed)
    J = hs.sample_unit_imaginary(tag, rng)
    dom = hs.PolydiscDomain(np.zeros(2), np.ones(2), J)
    x = hs.point_from_z(np.array([0.3 + 0.2j, -0.1 + 0.4j]), J)
    f = hs.lift(
        hs.stem_polynomial(tag, 2, {(1, 2): hs.one(tag), (1, 0): hs.basis(tag, 3)})
    )

    rows = []
    print(f"{'M':>4} {'R':>4} {'V':>2} {'abs_error':>14} {'wall_ms':>9}")
    for M in (8, 16, 32, 64, 128):
        spec = hs.QuadratureSpec(M, args.radial, args.volume)
        t0 = time.perf_counter()
        rep = hs.reproduce_check(f, dom, x, spec)
        wall_ms = (time.perf_counter() - t0) * 1e3
        rows.append({"M": M, "R": args.radial, "V": args.volume,
                     "abs_error": rep.abs_error, "wall_ms": wall_ms})
        print(f"{M:>4} {args.radial:>4} {args.volume:>2} {rep.abs_error:>14.3e} {wall_ms:>9.1f}")

    hs.write_convergence_csv(args.out, rows)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
