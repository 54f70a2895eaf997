#!/usr/bin/env python3
"""Run the explicit-formula identity over a grid of moduli and test functions; report residuals vs tail bounds."""

import argparse
import statistics

from lowzeros.analysis import explicit_formula_check
from lowzeros.characters import enumerate_characters
from lowzeros.extremal import ExtremalParams
from lowzeros.zerocache import ZeroStore


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[3, 5, 7, 11, 13, 31])
    ap.add_argument("--height", type=float, default=40.0)
    ap.add_argument("--cache-dir", default="zero_cache")
    args = ap.parse_args()

    store = ZeroStore(args.cache_dir)
    res, bad = [], 0
    for q in args.q:
        mz = store.ensure(q, -args.height, args.height)
        for d in (0.5, 1.0):
            for T in (0.3, 1.0):
                for s in (1, -1):
                    p = ExtremalParams(d, T, 0.0, s)
                    worst = max(
                        (explicit_formula_check(chi, p, args.height, mz) for chi in enumerate_characters(q)[1:]),
                        key=lambda r: abs(r.residual) / r.tail_bound,
                    )
                    res.append(abs(worst.residual))
                    bad += not worst.within_bound
                    print(f"q={q:3d} delta={d} T={T} sign={s:+d}  worst j={worst.j:3d} "
                          f"residual={worst.residual:+.3e} tail_bound={worst.tail_bound:.3e}")
    print(f"\n{len(res)} cases, {bad} outside the tail bound, median worst |residual| {statistics.median(res):.3e}")


if __name__ == "__main__":
    main()
