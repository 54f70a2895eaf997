#!/usr/bin/env python3
"""Survey lowest zeros and S~ moments across prime moduli, with the GRH-conditional bounds beside them.

Zeros are kept in --cache-dir so repeated runs only pay for new moduli.
"""

import argparse
import math

from lowzeros import analysis, bounds
from lowzeros.zerocache import ZeroStore


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[101, 211, 401, 601, 997])
    ap.add_argument("--beta", type=float, default=0.3, help="height T = 2 pi beta / log q")
    ap.add_argument("--cache-dir", default="zero_cache")
    args = ap.parse_args()

    store = ZeroStore(args.cache_dir)
    print(f"{'q':>5} {'E[S~]':>9} {'thm1':>7} {'E[S~^2]':>9} {'thm2':>7} {'low min':>8} {'low max':>8} "
          f"{'P(<1/2)':>8}")
    for q in args.q:
        L = math.log(q)
        T = 2 * math.pi * args.beta / L
        es = analysis.ensemble_stats(q, T, store=store)
        d = L / (2 * math.pi)
        ip, im = bounds.thm2_integrals(T, d)
        t1 = bounds.thm1_bound(q, T).value
        t2 = bounds.thm2_bound(q, T, d, ip, im).value
        print(f"{q:5d} {es.mean_tilde_s:9.4f} {t1:7.3f} {es.mean_square_tilde_s:9.4f} {t2:7.3f} "
              f"{es.lowest_zero_min:8.4f} {es.lowest_zero_max:8.4f} {es.proportion[0.5]:8.3f}")
    print(f"\ncor2 lower bound for the share below 1/2: {bounds.cor2_lower_bound(0.5).value:.4f}")


if __name__ == "__main__":
    main()
