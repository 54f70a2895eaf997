#!/usr/bin/env python3
"""Print the proportion lower bounds side by side on a beta grid, plus their crossing points."""

import argparse

from lowzeros import bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--betas", default="0.3,0.4,0.5,0.55,0.6,0.75,0.909,1,1.5,2,5")
    args = ap.parse_args()
    betas = [float(b) for b in args.betas.split(",")]

    print(f"{'beta':>7} {'cor2':>9} {'shifted':>9} {'hr':>9} {'zhao':>9}")
    for b in betas:
        cells = []
        for name in ("cor2", "shifted", "hr", "zhao"):
            try:
                cells.append(f"{bounds.evaluate_bound(name, b):9.5f}")
            except (ValueError, ZeroDivisionError):
                cells.append(f"{'-':>9}")
        print(f"{b:7.3f} " + " ".join(cells))

    c, bstar = bounds.zhao_constants()
    print()
    print(f"hr positive from beta = {bounds.hr_positive_root():.6f}")
    print(f"hr limit at beta = 1e4: {bounds.hr_bound(1e4):.6f}")
    print(f"zhao branch switch {bstar:.6f}, constant {c:.6f}")
    print(f"zhao overtakes cor2 at beta = {bounds.crossing_finder('zhao', 'cor2', 0.51, 0.9):.6f}")


if __name__ == "__main__":
    main()
