"""Stable-ridge heights on a straight edge and at a right-angle tip as the grid is refined."""

import argparse

from compconv.bench import bench_corner


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=8.0)
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--h", type=float, nargs="+", default=[0.25, 0.125, 0.0625])
    a = ap.parse_args()
    print(f"{'h':>8}{'edge max':>10}{'mu1':>8}{'tip':>8}{'mu2':>8}")
    for h in a.h:
        r = bench_corner(a.lam, a.tau, h)
        print(f"{h:>8g}{r['edge_max']:>10.4f}{r['mu1']:>8.4f}{r['corner_tip']:>8.4f}{r['mu2']:>8.4f}")


if __name__ == "__main__":
    main()
