"""Medial-axis map at the midpoint of two points, against the closed form ``a^2``."""

import argparse

from compconv.bench import bench_mma_two_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a-cells", type=int, nargs="+", default=[5, 10, 20])
    ap.add_argument("--lambda", dest="lam", type=float, nargs="+", default=[1.0, 8.0])
    a = ap.parse_args()
    for n in a.a_cells:
        r = bench_mma_two_point(n, tuple(a.lam))
        vals = "  ".join(f"lam={k}: {v['midpoint']:.2f}" for k, v in r["values"].items())
        print(f"a={r['a']:g}  a^2={r['a'] ** 2:g}  {vals}")


if __name__ == "__main__":
    main()
