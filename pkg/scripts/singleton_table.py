"""Upper transform of a one-cell set: sup error, support error and time per scheme."""

import argparse

from compconv.bench import bench_singleton


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.01)
    ap.add_argument("--size", type=int, default=41)
    ap.add_argument("--dual-h", type=float, default=1e-3)
    a = ap.parse_args()
    res = bench_singleton(a.lam, a.size, a.dual_h)
    print(f"{'scheme':<18}{'e_Linf':>10}{'e_H':>10}{'seconds':>10}")
    for name, row in res["schemes"].items():
        print(f"{name:<18}{row['e_linf']:>10.4f}{row['e_h']:>10.4f}{row['seconds']:>10.3f}")


if __name__ == "__main__":
    main()
