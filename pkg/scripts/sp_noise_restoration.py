"""Salt-and-pepper restoration PSNR over noise densities for the parabola and convex routes."""

import argparse

from compconv.bench import bench_sp_noise, synthetic_image
from compconv.grid import ScalarGrid
from compconv.io import read_grid


def load(path):
    if path:
        return read_grid(path)
    try:
        from skimage import data
    except ImportError:
        return synthetic_image()
    return ScalarGrid(data.camera().astype(float))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inp", help="8-bit image (PGM/fgrid/CSV); camera or a test card otherwise")
    ap.add_argument("--density", type=float, nargs="+", default=[0.4, 0.6, 0.7, 0.8])
    ap.add_argument("--lambda", dest="lam", type=float, default=20.0)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    img = load(a.inp)
    print(f"{'density':>8}{'noisy':>9}{'moreau':>9}{'oberman':>9}{'t_m':>7}{'t_o':>7}")
    for d in a.density:
        r = bench_sp_noise(img, d, a.lam, seed=a.seed)
        m, o = r["schemes"]["moreau-parabola"], r["schemes"]["oberman"]
        print(f"{d:>8.2f}{r['psnr_noisy']:>9.2f}{m['psnr']:>9.2f}{o['psnr']:>9.2f}"
              f"{m['seconds']:>7.2f}{o['seconds']:>7.2f}")


if __name__ == "__main__":
    main()
