"""Time the numba kernels against the numpy fallback on one image pair.

    python3 benchmarks/bench_kernels.py --height 384 --width 512 --repeat 20
"""

import argparse
import time

import numpy as np

from lfiqa.kernels import _numpy
from lfiqa.metrics import gaussian_taps

try:
    from lfiqa.kernels import _numba
except ImportError:
    _numba = None

C1 = (0.01 * 255) ** 2
C2 = (0.03 * 255) ** 2


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--height", type=int, default=384)
    ap.add_argument("--width", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    x = rng.uniform(0, 255, (args.height, args.width))
    y = np.clip(x + rng.normal(0, 10, x.shape), 0, 255)
    g = gaussian_taps(11, 1.5)

    cases = {
        "ssim_maps": lambda m: m.ssim_maps(x, y, g, C1, C2),
        "gms_map": lambda m: m.gms_map(x, y, 170.0),
        "block_mean(2)": lambda m: m.block_mean(x, 2),
    }
    backends = {"numpy": _numpy}
    if _numba is not None:
        backends["numba"] = _numba
    else:
        print("numba not installed; timing the numpy backend only")

    print(f"{args.height}x{args.width}, best of {args.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, case in cases.items():
        row = {}
        for bname, mod in backends.items():
            case(mod)  # warm-up, includes JIT compilation
            row[bname] = best_of(lambda: case(mod), args.repeat)
        line = f"{name:<16}" + "".join(f"{row[b] * 1e3:>10.2f}ms" for b in backends)
        if "numba" in row:
            line += f"{row['numpy'] / row['numba']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
