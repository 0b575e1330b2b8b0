"""Vectorised numpy versions of the hot image kernels.

Every function here has a loop-level twin in ``_numba``; the two must agree
to rounding error.
"""

import numpy as np


def filter_valid(x, g):
    """Separable 'valid' correlation of a 2-D plane with the 1-D taps ``g``."""
    k = g.shape[0]
    h, w = x.shape
    rows = np.zeros((h, w - k + 1))
    for t in range(k):
        rows += g[t] * x[:, t:t + w - k + 1]
    out = np.zeros((h - k + 1, w - k + 1))
    for t in range(k):
        out += g[t] * rows[t:t + h - k + 1, :]
    return out


def ssim_maps(x, y, g, c1, c2):
    """Per-window SSIM and contrast-structure maps over the valid region."""
    mu1 = filter_valid(x, g)
    mu2 = filter_valid(y, g)
    s11 = filter_valid(x * x, g) - mu1 * mu1
    s22 = filter_valid(y * y, g) - mu2 * mu2
    s12 = filter_valid(x * y, g) - mu1 * mu2
    cs = (2.0 * s12 + c2) / (s11 + s22 + c2)
    lum = (2.0 * mu1 * mu2 + c1) / (mu1 * mu1 + mu2 * mu2 + c1)
    return lum * cs, cs


def block_mean(x, f):
    """Non-overlapping f x f mean pooling; a trailing partial block is dropped."""
    h, w = x.shape[0] // f, x.shape[1] // f
    blocks = x[:h * f, :w * f].reshape(h, f, w, f)
    return blocks.sum(axis=(1, 3)) / (f * f)


def _prewitt_magnitude(x):
    h, w = x.shape
    # columns 0 and 2 of the window, summed down the three rows
    left = x[0:h - 2, 0:w - 2] + x[1:h - 1, 0:w - 2] + x[2:h, 0:w - 2]
    right = x[0:h - 2, 2:w] + x[1:h - 1, 2:w] + x[2:h, 2:w]
    top = x[0:h - 2, 0:w - 2] + x[0:h - 2, 1:w - 1] + x[0:h - 2, 2:w]
    bottom = x[2:h, 0:w - 2] + x[2:h, 1:w - 1] + x[2:h, 2:w]
    gx = (left - right) / 3.0
    gy = (top - bottom) / 3.0
    return np.sqrt(gx * gx + gy * gy)


def gms_map(x, y, c):
    """Gradient-magnitude similarity map of two planes (Prewitt, valid region)."""
    gr = _prewitt_magnitude(x)
    gd = _prewitt_magnitude(y)
    return (2.0 * gr * gd + c) / (gr * gr + gd * gd + c)
