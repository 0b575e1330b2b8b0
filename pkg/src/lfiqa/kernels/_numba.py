"""Loop-level kernels compiled with numba.

Same contracts as ``_numpy``. ``nogil`` lets a thread pool score several
image pairs at once.
"""

import math

import numpy as np
from numba import njit

_jit = njit(cache=True, nogil=True)


@_jit
def filter_valid(x, g):
    k = g.shape[0]
    h, w = x.shape
    wo = w - k + 1
    ho = h - k + 1
    rows = np.zeros((h, wo))
    for i in range(h):
        for j in range(wo):
            acc = 0.0
            for t in range(k):
                acc += g[t] * x[i, j + t]
            rows[i, j] = acc
    out = np.zeros((ho, wo))
    for i in range(ho):
        for j in range(wo):
            acc = 0.0
            for t in range(k):
                acc += g[t] * rows[i + t, j]
            out[i, j] = acc
    return out


@_jit
def ssim_maps(x, y, g, c1, c2):
    mu1 = filter_valid(x, g)
    mu2 = filter_valid(y, g)
    e11 = filter_valid(x * x, g)
    e22 = filter_valid(y * y, g)
    e12 = filter_valid(x * y, g)
    ho, wo = mu1.shape
    smap = np.empty((ho, wo))
    cs = np.empty((ho, wo))
    for i in range(ho):
        for j in range(wo):
            m1 = mu1[i, j]
            m2 = mu2[i, j]
            s11 = e11[i, j] - m1 * m1
            s22 = e22[i, j] - m2 * m2
            s12 = e12[i, j] - m1 * m2
            v = (2.0 * s12 + c2) / (s11 + s22 + c2)
            cs[i, j] = v
            smap[i, j] = (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1) * v
    return smap, cs


@_jit
def block_mean(x, f):
    h = x.shape[0] // f
    w = x.shape[1] // f
    out = np.empty((h, w))
    inv = 1.0 / (f * f)
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for a in range(f):
                for b in range(f):
                    acc += x[i * f + a, j * f + b]
            out[i, j] = acc * inv
    return out


@_jit
def gms_map(x, y, c):
    h, w = x.shape
    out = np.empty((h - 2, w - 2))
    for i in range(h - 2):
        for j in range(w - 2):
            gx1 = 0.0
            gy1 = 0.0
            gx2 = 0.0
            gy2 = 0.0
            for t in range(3):
                gx1 += x[i + t, j] - x[i + t, j + 2]
                gy1 += x[i, j + t] - x[i + 2, j + t]
                gx2 += y[i + t, j] - y[i + t, j + 2]
                gy2 += y[i, j + t] - y[i + 2, j + t]
            gx1 /= 3.0
            gy1 /= 3.0
            gx2 /= 3.0
            gy2 /= 3.0
            g1 = math.sqrt(gx1 * gx1 + gy1 * gy1)
            g2 = math.sqrt(gx2 * gx2 + gy2 * gy2)
            out[i, j] = (2.0 * g1 * g2 + c) / (g1 * g1 + g2 * g2 + c)
    return out
