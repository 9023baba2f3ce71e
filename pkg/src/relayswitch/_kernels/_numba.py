"""numba-compiled kernels; see ``_numpy`` for the reference semantics."""

import numpy as np
from numba import njit

# oscillator phase is re-anchored with exact cos/sin every _BLOCK samples so
# rotation round-off stays ~1e-13
_BLOCK = 4096


@njit(cache=True)
def _accumulate(acc, dt, w_all, phi_all):
    n = acc.shape[0]
    for m in range(w_all.shape[0]):
        w = w_all[m]
        rc = np.cos(w * dt)
        rs = np.sin(w * dt)
        for start in range(0, n, _BLOCK):
            arg = w * (start * dt) + phi_all[m]
            re = np.cos(arg)
            im = np.sin(arg)
            for k in range(start, min(start + _BLOCK, n)):
                acc[k] += re
                re, im = re * rc - im * rs, im * rc + re * rs


@njit(cache=True)
def sos_envelope(n, dt, w_c, w_s, phi_c, phi_s, scale):
    c_sum = np.zeros(n)
    s_sum = np.zeros(n)
    _accumulate(c_sum, dt, w_c, phi_c)
    _accumulate(s_sum, dt, w_s, phi_s)
    out = np.empty(n)
    for k in range(n):
        out[k] = scale * np.sqrt(c_sum[k] * c_sum[k] + s_sum[k] * s_sum[k])
    return out


@njit(cache=True)
def argmax_rows(metrics):
    n_rows, n = metrics.shape
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        best = 0
        best_val = metrics[0, k]
        for i in range(1, n_rows):
            if metrics[i, k] > best_val:
                best = i
                best_val = metrics[i, k]
        out[k] = best
    return out


@njit(cache=True)
def change_points(idx):
    n = idx.shape[0]
    tmp = np.empty(max(n - 1, 0), dtype=np.int64)
    count = 0
    for k in range(1, n):
        if idx[k] != idx[k - 1]:
            tmp[count] = k
            count += 1
    return tmp[:count].copy()


@njit(cache=True)
def crossings(x, level):
    up = 0
    down = 0
    prev = x[0] > level
    for k in range(1, x.shape[0]):
        cur = x[k] > level
        if cur and not prev:
            up += 1
        elif prev and not cur:
            down += 1
        prev = cur
    return up, down


@njit(cache=True)
def dssc_walk(m1, m2, thr):
    n = m1.shape[0]
    act = np.empty(n, dtype=np.int8)
    tmp = np.empty(n, dtype=np.int64)
    count = 0
    active = 0
    # first period can never trigger a switch
    prev_above = False
    for k in range(n):
        cur = m1[k] if active == 0 else m2[k]
        act[k] = active
        if prev_above and cur < thr:
            tmp[count] = k
            count += 1
            active = 1 - active
            act[k] = active
            cur = m1[k] if active == 0 else m2[k]
        prev_above = cur > thr
    return act, tmp[:count].copy()
