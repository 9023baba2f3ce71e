"""Pure-numpy reference kernels.

Every function here has a twin in ``_numba`` with the same signature and
semantics; the numba versions are loop-based, these are vectorised.
"""

import numpy as np

_CHUNK = 8192


def sos_envelope(n, dt, w_c, w_s, phi_c, phi_s, scale):
    out = np.empty(n, dtype=np.float64)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        t = np.arange(start, stop, dtype=np.float64) * dt
        c = np.cos(np.outer(t, w_c) + phi_c).sum(axis=1)
        s = np.cos(np.outer(t, w_s) + phi_s).sum(axis=1)
        out[start:stop] = scale * np.sqrt(c * c + s * s)
    return out


def argmax_rows(metrics):
    # np.argmax returns the first maximum, i.e. lowest index wins ties
    return np.argmax(metrics, axis=0).astype(np.int64)


def change_points(idx):
    return np.flatnonzero(idx[1:] != idx[:-1]).astype(np.int64) + 1


def crossings(x, level):
    above = x > level
    up = np.count_nonzero(~above[:-1] & above[1:])
    down = np.count_nonzero(above[:-1] & ~above[1:])
    return up, down


def dssc_walk(m1, m2, thr):
    """Switch-and-stay on down-crossings of the active branch.

    Returns the per-period active branch (0 or 1) and the period indices at
    which a switch was decided.
    """
    n = m1.shape[0]
    events = []
    for m in (m1, m2):
        events.append(np.flatnonzero((m[:-1] > thr) & (m[1:] < thr)) + 1)
    switches = []
    active = 0
    pos = 0
    while True:
        ev = events[active]
        k = np.searchsorted(ev, pos, side="right")
        if k >= ev.shape[0]:
            break
        pos = int(ev[k])
        switches.append(pos)
        active = 1 - active
    switches = np.asarray(switches, dtype=np.int64)
    flips = np.zeros(n, dtype=np.int64)
    flips[switches] = 1
    act = (np.cumsum(flips) % 2).astype(np.int8)
    return act, switches
