"""numba-compiled twins of the kernels in ``_numpy``."""
import numpy as np
from numba import njit


@njit(cache=True)
def _sort_sign(exps):
    # insertion sort into decreasing order; each shift is one inversion
    m, n = exps.shape
    dom = np.empty_like(exps)
    sign = np.empty(m, dtype=np.int64)
    for r in range(m):
        inv = 0
        regular = True
        for i in range(n):
            x = exps[r, i]
            j = i
            while j > 0 and dom[r, j - 1] < x:
                dom[r, j] = dom[r, j - 1]
                j -= 1
                inv += 1
            if j > 0 and dom[r, j - 1] == x:
                regular = False
            dom[r, j] = x
        sign[r] = (1 - 2 * (inv & 1)) if regular else 0
    return dom, sign


def sort_sign(exps):
    return _sort_sign(np.ascontiguousarray(exps, dtype=np.int64))


@njit(cache=True)
def _lattice_walk(starts, budgets, gammas, degs, flips, out, signs, origin, fill):
    # Odometer over m in N^k with sum(m*deg) <= budget; first pass counts only.
    s_count, n = starts.shape
    k = gammas.shape[0]
    total = 0
    m = np.zeros(k, dtype=np.int64)
    cur = np.empty(n, dtype=np.int64)
    for s in range(s_count):
        rem = budgets[s]
        if rem < 0:
            continue
        for i in range(n):
            cur[i] = starts[s, i]
        m[:] = 0
        parity = 0
        while True:
            if fill:
                for i in range(n):
                    out[total, i] = cur[i]
                signs[total] = -1 if parity & 1 else 1
                origin[total] = s
            total += 1
            j = k - 1
            while j >= 0:
                d = degs[s, j]
                if rem >= d:
                    m[j] += 1
                    rem -= d
                    parity += flips[j]
                    for i in range(n):
                        cur[i] -= gammas[j, i]
                    break
                rem += m[j] * d
                parity -= m[j] * flips[j]
                for i in range(n):
                    cur[i] += m[j] * gammas[j, i]
                m[j] = 0
                j -= 1
            if j < 0:
                break
    return total


def geometric_lattice(starts, budgets, gammas, degs, flips):
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    n = starts.shape[1]
    budgets = np.ascontiguousarray(budgets, dtype=np.int64)
    gammas = np.ascontiguousarray(gammas, dtype=np.int64).reshape(-1, n)
    degs = np.ascontiguousarray(degs, dtype=np.int64).reshape(len(starts), -1)
    flips = np.ascontiguousarray(flips, dtype=np.int64)
    dummy = np.zeros((0, n), np.int64)
    z = np.zeros(0, np.int64)
    total = _lattice_walk(starts, budgets, gammas, degs, flips, dummy, z, z, False)
    out = np.empty((total, n), np.int64)
    signs = np.empty(total, np.int64)
    origin = np.empty(total, np.int64)
    _lattice_walk(starts, budgets, gammas, degs, flips, out, signs, origin, True)
    return out, signs, origin


@njit(cache=True)
def _merge(keys, coeffs):
    m = len(keys)
    uk = np.empty(m, np.int64)
    uc = np.empty(m, np.int64)
    if m == 0:
        return uk, uc
    lo = keys.min()
    span = keys.max() - lo + 1
    cnt = 0
    if span <= 8 * m + 4096:
        # packed keys are usually dense: accumulate into a table, no sort
        acc = np.zeros(span, np.int64)
        for i in range(m):
            acc[keys[i] - lo] += coeffs[i]
        for v in range(span):
            if acc[v] != 0:
                uk[cnt] = v + lo
                uc[cnt] = acc[v]
                cnt += 1
        return uk[:cnt], uc[:cnt]
    order = np.argsort(keys)  # sums do not depend on tie order
    i = 0
    while i < m:
        key = keys[order[i]]
        total = 0
        while i < m and keys[order[i]] == key:
            total += coeffs[order[i]]
            i += 1
        if total != 0:
            uk[cnt] = key
            uc[cnt] = total
            cnt += 1
    return uk[:cnt], uc[:cnt]


def merge(keys, coeffs):
    return _merge(np.ascontiguousarray(keys, dtype=np.int64),
                  np.ascontiguousarray(coeffs, dtype=np.int64))


@njit(cache=True)
def _convolve(exps_a, ca, deg_a, exps_b, cb, deg_b, cutoff):
    n = exps_a.shape[1]
    total = 0
    for i in range(len(ca)):
        for j in range(len(cb)):
            if deg_a[i] + deg_b[j] <= cutoff:
                total += 1
    out = np.empty((total, n), np.int64)
    coeffs = np.empty(total, np.int64)
    t = 0
    for i in range(len(ca)):
        for j in range(len(cb)):
            if deg_a[i] + deg_b[j] <= cutoff:
                for c in range(n):
                    out[t, c] = exps_a[i, c] + exps_b[j, c]
                coeffs[t] = ca[i] * cb[j]
                t += 1
    return out, coeffs


def convolve(exps_a, ca, deg_a, exps_b, cb, deg_b, cutoff):
    c = np.ascontiguousarray
    return _convolve(c(exps_a, np.int64), c(ca, np.int64), c(deg_a, np.int64),
                     c(exps_b, np.int64), c(cb, np.int64), c(deg_b, np.int64),
                     np.int64(cutoff))
