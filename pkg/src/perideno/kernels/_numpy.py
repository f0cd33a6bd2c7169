"""Vectorised numpy implementations of the integer kernels.

Every function here has a twin in ``_numba`` with the same signature and
bit-identical output; ``perideno.kernels`` picks one at import time.
"""
import numpy as np


def sort_sign(exps):
    exps = np.asarray(exps, dtype=np.int64)
    m, n = exps.shape
    dom = -np.sort(-exps, axis=1)
    inv = np.zeros(m, dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += exps[:, i] < exps[:, j]
    regular = np.all(dom[:, :-1] != dom[:, 1:], axis=1) if n > 1 else np.ones(m, bool)
    sign = np.where(regular, 1 - 2 * (inv & 1), 0).astype(np.int64)
    return dom, sign


def geometric_lattice(starts, budgets, gammas, degs, flips):
    starts = np.asarray(starts, dtype=np.int64)
    budgets = np.asarray(budgets, dtype=np.int64)
    gammas = np.asarray(gammas, dtype=np.int64).reshape(-1, starts.shape[1])
    degs = np.asarray(degs, dtype=np.int64).reshape(len(starts), -1)
    flips = np.asarray(flips, dtype=np.int64)

    keep = budgets >= 0
    origin = np.nonzero(keep)[0]
    rows = starts[keep]
    rem = budgets[keep]
    parity = np.zeros(len(rows), dtype=np.int64)
    for k in range(len(gammas)):
        d = degs[origin, k]
        counts = rem // d + 1
        idx = np.repeat(np.arange(len(rows)), counts)
        first = np.repeat(np.cumsum(counts) - counts, counts)
        mult = np.arange(len(idx), dtype=np.int64) - first
        rows = rows[idx] - mult[:, None] * gammas[k]
        rem = rem[idx] - mult * d[idx]
        parity = parity[idx] + mult * flips[k]
        origin = origin[idx]
    signs = np.where(parity & 1, -1, 1).astype(np.int64)
    return rows, signs, origin


def merge(keys, coeffs):
    keys = np.asarray(keys, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if len(keys) == 0:
        return keys, coeffs
    uniq, inv = np.unique(keys, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(acc, inv, coeffs)
    nz = acc != 0
    return uniq[nz], acc[nz]


def convolve(exps_a, ca, deg_a, exps_b, cb, deg_b, cutoff):
    """All pairwise products whose degree is <= cutoff, unmerged."""
    exps_a = np.asarray(exps_a, dtype=np.int64)
    exps_b = np.asarray(exps_b, dtype=np.int64)
    out_e, out_c = [], []
    # chunk rows of a to bound the m1*m2*n temporary
    step = max(1, 4_000_000 // max(1, len(exps_b) * max(1, exps_a.shape[1])))
    for s in range(0, len(exps_a), step):
        deg = deg_a[s:s + step, None] + deg_b[None, :]
        ia, ib = np.nonzero(deg <= cutoff)
        ia += s
        out_e.append(exps_a[ia] + exps_b[ib])
        out_c.append(ca[ia] * cb[ib])
    if not out_e:
        return np.zeros((0, exps_a.shape[1]), np.int64), np.zeros(0, np.int64)
    return np.concatenate(out_e), np.concatenate(out_c)
