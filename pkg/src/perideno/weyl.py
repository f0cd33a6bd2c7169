"""Antisymmetrisation over W = S_n and the objects of the thin-identity proof.

``F_W(a) = sum_w sgn(w) w(a)``.  For a monomial with regular exponent,
``F_W(e^lam) = sgn(u) F_W(e^mu)`` where ``mu`` is ``lam`` sorted decreasingly
and ``u`` the sorting permutation; non-regular exponents vanish.  That closed
form is the fast path; :func:`antisymmetrize_naive` is the literal n!-loop.
"""
from __future__ import annotations

import itertools
import math
from enum import Enum
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import AntiInvarianceViolation
from .lattice import LaurentPoly, Permutation, Weight, binomial_product, eps_sum, wneg
from .roots import Borel, index_sets, make_root_datum


def is_regular(lam: Weight) -> bool:
    return len(set(lam)) == len(lam)


def regular_part(p: LaurentPoly) -> LaurentPoly:
    return p.restrict(is_regular)


@lru_cache(maxsize=None)
def _all_perms(n: int) -> tuple[np.ndarray, np.ndarray]:
    imgs = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    _, signs = kernels.sort_sign(imgs)
    # sort_sign measures inversions against decreasing order; flip for increasing
    flip = 1 if (n * (n - 1) // 2) % 2 == 0 else -1
    return imgs, signs * flip


def orbit_sum(mu: Weight, coeff=1) -> LaurentPoly:
    """``coeff * F_W(e^mu)`` written out term by term."""
    n = len(mu)
    if not is_regular(mu):
        return LaurentPoly.zero(n)
    imgs, signs = _all_perms(n)
    exps = np.empty_like(imgs)
    exps[np.arange(len(imgs))[:, None], imgs] = np.asarray(mu, dtype=np.int64)[None, :]
    return LaurentPoly._raw(n, {tuple(row): coeff * int(s) for row, s in zip(exps.tolist(), signs)})


def alternant_coefficients(p: LaurentPoly) -> dict[Weight, object]:
    """Coefficients ``c_mu`` with ``F_W(p) = sum c_mu F_W(e^mu)`` over strictly
    decreasing ``mu`` (no n!-loop)."""
    if not p:
        return {}
    exps, coeffs = p.to_arrays()
    dom, sign = kernels.sort_sign(exps)
    out: dict[Weight, object] = {}
    for row, s, c in zip(dom.tolist(), sign.tolist(), coeffs):
        if s:
            key = tuple(row)
            v = out.get(key, 0) + s * c
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def antisymmetrize(p: LaurentPoly, n: int | None = None) -> LaurentPoly:
    """``F_W(p)`` over the full symmetric group S_n."""
    if n is not None and n != p.n:
        raise ValueError(f"polynomial lives in Z^{p.n}, not Z^{n}")
    out = LaurentPoly.zero(p.n)
    for mu, c in alternant_coefficients(p).items():
        out = out + orbit_sum(mu, c)
    return out


def antisymmetrize_naive(p: LaurentPoly) -> LaurentPoly:
    out = LaurentPoly.zero(p.n)
    for w in Permutation.all(p.n):
        out = out + p.act(w).scale(w.sign)
    return out


def antisymmetrize_over(p: LaurentPoly, perms) -> LaurentPoly:
    """``sum sgn(w) w(p)`` over an explicit list of permutations."""
    out = LaurentPoly.zero(p.n)
    for w in perms:
        out = out + p.act(w).scale(w.sign)
    return out


def adjacent_transpositions(n: int) -> list[Permutation]:
    return [Permutation.transposition(n, i, i + 1) for i in range(1, n)]


def anti_invariance_witness(p: LaurentPoly) -> Permutation | None:
    """First adjacent transposition s with ``s.p != -p``, else None."""
    neg = -p
    for s in adjacent_transpositions(p.n):
        if p.act(s) != neg:
            return s
    return None


def orbit_decompose(p: LaurentPoly) -> list[tuple[Weight, object]]:
    """Write an anti-invariant ``p`` as ``sum c_mu F_W(e^mu)``.

    Returns ``[(mu, c_mu)]`` with ``mu`` strictly decreasing, sorted by ``mu``
    descending.  Raises :class:`AntiInvarianceViolation` otherwise.
    """
    s = anti_invariance_witness(p)
    if s is not None:
        raise AntiInvarianceViolation(f"not W-anti-invariant under {s}", transposition=s)
    dominant = [(mu, c) for mu, c in p.items() if all(a > b for a, b in zip(mu, mu[1:]))]
    return sorted(dominant, reverse=True)


def reassemble(orbits) -> LaurentPoly | None:
    out = None
    for mu, c in orbits:
        term = orbit_sum(mu, c)
        out = term if out is None else out + term
    return out


# -- coset families ------------------------------------------------------------


class CosetKind(str, Enum):
    FULL = "full"
    MOD_LAST = "mod_last"  # S_n / S_{n-1}, S_{n-1} fixing slot 1
    MOD_IOTA = "mod_iota"  # S_n / iota(S_r)


def iota(n: int, sigma: Permutation) -> Permutation:
    """Embed ``sigma in S_r`` into S_n acting on 1..r and, mirrored, on n..n+1-r."""
    r = sigma.n
    if 2 * r > n:
        raise ValueError(f"cannot embed S_{r} into S_{n}")
    imgs = list(range(1, n + 1))
    for i in range(1, r + 1):
        imgs[i - 1] = sigma(i)
        imgs[n - i] = n + 1 - sigma(i)
    return Permutation(tuple(imgs))


def slot_one_stabilizer(n: int) -> list[Permutation]:
    """S_{n-1} permuting 2..n."""
    return [Permutation((1,) + tuple(p)) for p in itertools.permutations(range(2, n + 1))]


def coset_representatives(kind: CosetKind | str, n: int, r: int | None = None) -> list[Permutation]:
    kind = CosetKind(kind)
    if kind is CosetKind.FULL:
        return list(Permutation.all(n))
    if kind is CosetKind.MOD_LAST:
        # k -> k-1 -> ... -> 1 -> k sends slot 1 to slot k
        return [Permutation.cycle(n, *range(k, 0, -1)) for k in range(1, n + 1)]
    if r is None:
        raise ValueError("MOD_IOTA needs r")
    tail = list(range(n - r + 1, n + 1))
    return [w for w in Permutation.all(n) if all(w(a) < w(b) for a, b in zip(tail, tail[1:]))]


# -- the polynomial A and the constant j -------------------------------------


def compute_A(n: int) -> LaurentPoly:
    """``e^{eps_1+...+eps_r} prod_{(i,j) in U} (1 - e^{eps_i + eps_j})``."""
    d = make_root_datum(n, Borel.THIN)
    U = index_sets(d)["U"]
    factors = [(wneg(eps_sum(n, [i, j])), -1) for i, j in U]
    return binomial_product(factors, n).shift(eps_sum(n, range(1, d.r + 1)))


def supp_A_bounds(n: int) -> list[tuple[int, int]]:
    """Per-coordinate ``(lo, hi)`` for the exponents of A."""
    r = n // 2
    out = []
    for i in range(1, n + 1):
        if i <= r:
            out.append((1, n - 1))
        elif i >= n + 1 - r:
            out.append((0, n - 2))
        else:
            out.append((0, n - 1))
    return out


def supp_A_violations(n: int, A: LaurentPoly | None = None) -> list[Weight]:
    A = compute_A(n) if A is None else A
    bounds = supp_A_bounds(n)
    return sorted(w for w in A.support() if not all(lo <= k <= hi for k, (lo, hi) in zip(w, bounds)))


def j_value(n: int, A: LaurentPoly | None = None) -> int:
    """``j = sum_{y in S_n} sgn(y) a_{y rho}``, by explicit loop over S_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A = compute_A(n) if A is None else A
    rho = make_root_datum(n, Borel.THIN).rho
    return sum(w.sign * A.coeff(w.act(rho)) for w in Permutation.all(n))


def j_value_by_cosets(n: int, A: LaurentPoly | None = None) -> int:
    """``r! * sum_{y in S_n / S_r} sgn(y) a_{y rho}``."""
    A = compute_A(n) if A is None else A
    r = n // 2
    rho = make_root_datum(n, Borel.THIN).rho
    reps = coset_representatives(CosetKind.MOD_IOTA, n, r)
    return math.factorial(r) * sum(y.sign * A.coeff(y.act(rho)) for y in reps)
