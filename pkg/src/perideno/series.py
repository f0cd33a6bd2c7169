"""Rational expressions ``N / prod (1 + c e^{-gamma})`` and their evaluation.

Two strategies are offered: exact clearing of denominators into Laurent
polynomials, and truncated geometric expansion in the domain where every
``e^{-gamma}`` has positive degree under a grading.  Because every
denominator factor is a binomial, expanding a monomial is a lattice-point
enumeration, which runs in :func:`perideno.kernels.geometric_lattice`.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch, IndivisibleDenominator, NonExpandableFactor
from .lattice import GradingVector, LaurentPoly, Permutation, Weight, binomial_product, mul_truncated

Factor = tuple[Weight, int]  # 1 + c * e^{-gamma}, c = -1 or +1


def _check_factor(f: Factor, n: int) -> Factor:
    gamma, c = f
    gamma = tuple(int(x) for x in gamma)
    if len(gamma) != n:
        raise DimensionMismatch(f"factor weight {gamma} is not in Z^{n}")
    if not any(gamma):
        raise ValueError("denominator factor with gamma = 0")
    if c not in (-1, 1):
        raise ValueError(f"factor coefficient must be +-1, got {c}")
    return gamma, int(c)


@dataclass(frozen=True)
class RationalExpr:
    """``numerator / prod (1 + c e^{-gamma})``; denominators form a sorted multiset."""

    numerator: LaurentPoly
    denominators: tuple[Factor, ...] = ()

    def __post_init__(self):
        n = self.numerator.n
        dens = tuple(sorted(_check_factor(f, n) for f in self.denominators))
        object.__setattr__(self, "denominators", dens)

    @classmethod
    def monomial_over(cls, weight: Weight, factors: Iterable[Factor] = (), coeff=1) -> "RationalExpr":
        return cls(LaurentPoly.monomial(weight, coeff), tuple(factors))

    @property
    def n(self) -> int:
        return self.numerator.n

    def act(self, w: Permutation) -> "RationalExpr":
        return RationalExpr(self.numerator.act(w), tuple((w.act(g), c) for g, c in self.denominators))

    def scale(self, c) -> "RationalExpr":
        return RationalExpr(self.numerator.scale(c), self.denominators)

    def __mul__(self, other: "RationalExpr") -> "RationalExpr":
        return RationalExpr(self.numerator * other.numerator, self.denominators + other.denominators)

    def normalize(self) -> "RationalExpr":
        """Cancel denominator factors that divide the numerator exactly."""
        num, kept = self.numerator, []
        for g, c in self.denominators:
            q = divide_binomial(num, g, c)
            if q is None:
                kept.append((g, c))
            else:
                num = q
        return RationalExpr(num, tuple(kept))

    def is_polynomial(self) -> bool:
        return not self.denominators


def divide_binomial(p: LaurentPoly, gamma: Weight, c: int) -> LaurentPoly | None:
    """Exact quotient ``p / (1 + c e^{-gamma})`` or None if it leaves a remainder."""
    if not p:
        return p
    i0 = next(i for i, x in enumerate(gamma) if x)
    g0 = gamma[i0]
    lines: dict[Weight, dict[int, object]] = {}
    for lam, a in p.items():
        k = lam[i0] // g0
        base = tuple(x - k * g for x, g in zip(lam, gamma))
        lines.setdefault(base, {})[k] = a
    out = {}
    for base, coeffs in lines.items():
        kmin, kmax = min(coeffs), max(coeffs)
        q_next = 0
        for k in range(kmax, kmin - 1, -1):
            q = coeffs.get(k, 0) - c * q_next
            if k == kmin:
                if q:
                    return None
            elif q:
                out[tuple(x + k * g for x, g in zip(base, gamma))] = q
            q_next = q
    return LaurentPoly._raw(p.n, out)


# -- truncated series ----------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """A formal series known exactly in all degrees ``<= cutoff``.

    ``floor`` is a lower bound for the degrees of the full (untruncated)
    series; None means the series is exactly zero.
    """

    phi: GradingVector
    cutoff: int
    poly: LaurentPoly
    floor: int | None

    def __post_init__(self):
        if self.poly and self.poly.min_degree(self.phi) is not None:
            hi = max(self.phi.degree(w) for w in self.poly.support())
            if hi > self.cutoff:
                raise ValueError("series stores terms above its cutoff")

    @property
    def n(self) -> int:
        return self.poly.n

    def restrict(self, cutoff: int) -> "TruncatedSeries":
        if cutoff > self.cutoff:
            raise ValueError(f"cannot extend a series known up to {self.cutoff} to {cutoff}")
        return TruncatedSeries(self.phi, cutoff, self.poly.truncate(self.phi, cutoff), self.floor)

    def _same(self, other):
        if self.phi.phi != other.phi.phi:
            raise ValueError("series expanded under different gradings")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._same(other)
        cut = min(self.cutoff, other.cutoff)
        floors = [f for f in (self.floor, other.floor) if f is not None]
        poly = (self.poly + other.poly).truncate(self.phi, cut)
        return TruncatedSeries(self.phi, cut, poly, min(floors) if floors else None)

    def __neg__(self):
        return TruncatedSeries(self.phi, self.cutoff, -self.poly, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.phi, self.cutoff, self.poly.scale(c), self.floor if c else None)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._same(other)
        if self.floor is None or other.floor is None:
            return TruncatedSeries(self.phi, min(self.cutoff, other.cutoff), LaurentPoly.zero(self.n), None)
        cut = min(self.cutoff + other.floor, other.cutoff + self.floor)
        poly = mul_truncated(self.poly, other.poly, self.phi, cut)
        return TruncatedSeries(self.phi, cut, poly, self.floor + other.floor)


def series_diff(a: TruncatedSeries | LaurentPoly, b: TruncatedSeries | LaurentPoly, phi: GradingVector | None = None,
                limit: int | None = 5) -> list[tuple[int, Weight, object, object]]:
    """Monomials where ``a`` and ``b`` differ, ordered by (degree, weight).

    Series are compared up to their common cutoff.
    """
    if isinstance(a, TruncatedSeries) or isinstance(b, TruncatedSeries):
        cuts = [s.cutoff for s in (a, b) if isinstance(s, TruncatedSeries)]
        phi = next(s.phi for s in (a, b) if isinstance(s, TruncatedSeries))
        cut = min(cuts)
        pa = a.poly if isinstance(a, TruncatedSeries) else a
        pb = b.poly if isinstance(b, TruncatedSeries) else b
        pa, pb = pa.truncate(phi, cut), pb.truncate(phi, cut)
    else:
        pa, pb = a, b
    diff = pa - pb
    keyed = sorted(((phi.degree(w) if phi else 0, w) for w in diff.support()))
    if limit is not None:
        keyed = keyed[:limit]
    return [(d, w, pa.coeff(w), pb.coeff(w)) for d, w in keyed]


# -- expansion ----------------------------------------------------------------


def _factor_degrees(phi: GradingVector, gammas: Sequence[Weight]) -> list[int]:
    degs = [phi.pair(g) for g in gammas]
    for g, d in zip(gammas, degs):
        if d <= 0:
            raise NonExpandableFactor(f"<phi, {g}> = {d}: factor has no expansion under phi={phi.phi}")
    return degs


def _expand_batch(expr: RationalExpr, weighted_perms: Sequence[tuple[Permutation, object]], phi: GradingVector,
                  cutoff: int) -> LaurentPoly:
    """``sum coeff_w * w(expr)`` expanded up to ``cutoff``.

    Enumeration runs in the frame of ``expr``; each w-image is then obtained
    by permuting columns, which is exact because w is a ring automorphism.
    """
    n = expr.n
    num_exps, num_coeffs = expr.numerator.to_arrays()
    if not len(num_exps) or not weighted_perms:
        return LaurentPoly.zero(n)
    gammas = np.array([g for g, _ in expr.denominators], dtype=np.int64).reshape(-1, n)
    flips = np.array([1 if c == 1 else 0 for _, c in expr.denominators], dtype=np.int64)
    phi_arr = np.asarray(phi.phi, dtype=np.int64)

    # common denominator so the kernel path only sees integers
    scalars = [Fraction(s) * Fraction(c) for _, s in weighted_perms for c in num_coeffs]
    lcm = 1
    for q in scalars:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)

    starts, budgets, degs, coefs, gathers = [], [], [], [], []
    for w, s in weighted_perms:
        gi = w.gather_index()
        w_gammas = gammas[:, gi] if len(gammas) else gammas
        dw = (w_gammas @ phi_arr).tolist()
        if any(d <= 0 for d in dw):
            bad = next(tuple(g) for g, d in zip(w_gammas.tolist(), dw) if d <= 0)
            raise NonExpandableFactor(f"<phi, {bad}> <= 0 under phi={phi.phi}")
        w_num = num_exps[:, gi]
        budgets.append(cutoff + w_num @ phi_arr)  # cutoff - deg(w lam)
        starts.append(num_exps)
        degs.append(np.tile(np.asarray(dw, dtype=np.int64), (len(num_exps), 1)))
        coefs.extend(Fraction(s) * Fraction(c) * lcm for c in num_coeffs)
        gathers.append(np.tile(gi, (len(num_exps), 1)))
    starts = np.concatenate(starts)
    budgets = np.concatenate(budgets)
    degs = np.concatenate(degs).reshape(len(starts), len(gammas))
    gathers = np.concatenate(gathers)
    int_coefs = [int(q) for q in coefs]

    exps, signs, origin = kernels.geometric_lattice(starts, budgets, gammas, degs, flips)
    if not len(exps):
        return LaurentPoly.zero(n)
    exps = np.take_along_axis(exps, gathers[origin], axis=1)
    bound = max(abs(c) for c in int_coefs) * len(exps)
    if bound < kernels.INT64_SAFE:
        vals = signs * np.asarray(int_coefs, dtype=np.int64)[origin]
        exps, vals = kernels.merge_rows(exps, vals)
        terms = {tuple(row): int(v) for row, v in zip(exps.tolist(), vals.tolist())}
    else:  # pragma: no cover - needs astronomically large coefficients
        terms = {}
        for row, sg, o in zip(exps.tolist(), signs.tolist(), origin.tolist()):
            key = tuple(row)
            terms[key] = terms.get(key, 0) + sg * int_coefs[o]
        terms = {k: v for k, v in terms.items() if v}
    if lcm != 1:
        terms = {k: Fraction(v, lcm) for k, v in terms.items()}
    return LaurentPoly._raw(n, terms)


def _floor(expr: RationalExpr, phi: GradingVector, perms: Iterable[Permutation] = ()) -> int | None:
    degs = [phi.degree(w) for w in expr.numerator.support()]
    extra = [phi.degree(p.act(w)) for p in perms for w in expr.numerator.support()]
    vals = degs + extra
    return min(vals) if vals else None


def expand(expr: RationalExpr, phi: GradingVector, cutoff: int) -> TruncatedSeries:
    """Geometric expansion of ``expr`` in the domain ``|e^{-gamma}| < 1``."""
    _factor_degrees(phi, [g for g, _ in expr.denominators])
    poly = _expand_batch(expr, [(Permutation.identity(expr.n), 1)], phi, cutoff)
    return TruncatedSeries(phi, cutoff, poly, _floor(expr, phi))


def expand_naive(expr: RationalExpr, phi: GradingVector, cutoff: int) -> TruncatedSeries:
    """Reference expansion: multiply by one truncated geometric series at a
    time, last factor first.  Independent of the lattice kernel."""
    n = expr.n
    floor = _floor(expr, phi)
    acc = expr.numerator.truncate(phi, cutoff)
    for gamma, c in reversed(expr.denominators):
        d = _factor_degrees(phi, [gamma])[0]
        top = 0 if floor is None else max(0, (cutoff - floor) // d)
        geo = LaurentPoly(n, [(tuple(-m * x for x in gamma), (-c) ** m) for m in range(top + 1)])
        acc = mul_truncated(acc, geo, phi, cutoff)
    return TruncatedSeries(phi, cutoff, acc, floor)


def sum_antisymmetrized(exprs: Sequence[tuple[Permutation, RationalExpr]], phi: GradingVector,
                        cutoff: int) -> TruncatedSeries:
    """``sum sgn(w) expand(w . expr)`` over the given pairs."""
    if not exprs:
        raise ValueError("empty sum")
    n = exprs[0][1].n
    groups: dict[RationalExpr, list[tuple[Permutation, int]]] = {}
    for w, e in exprs:
        groups.setdefault(e, []).append((w, w.sign))
    poly = LaurentPoly.zero(n)
    floors = []
    for e, ws in groups.items():
        poly = poly + _expand_batch(e, ws, phi, cutoff)
        f = _floor(e, phi, [w for w, _ in ws])
        if f is not None:
            floors.append(f)
    return TruncatedSeries(phi, cutoff, poly, min(floors) if floors else None)


def antisymmetrized_series(expr: RationalExpr, phi: GradingVector, cutoff: int, scale=1) -> TruncatedSeries:
    """``scale * F_W(expr)`` expanded up to ``cutoff`` (all of S_n)."""
    perms = list(Permutation.all(expr.n))
    poly = _expand_batch(expr, [(w, w.sign * Fraction(scale)) for w in perms], phi, cutoff)
    return TruncatedSeries(phi, cutoff, poly, _floor(expr, phi, perms))


# -- exact clearing -----------------------------------------------------------


def _multiset_union(a: Sequence[Factor], b: Sequence[Factor]) -> list[Factor]:
    ca, cb = Counter(a), Counter(b)
    return sorted((ca | cb).elements())


def clear(expr: RationalExpr, clearing: Sequence[Factor]) -> LaurentPoly:
    """``expr * prod(clearing)`` as a Laurent polynomial.

    Raises :class:`IndivisibleDenominator` if some denominator factor does
    not divide the result.
    """
    pending = Counter(expr.denominators)
    extra = []
    for f in clearing:
        f = _check_factor(f, expr.n)
        if pending[f]:
            pending[f] -= 1
        else:
            extra.append(f)
    num = expr.numerator * binomial_product(extra, expr.n)
    for (g, c), k in pending.items():
        for _ in range(k):
            q = divide_binomial(num, g, c)
            if q is None:
                raise IndivisibleDenominator(f"factor (1 + {c} e^-{g}) survives clearing")
            num = q
    return num


def clear_and_compare(lhs: RationalExpr, rhs: RationalExpr, clearing: Sequence[Factor] | None = None) -> bool:
    """Exact equality test after multiplying both sides by ``clearing``
    (default: the multiset union of both denominators)."""
    if clearing is None:
        clearing = _multiset_union(lhs.denominators, rhs.denominators)
    return clear(lhs, clearing) == clear(rhs, clearing)
