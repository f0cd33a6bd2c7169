"""Exact arithmetic on the weight lattice Z^n.

A weight is a plain tuple of ints; position ``i - 1`` holds the coefficient of
``eps_i``.  Everything index-facing (permutation images, cycles, root pairs)
is 1-based so it reads like the usual ``eps_1 .. eps_n`` notation.

Coefficients are exact: Python ``int`` where possible, ``fractions.Fraction``
otherwise.  Both compare equal across types, so no normalisation is needed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NonExpandableFactor

Weight = tuple[int, ...]

# products smaller than this stay in pure-Python dict arithmetic
_KERNEL_MIN_WORK = 20_000


def unit(n: int, i: int) -> Weight:
    """``eps_i`` in Z^n (1-based)."""
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def zero_weight(n: int) -> Weight:
    return (0,) * n


def wadd(a: Weight, b: Weight) -> Weight:
    if len(a) != len(b):
        raise DimensionMismatch(f"weights of length {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def wsub(a: Weight, b: Weight) -> Weight:
    if len(a) != len(b):
        raise DimensionMismatch(f"weights of length {len(a)} and {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def wneg(a: Weight) -> Weight:
    return tuple(-x for x in a)


def wscale(k: int, a: Weight) -> Weight:
    return tuple(k * x for x in a)


def wsum(weights: Iterable[Weight], n: int) -> Weight:
    out = [0] * n
    for w in weights:
        if len(w) != n:
            raise DimensionMismatch(f"weight {w} is not in Z^{n}")
        for i, x in enumerate(w):
            out[i] += x
    return tuple(out)


def eps_sum(n: int, indices: Iterable[int]) -> Weight:
    """``sum eps_i`` over the given 1-based indices (with multiplicity)."""
    out = [0] * n
    for i in indices:
        out[i - 1] += 1
    return tuple(out)


def _coerce(c) -> Rational:
    if isinstance(c, Rational):
        return c
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not an exact rational")


def format_coeff(c) -> str:
    q = Fraction(c)
    return f"{q.numerator}/{q.denominator}"


# -- permutations --------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}; ``images[i - 1]`` is the image of ``i``.

    Acts on weights by ``w(eps_i) = eps_{w(i)}``, i.e. ``(w lam)_{w(i)} = lam_i``.
    """

    images: tuple[int, ...]
    sign: int = field(init=False, compare=False)

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"{imgs} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "sign", _cycle_sign(imgs))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def cycle(cls, n: int, *points: int) -> "Permutation":
        """The cycle ``points[0] -> points[1] -> ... -> points[0]``."""
        imgs = list(range(1, n + 1))
        for a, b in zip(points, points[1:] + points[:1]):
            imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        return cls.cycle(n, i, j)

    @classmethod
    def all(cls, n: int) -> Iterator["Permutation"]:
        for p in itertools.permutations(range(1, n + 1)):
            yield cls(p)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition ``self o other`` (apply ``other`` first)."""
        if self.n != other.n:
            raise DimensionMismatch("permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def act(self, lam: Weight) -> Weight:
        if len(lam) != self.n:
            raise DimensionMismatch(f"weight of length {len(lam)} vs S_{self.n}")
        out = [0] * self.n
        for i, x in enumerate(lam):
            out[self.images[i] - 1] = x
        return tuple(out)

    def gather_index(self) -> np.ndarray:
        """0-based column index ``idx`` with ``(w lam) = lam[idx]``."""
        inv = self.inverse().images
        return np.asarray(inv, dtype=np.int64) - 1

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def _cycle_sign(imgs) -> int:
    seen = [False] * len(imgs)
    cycles = 0
    for start in range(len(imgs)):
        if not seen[start]:
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = imgs[k] - 1
    return -1 if (len(imgs) - cycles) % 2 else 1


def transposition_count_sign(images: Iterable[int]) -> int:
    """Sign by bubble-sorting and counting swaps (slow reference)."""
    a = list(images)
    swaps = 0
    for i in range(len(a)):
        for j in range(len(a) - 1 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                swaps += 1
    return -1 if swaps % 2 else 1


# -- gradings ------------------------------------------------------------------


@dataclass(frozen=True)
class GradingVector:
    """Linear functional ``<phi, lam>``; the degree of ``e^lam`` is ``<phi, -lam>``.

    ``positive`` lists weights gamma that must satisfy ``<phi, gamma> > 0``;
    ``positive_orbits`` lists weights whose every S_n-image must.  Both are
    checked at construction.
    """

    phi: tuple[int, ...]
    positive: tuple[Weight, ...] = field(default=(), repr=False, compare=False)
    positive_orbits: tuple[Weight, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(int(x) for x in self.phi))
        for g in self.positive:
            if self.pair(g) <= 0:
                raise NonExpandableFactor(f"<phi, {g}> = {self.pair(g)} is not positive")
        for g in self.positive_orbits:
            if self.min_orbit_pair(g) <= 0:
                raise NonExpandableFactor(f"some S_n-image of {g} pairs non-positively with phi")

    @property
    def n(self) -> int:
        return len(self.phi)

    def pair(self, lam: Weight) -> int:
        if len(lam) != self.n:
            raise DimensionMismatch(f"weight of length {len(lam)} vs grading of length {self.n}")
        return sum(p * x for p, x in zip(self.phi, lam))

    def degree(self, lam: Weight) -> int:
        return -self.pair(lam)

    def min_orbit_pair(self, lam: Weight) -> int:
        # rearrangement inequality: smallest pairing matches opposite orders
        return sum(p * x for p, x in zip(sorted(self.phi), sorted(lam, reverse=True)))

    def degrees(self, exps: np.ndarray) -> np.ndarray:
        return -(np.asarray(exps, dtype=np.int64) @ np.asarray(self.phi, dtype=np.int64))


def grading_degree(phi: GradingVector, lam: Weight) -> int:
    return phi.degree(lam)


# -- Laurent polynomials -------------------------------------------------------


class LaurentPoly:
    """Finitely supported map ``Weight -> exact rational``, immutable.

    The zero polynomial is the empty map; zero coefficients are never stored.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Weight, object] | Iterable[tuple[Weight, object]] = ()):
        self.n = int(n)
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Weight, Rational] = {}
        for w, c in items:
            w = tuple(w)
            if len(w) != self.n:
                raise DimensionMismatch(f"weight {w} is not in Z^{self.n}")
            c = _coerce(c)
            if w in clean:
                c = clean[w] + c
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls._raw(n, {})

    @classmethod
    def one(cls, n: int) -> "LaurentPoly":
        return cls._raw(n, {(0,) * n: 1})

    @classmethod
    def monomial(cls, weight: Weight, coeff=1) -> "LaurentPoly":
        return cls(len(weight), {tuple(weight): coeff})

    @classmethod
    def binomial(cls, gamma: Weight, c: int) -> "LaurentPoly":
        """``1 + c * e^{-gamma}``."""
        n = len(gamma)
        return cls(n, [((0,) * n, 1), (wneg(gamma), c)])

    @classmethod
    def from_arrays(cls, n: int, exps, coeffs) -> "LaurentPoly":
        terms = {}
        for row, c in zip(np.asarray(exps).tolist(), coeffs):
            c = int(c) if isinstance(c, (np.integer,)) else c
            if c:
                terms[tuple(row)] = c
        return cls._raw(n, terms)

    # mapping-like access
    @property
    def terms(self) -> Mapping[Weight, Rational]:
        return self._terms

    def items(self):
        return self._terms.items()

    def support(self) -> set[Weight]:
        return set(self._terms)

    def coeff(self, weight: Weight):
        return self._terms.get(tuple(weight), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def all_integral(self) -> bool:
        return all(isinstance(c, int) or c.denominator == 1 for c in self._terms.values())

    def to_arrays(self):
        if not self._terms:
            return np.zeros((0, self.n), np.int64), []
        return np.array(list(self._terms), dtype=np.int64).reshape(-1, self.n), list(self._terms.values())

    # ring structure
    def _check(self, other: "LaurentPoly"):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"Z^{self.n} vs Z^{other.n}")
        return None

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, Rational):
                other = LaurentPoly.monomial((0,) * self.n, other)
            else:
                return NotImplemented
        self._check(other)
        big, small = (self, other) if len(self) >= len(other) else (other, self)
        out = dict(big._terms)
        for w, c in small._terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return LaurentPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.n, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, Rational):
            other = LaurentPoly.monomial((0,) * self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentPoly":
        c = _coerce(c)
        if not c:
            return LaurentPoly.zero(self.n)
        return LaurentPoly._raw(self.n, {w: c * v for w, v in self._terms.items()})

    def shift(self, lam: Weight) -> "LaurentPoly":
        """Multiply by the monomial ``e^lam``."""
        if len(lam) != self.n:
            raise DimensionMismatch(f"weight of length {len(lam)} vs Z^{self.n}")
        return LaurentPoly._raw(
            self.n, {tuple(a + b for a, b in zip(w, lam)): c for w, c in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        return _poly_mul(self, other, None, None)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = LaurentPoly.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = LaurentPoly.monomial((0,) * self.n, other) if other else LaurentPoly.zero(self.n)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # group action
    def act(self, w: Permutation) -> "LaurentPoly":
        if w.n != self.n:
            raise DimensionMismatch(f"S_{w.n} acting on Z^{self.n}")
        imgs = [i - 1 for i in w.images]
        out = {}
        for lam, c in self._terms.items():
            mu = [0] * self.n
            for i, x in enumerate(lam):
                mu[imgs[i]] = x
            out[tuple(mu)] = c
        return LaurentPoly._raw(self.n, out)

    def restrict(self, keep) -> "LaurentPoly":
        return LaurentPoly._raw(self.n, {w: c for w, c in self._terms.items() if keep(w)})

    def truncate(self, phi: GradingVector, cutoff: int) -> "LaurentPoly":
        return self.restrict(lambda w: phi.degree(w) <= cutoff)

    def min_degree(self, phi: GradingVector):
        return min((phi.degree(w) for w in self._terms), default=None)

    # rendering
    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{format_coeff(self._terms[w])} e[{','.join(map(str, w))}]" for w in sorted(self._terms)
        )

    def __repr__(self):
        return f"LaurentPoly({self.n}, {self.render()})"


def _int64_ok(values) -> bool:
    return all(isinstance(c, int) and abs(c) < kernels.INT64_SAFE for c in values)


def _poly_mul(a: LaurentPoly, b: LaurentPoly, phi: GradingVector | None, cutoff: int | None) -> LaurentPoly:
    n = a.n
    if not a or not b:
        return LaurentPoly.zero(n)
    work = len(a) * len(b)
    ca, cb = a._terms.values(), b._terms.values()
    if work >= _KERNEL_MIN_WORK and _int64_ok(ca) and _int64_ok(cb):
        bound = max(abs(c) for c in ca) * max(abs(c) for c in cb) * min(len(a), len(b))
        if bound < kernels.INT64_SAFE:
            ea, la = a.to_arrays()
            eb, lb = b.to_arrays()
            if phi is None:
                da = np.zeros(len(ea), np.int64)
                db = np.zeros(len(eb), np.int64)
                cut = 0
            else:
                da, db, cut = phi.degrees(ea), phi.degrees(eb), cutoff
            exps, coeffs = kernels.convolve(
                ea, np.asarray(la, np.int64), da, eb, np.asarray(lb, np.int64), db, cut
            )
            exps, coeffs = kernels.merge_rows(exps, coeffs)
            return LaurentPoly.from_arrays(n, exps, coeffs.tolist())
    out: dict[Weight, Rational] = {}
    b_items = list(b._terms.items())
    if phi is not None:
        b_items = [(w, c, phi.degree(w)) for w, c in b_items]
    for wa, c1 in a._terms.items():
        if phi is None:
            for wb, c2 in b_items:
                key = tuple(x + y for x, y in zip(wa, wb))
                out[key] = out.get(key, 0) + c1 * c2
        else:
            budget = cutoff - phi.degree(wa)
            for wb, c2, d in b_items:
                if d <= budget:
                    key = tuple(x + y for x, y in zip(wa, wb))
                    out[key] = out.get(key, 0) + c1 * c2
    return LaurentPoly._raw(n, {w: c for w, c in out.items() if c})


def poly_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def mul_truncated(a: LaurentPoly, b: LaurentPoly, phi: GradingVector, cutoff: int) -> LaurentPoly:
    """Product restricted to monomials of degree <= cutoff."""
    a._check(b)
    return _poly_mul(a, b, phi, cutoff)


def perm_apply(w: Permutation, p: LaurentPoly) -> LaurentPoly:
    return p.act(w)


def product(polys: Iterable[LaurentPoly], n: int) -> LaurentPoly:
    out = LaurentPoly.one(n)
    for p in polys:
        out = out * p
    return out


def binomial_product(factors: Iterable[tuple[Weight, int]], n: int) -> LaurentPoly:
    """``prod (1 + c e^{-gamma})`` over ``(gamma, c)`` factors."""
    return product((LaurentPoly.binomial(g, c) for g, c in factors), n)


def factorial(k: int) -> int:
    return math.factorial(k)
