"""Root data of the periplectic Lie superalgebra p(n) for its thin and thick
Borel subalgebras."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .lattice import GradingVector, Permutation, Weight, eps_sum, format_coeff, wneg, wscale

Factor = tuple[Weight, int]  # (gamma, c) encodes 1 + c * e^{-gamma}


class Borel(str, Enum):
    THIN = "thin"  # odd positive roots = Delta(g_-1)
    THICK = "thick"  # odd positive roots = Delta(g_1)


class Part(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Signing(str, Enum):
    SUPER = "super"  # odd factors 1 - e^{-a}
    CHAR = "char"  # odd factors 1 + e^{-a}


def even_positive_roots(n: int) -> list[Weight]:
    """Delta_0^+ = {eps_i - eps_j : i < j}."""
    return [_diff(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def _diff(n, i, j) -> Weight:
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def g1_roots(n: int) -> list[Weight]:
    """Delta(g_1) = {eps_i + eps_j : i <= j}."""
    return [eps_sum(n, [i, j]) for i in range(1, n + 1) for j in range(i, n + 1)]


def gminus1_roots(n: int) -> list[Weight]:
    """Delta(g_-1) = {-(eps_i + eps_j) : i < j}."""
    return [wneg(eps_sum(n, [i, j])) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def _half_sum(n, roots) -> tuple[Fraction, ...]:
    tot = [Fraction(0)] * n
    for a in roots:
        for i, x in enumerate(a):
            tot[i] += x
    return tuple(t / 2 for t in tot)


@dataclass(frozen=True)
class RootDatum:
    n: int
    borel: Borel
    r: int
    even_pos: tuple[Weight, ...]
    odd_pos: tuple[Weight, ...]
    rho: Weight
    rho0: tuple[Fraction, ...]  # half-integral in general
    rho1: tuple[Fraction, ...]
    rho_up: Weight | None  # thin only
    betas: tuple[Weight, ...]

    @property
    def is_thin(self) -> bool:
        return self.borel is Borel.THIN

    def chain_weights(self) -> list[Weight]:
        """Partial sums ``beta_1 + ... + beta_k`` for k = 1..r."""
        out, acc = [], (0,) * self.n
        for b in self.betas:
            acc = tuple(x + y for x, y in zip(acc, b))
            out.append(acc)
        return out

    def default_grading(self) -> GradingVector:
        """thin: phi_i = -i; thick: phi_i = n + 1 - i.  Admissibility (all
        positive roots and every S_n-image of every beta-chain weight) is
        checked on construction."""
        n = self.n
        phi = tuple(-i for i in range(1, n + 1)) if self.is_thin else tuple(n + 1 - i for i in range(1, n + 1))
        return GradingVector(
            phi,
            positive=self.even_pos + self.odd_pos,
            positive_orbits=tuple(self.betas) + tuple(self.chain_weights()),
        )

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "borel": self.borel.value,
            "r": self.r,
            "even_pos": [list(a) for a in self.even_pos],
            "odd_pos": [list(a) for a in self.odd_pos],
            "rho": list(self.rho),
            "rho0": [format_coeff(x) for x in self.rho0],
            "rho1": [format_coeff(x) for x in self.rho1],
            "rho_up": list(self.rho_up) if self.rho_up is not None else None,
            "betas": [list(b) for b in self.betas],
        }
        if self.is_thin:
            sets = index_sets(self)
            doc["index_sets"] = {
                "S": [list(w) for w in sets["S"]],
                "S_prime": [list(w) for w in sets["S_prime"]],
                "U": [list(p) for p in sets["U"]],
                "P_prime": [list(p) for p in sets["P_prime"]],
            }
            doc["tau"] = list(tau_n(self.n).images)
        return doc


def make_root_datum(n: int, borel: Borel | str) -> RootDatum:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    borel = Borel(borel)
    even = even_positive_roots(n)
    if borel is Borel.THIN:
        odd = gminus1_roots(n)
        r = n // 2
        betas = [wneg(eps_sum(n, [2 * k - 1, 2 * k])) for k in range(1, r + 1)]
        rho_up = eps_sum(n, [2 * k - 1 for k in range(1, r + 1)])
    else:
        odd = g1_roots(n)
        r = n
        betas = [wscale(2, eps_sum(n, [n + 1 - k])) for k in range(1, n + 1)]
        rho_up = None
    rho0 = _half_sum(n, even)
    rho1 = _half_sum(n, odd)
    rho_f = tuple(a - b for a, b in zip(rho0, rho1))
    assert all(x.denominator == 1 for x in rho_f)
    return RootDatum(
        n=n,
        borel=borel,
        r=r,
        even_pos=tuple(even),
        odd_pos=tuple(odd),
        rho=tuple(int(x) for x in rho_f),
        rho0=rho0,
        rho1=rho1,
        rho_up=rho_up,
        betas=tuple(betas),
    )


def denominator_factors(d: RootDatum, part: Part | str, signed: Signing | str = Signing.SUPER) -> list[Factor]:
    """Factors of R_0 (even) or of R_1bar (odd) as ``(gamma, c)`` meaning
    ``1 + c e^{-gamma}``; super factors have c = -1, character factors c = +1."""
    part, signed = Part(part), Signing(signed)
    if part is Part.EVEN:
        return [(a, -1) for a in d.even_pos]
    c = -1 if signed is Signing.SUPER else 1
    return [(a, c) for a in d.odd_pos]


def tau_n(n: int) -> Permutation:
    """``2t - 1 -> t`` and ``2t -> n + 1 - t``."""
    imgs = [0] * n
    for t in range(1, (n + 1) // 2 + 1):
        if 2 * t - 1 <= n:
            imgs[2 * t - 2] = t
        if 2 * t <= n:
            imgs[2 * t - 1] = n + 1 - t
    return Permutation(tuple(imgs))


def index_sets(d: RootDatum) -> dict:
    """S, S', U and P' of the thin construction."""
    if not d.is_thin:
        raise ValueError("index sets are defined for the thin Borel only")
    n, r = d.n, d.r
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return {
        "S": list(d.betas),
        "S_prime": [wneg(eps_sum(n, [k, n + 1 - k])) for k in range(1, r + 1)],
        "U": [(i, j) for i, j in pairs if i + j != n + 1],
        "P_prime": [(i, j) for i, j in pairs if i + j <= n],
    }


def p_prime_closed_form(n: int) -> Fraction:
    return Fraction(n * (n - 1) // 2 - n // 2, 2)


def sign_tau_closed_form(n: int) -> int:
    if n % 2 == 0:
        return 1
    return (-1) ** ((n - 1) // 2)
