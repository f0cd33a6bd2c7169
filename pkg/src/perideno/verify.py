"""Verifiers for the p(n) denominator identities and their proof steps.

Each verifier returns a :class:`VerificationReport`.  Series comparisons use a
cutoff ``D`` measured from the leading degree of ``e^rho`` (so ``D`` counts
how far past the first term the two expansions are compared); the Euler
identity is compared from degree 0.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping

from .errors import CutoffTooTight
from .lattice import (
    GradingVector,
    LaurentPoly,
    Permutation,
    Weight,
    binomial_product,
    eps_sum,
    format_coeff,
    mul_truncated,
    wadd,
    wneg,
    wscale,
    wsub,
)
from .roots import (
    Borel,
    Part,
    RootDatum,
    Signing,
    denominator_factors,
    index_sets,
    make_root_datum,
    tau_n,
)
from .series import (
    RationalExpr,
    TruncatedSeries,
    antisymmetrized_series,
    clear,
    clear_and_compare,
    expand,
    series_diff,
)
from .weyl import (
    CosetKind,
    alternant_coefficients,
    antisymmetrize,
    antisymmetrize_over,
    compute_A,
    coset_representatives,
    is_regular,
    orbit_decompose,
    orbit_sum,
    slot_one_stabilizer,
)


class Verdict(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    INAPPLICABLE = "inapplicable"


def default_cutoff(n: int) -> int:
    if n <= 4:
        return 10
    if n == 5:
        return 8
    return 6


@dataclass(frozen=True)
class Strategy:
    kind: str  # "exact" or "series"
    phi: tuple[int, ...] | None = None
    cutoff: int | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "series"):
            raise ValueError(f"unknown strategy {self.kind!r}")

    @classmethod
    def exact(cls) -> "Strategy":
        return cls("exact")

    @classmethod
    def series(cls, phi=None, cutoff: int | None = None) -> "Strategy":
        return cls("series", tuple(phi) if phi is not None else None, cutoff)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def grading(self, d: RootDatum) -> GradingVector:
        if self.phi is None:
            return d.default_grading()
        g = d.default_grading()
        return GradingVector(self.phi, positive=g.positive, positive_orbits=g.positive_orbits)

    def resolve(self, d: RootDatum) -> "Strategy":
        if self.is_exact:
            return self
        return Strategy("series", self.grading(d).phi, self.cutoff if self.cutoff is not None else default_cutoff(d.n))

    def to_json(self):
        if self.is_exact:
            return {"kind": "exact"}
        return {"kind": "series", "phi": list(self.phi) if self.phi else None, "cutoff": self.cutoff}


@dataclass(frozen=True)
class Witness:
    weight: Weight
    lhs: object
    rhs: object
    degree: int | None = None
    check: str = ""
    transposition: tuple[int, int] | None = None

    def to_json(self):
        doc = {
            "check": self.check,
            "weight": list(self.weight),
            "lhs": format_coeff(self.lhs),
            "rhs": format_coeff(self.rhs),
        }
        if self.degree is not None:
            doc["degree"] = self.degree
        if self.transposition is not None:
            doc["transposition"] = list(self.transposition)
        return doc


@dataclass
class CheckResult:
    name: str
    verdict: Verdict
    witnesses: list[Witness] = field(default_factory=list)
    lhs_terms: int = 0
    rhs_terms: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def to_json(self):
        doc = {"name": self.name, "verdict": self.verdict.value, "lhs_terms": self.lhs_terms, "rhs_terms": self.rhs_terms}
        if self.witnesses:
            doc["witnesses"] = [w.to_json() for w in self.witnesses]
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass
class VerificationReport:
    identity_id: str
    n: int
    strategy: Strategy
    verdict: Verdict
    checks: list[CheckResult] = field(default_factory=list)
    reason: str | None = None
    wall_time: float = 0.0  # seconds
    lhs_terms: int = 0
    rhs_terms: int = 0

    @property
    def witness(self) -> Witness | None:
        for c in self.checks:
            if c.verdict is Verdict.REFUTED and c.witnesses:
                return c.witnesses[0]
        return None

    @property
    def witnesses(self) -> list[Witness]:
        return [w for c in self.checks for w in c.witnesses][:5]

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_json(self, timing: bool = True) -> dict:
        doc = {
            "identity_id": self.identity_id,
            "n": self.n,
            "strategy": self.strategy.to_json(),
            "verdict": self.verdict.value,
        }
        if self.verdict is Verdict.REFUTED:
            doc["witness"] = self.witness.to_json() if self.witness else None
            doc["witnesses"] = [w.to_json() for w in self.witnesses]
        if self.reason:
            doc["reason"] = self.reason
        doc["wall_time_ms"] = round(self.wall_time * 1000, 3) if timing else 0
        doc["lhs_terms"] = self.lhs_terms
        doc["rhs_terms"] = self.rhs_terms
        doc["checks"] = [c.to_json() for c in self.checks]
        return doc


def _finish(identity_id, n, strategy, checks, t0, reason=None) -> VerificationReport:
    if any(c.verdict is Verdict.REFUTED for c in checks):
        verdict = Verdict.REFUTED
    elif checks and all(c.verdict is Verdict.VERIFIED for c in checks):
        verdict = Verdict.VERIFIED
    else:
        verdict = Verdict.INAPPLICABLE
    main = checks[0] if checks else None
    return VerificationReport(
        identity_id=identity_id,
        n=n,
        strategy=strategy,
        verdict=verdict,
        checks=checks,
        reason=reason,
        wall_time=time.perf_counter() - t0,
        lhs_terms=main.lhs_terms if main else 0,
        rhs_terms=main.rhs_terms if main else 0,
    )


def _inapplicable(identity_id, n, strategy, reason) -> VerificationReport:
    return VerificationReport(identity_id, n, strategy, Verdict.INAPPLICABLE, reason=reason)


def compare_polys(name: str, lhs: LaurentPoly, rhs: LaurentPoly, phi: GradingVector | None = None,
                  detail: dict | None = None) -> CheckResult:
    diffs = series_diff(lhs, rhs, phi)
    wit = [Witness(w, a, b, d if phi else None, name) for d, w, a, b in diffs]
    return CheckResult(name, Verdict.REFUTED if diffs else Verdict.VERIFIED, wit, len(lhs), len(rhs), detail or {})


def compare_series(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries, detail: dict | None = None) -> CheckResult:
    diffs = series_diff(lhs, rhs)
    cut = min(lhs.cutoff, rhs.cutoff)
    wit = [Witness(w, a, b, d, name) for d, w, a, b in diffs]
    info = {"cutoff_abs": cut}
    info.update(detail or {})
    return CheckResult(name, Verdict.REFUTED if diffs else Verdict.VERIFIED, wit,
                       len(lhs.poly.truncate(lhs.phi, cut)), len(rhs.poly.truncate(rhs.phi, cut)), info)


# -- shared building blocks ---------------------------------------------------


def e_rho_R0(d: RootDatum) -> LaurentPoly:
    """``e^rho R_0`` expanded directly from the product (not via Weyl)."""
    return binomial_product(denominator_factors(d, Part.EVEN), d.n).shift(d.rho)


def lhs_expr(d: RootDatum, signing: Signing = Signing.SUPER) -> RationalExpr:
    """``e^rho R = e^rho R_0 / R_1bar``."""
    return RationalExpr(e_rho_R0(d), tuple(denominator_factors(d, Part.ODD, signing)))


def chain_factors(d: RootDatum, signing: Signing = Signing.SUPER):
    """Chain denominators; the k-th character factor is ``1 - (-1)^k e^{-(b_1+...+b_k)}``."""
    out = []
    for k, g in enumerate(d.chain_weights(), start=1):
        c = -1 if signing is Signing.SUPER else -((-1) ** k)
        out.append((g, c))
    return out


def beta_factors(d: RootDatum, signing: Signing = Signing.SUPER):
    c = -1 if signing is Signing.SUPER else 1
    return [(b, c) for b in d.betas]


def abs_cutoff(d: RootDatum, phi: GradingVector, D: int) -> int:
    return phi.degree(d.rho) + D


# -- thin, product form -------------------------------------------------------


def _th1_exact_checks(d: RootDatum, signing: Signing) -> list[CheckResult]:
    n, r = d.n, d.r
    R_odd = denominator_factors(d, Part.ODD, signing)
    lhs = e_rho_R0(d)
    checks = []

    # multiply both sides by the W-invariant R_-1; each w-term then clears
    # to w(cleared), so F_W applies to a single polynomial
    base = RationalExpr.monomial_over(d.rho_up, beta_factors(d, signing))
    cleared = clear(base, R_odd)
    rhs = antisymmetrize(cleared).scale(Fraction(1, math.factorial(r)))
    checks.append(compare_polys("cleared-product-form", lhs, rhs))

    if signing is Signing.SUPER:
        sets = index_sets(d)
        sgn_tau = tau_n(n).sign
        base2 = RationalExpr.monomial_over(eps_sum(n, range(1, r + 1)), [(b, -1) for b in sets["S_prime"]])
        rhs2 = antisymmetrize(clear(base2, R_odd))
        checks.append(compare_polys("cleared-S-prime", lhs.scale(sgn_tau * math.factorial(r)), rhs2))

        f_rho = antisymmetrize(LaurentPoly.monomial(d.rho))
        A = compute_A(n)
        checks.append(compare_polys("A-antisymmetrized", f_rho.scale(sgn_tau * math.factorial(r)), antisymmetrize(A)))
    return checks


def _th1_series_check(d: RootDatum, strategy: Strategy, signing: Signing) -> CheckResult:
    phi = strategy.grading(d)
    cut = abs_cutoff(d, phi, strategy.cutoff)
    lhs = expand(lhs_expr(d, signing), phi, cut)
    rhs_expr = RationalExpr.monomial_over(d.rho_up, beta_factors(d, signing))
    rhs = antisymmetrized_series(rhs_expr, phi, cut, scale=Fraction(1, math.factorial(d.r)))
    return compare_series("series", lhs, rhs)


def verify_thin_th1(n: int, strategy: Strategy | None = None, signing: Signing = Signing.SUPER) -> VerificationReport:
    """``e^rho R = 1/r! F_W(e^{rho_up} / prod_{beta in S} (1 - e^{-beta}))``."""
    t0 = time.perf_counter()
    d = make_root_datum(n, Borel.THIN)
    strategy = (strategy or Strategy.exact()).resolve(d)
    ident = "thin-th1" if signing is Signing.SUPER else "thin-th1-char"
    if strategy.is_exact:
        checks = _th1_exact_checks(d, signing)
    else:
        checks = [_th1_series_check(d, strategy, signing)]
    return _finish(ident, n, strategy, checks, t0)


# -- thin, chain form ---------------------------------------------------------


def X_series(d: RootDatum, mu: Weight, phi: GradingVector, cut: int, signing=Signing.SUPER) -> TruncatedSeries:
    """``X_mu = F_W(e^mu / chain)`` truncated."""
    return antisymmetrized_series(RationalExpr.monomial_over(mu, chain_factors(d, signing)), phi, cut)


def verify_thin_chain(n: int, strategy: Strategy | None = None, signing: Signing = Signing.SUPER) -> VerificationReport:
    """Chain-denominator thin identity, plus ``X_rho = X_{rho_up}`` and the
    product-to-sum step for the supercharacter version."""
    t0 = time.perf_counter()
    d = make_root_datum(n, Borel.THIN)
    strategy = (strategy or Strategy.series()).resolve(d)
    ident = "thin-chain" if signing is Signing.SUPER else "thin-chain-char"
    if strategy.is_exact:
        return _inapplicable(ident, n, strategy, "chain denominators differ per Weyl element; use the series strategy")
    phi = strategy.grading(d)
    cut = abs_cutoff(d, phi, strategy.cutoff)
    lhs = expand(lhs_expr(d, signing), phi, cut)
    x_rho = X_series(d, d.rho, phi, cut, signing)
    checks = [compare_series("series", lhs, x_rho)]
    if signing is Signing.SUPER:
        x_up = X_series(d, d.rho_up, phi, cut)
        checks.append(compare_series("X_rho=X_rho_up", x_rho, x_up))
        prod = antisymmetrized_series(RationalExpr.monomial_over(d.rho_up, beta_factors(d)), phi, cut,
                                      scale=Fraction(1, math.factorial(d.r)))
        checks.append(compare_series("product-to-sum", x_rho, prod))
    return _finish(ident, n, strategy, checks, t0)


# -- thick -------------------------------------------------------------------


def _sum_eps(n: int) -> Weight:
    return (1,) * n


def thick_ind_check(m: int) -> CheckResult:
    """The inductive step at rank m, cleared by the W-invariant R_{1,m}."""
    d = make_root_datum(m, Borel.THICK)
    sig = _sum_eps(m)
    shift_poly = LaurentPoly.monomial(sig) - LaurentPoly.monomial(wneg(sig))
    R1 = denominator_factors(d, Part.ODD)
    lhs = clear(RationalExpr(shift_poly * e_rho_R0(d), tuple(R1)), R1)

    # p(m-1) embedded on eps_2..eps_m
    rho_prev = tuple([0] + [-i for i in range(1, m)])
    R0_prev = [(a, c) for a, c in denominator_factors(d, Part.EVEN) if a[0] == 0]
    R1_prev = [(a, c) for a, c in R1 if a[0] == 0]
    inner = RationalExpr(binomial_product(R0_prev, m).shift(rho_prev), tuple(R1_prev))
    rhs = LaurentPoly.zero(m)
    for s in coset_representatives(CosetKind.MOD_LAST, m):
        rhs = rhs + clear(inner.act(s), R1).scale(s.sign)
    return compare_polys(f"inductive-step[m={m}]", lhs, rhs)


def _extra_factor(n: int) -> LaurentPoly:
    """``prod_{i=1..n} (1 - e^{-eps_1 - eps_i})``."""
    return binomial_product([(eps_sum(n, [1, i]), -1) for i in range(1, n + 1)], n)


def thick_nex_check(n: int) -> CheckResult:
    d = make_root_datum(n, Borel.THICK)
    sig = _sum_eps(n)
    shift_poly = LaurentPoly.monomial(sig) - LaurentPoly.monomial(wneg(sig))
    lhs = shift_poly * antisymmetrize(LaurentPoly.monomial(d.rho))
    rho_prev = wadd(d.rho, sig)
    inner = antisymmetrize_over(LaurentPoly.monomial(rho_prev), slot_one_stabilizer(n)) * _extra_factor(n)
    rhs = antisymmetrize_over(inner, coset_representatives(CosetKind.MOD_LAST, n))
    return compare_polys("sigma-shift", lhs, rhs)


def two_orbits_analysis(n: int) -> dict:
    """Expand both sides of the two-orbit identity and record its structure."""
    d = make_root_datum(n, Borel.THICK)
    sig = _sum_eps(n)
    rho_prev = wadd(d.rho, sig)
    lhs_in = LaurentPoly.monomial(rho_prev) - LaurentPoly.monomial(wsub(d.rho, sig))
    rhs_in = _extra_factor(n).shift(rho_prev)
    lhs = antisymmetrize(lhs_in)
    rhs = antisymmetrize(rhs_in)
    regular_subsets = []
    roots = [eps_sum(n, [1, i]) for i in range(1, n + 1)]
    for k in range(n + 1):
        for A in itertools.combinations(range(n), k):
            lam = rho_prev
            for i in A:
                lam = wsub(lam, roots[i])
            if is_regular(lam):
                regular_subsets.append((tuple(i + 1 for i in A), lam, (-1) ** k))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "lhs_orbits": orbit_decompose(lhs),
        "rhs_orbits": orbit_decompose(rhs),
        "regular_subsets": regular_subsets,
        "expected_lhs_orbits": sorted([(rho_prev, 1), (wsub(d.rho, sig), -1)], reverse=True),
    }


def thick_two_orbits_checks(n: int) -> list[CheckResult]:
    info = two_orbits_analysis(n)
    main = compare_polys("two-orbits", info["lhs"], info["rhs"])
    regs = info["regular_subsets"]
    coeffs = alternant_coefficients(LaurentPoly(n, [(lam, c) for _, lam, c in regs]))
    expect_regular = 2 if n % 2 else 4
    structure_ok = (
        info["lhs_orbits"] == info["expected_lhs_orbits"]
        and len(info["rhs_orbits"]) == 2
        and len(regs) == expect_regular
        and len(coeffs) == 2
    )
    detail = {
        "lhs_orbits": [[list(mu), format_coeff(c)] for mu, c in info["lhs_orbits"]],
        "rhs_orbits": [[list(mu), format_coeff(c)] for mu, c in info["rhs_orbits"]],
        "regular_subsets": [[list(A), list(lam), c] for A, lam, c in regs],
    }
    structure = CheckResult("two-orbits-structure", Verdict.VERIFIED if structure_ok else Verdict.REFUTED,
                            detail=detail, lhs_terms=len(info["lhs_orbits"]), rhs_terms=len(info["rhs_orbits"]))
    if not structure_ok:
        structure.witnesses.append(Witness(tuple(info["expected_lhs_orbits"][0][0]), len(info["lhs_orbits"]),
                                           len(info["rhs_orbits"]), None, "two-orbits-structure"))
    return [main, structure]


def thick_base_check() -> CheckResult:
    d = make_root_datum(1, Borel.THICK)
    lhs = lhs_expr(d)
    rhs = RationalExpr.monomial_over(d.rho, chain_factors(d))
    ok = clear_and_compare(lhs.normalize(), rhs)
    return CheckResult("base-n=1", Verdict.VERIFIED if ok else Verdict.REFUTED, lhs_terms=len(lhs.numerator),
                       rhs_terms=len(rhs.numerator))


def _thick_exact_checks(n: int) -> list[CheckResult]:
    checks = [thick_base_check()]
    for m in range(2, n + 1):
        checks.append(thick_ind_check(m))
    if n >= 2:
        checks.append(thick_nex_check(n))
        checks.extend(thick_two_orbits_checks(n))
    return checks


def verify_thick(n: int, strategy: Strategy | None = None, signing: Signing = Signing.SUPER) -> VerificationReport:
    """``e^rho R = F_W(e^rho / chain)`` with ``beta_k = 2 eps_{n+1-k}``.

    Series: the identity itself (plus the exact intermediate identities for the
    supercharacter version).  Exact: base case and the inductive step for every
    rank up to n, together with the intermediate identities at n.
    """
    t0 = time.perf_counter()
    d = make_root_datum(n, Borel.THICK)
    strategy = (strategy or Strategy.series()).resolve(d)
    ident = "thick" if signing is Signing.SUPER else "thick-char"
    if strategy.is_exact:
        if signing is not Signing.SUPER:
            return _inapplicable(ident, n, strategy, "exact intermediates exist for the supercharacter form only")
        return _finish(ident, n, strategy, _thick_exact_checks(n), t0)
    phi = strategy.grading(d)
    cut = abs_cutoff(d, phi, strategy.cutoff)
    lhs = expand(lhs_expr(d, signing), phi, cut)
    rhs = antisymmetrized_series(RationalExpr.monomial_over(d.rho, chain_factors(d, signing)), phi, cut)
    checks = [compare_series("series", lhs, rhs)]
    if signing is Signing.SUPER and n >= 2:
        checks.append(thick_nex_check(n))
        checks.extend(thick_two_orbits_checks(n))
    return _finish(ident, n, strategy, checks, t0)


# -- character versions -------------------------------------------------------


class CharForm(str, Enum):
    THIN_TH1 = "thin-th1"
    THIN_CHAIN = "thin-chain"
    THICK = "thick"


def verify_char_versions(n: int, which: CharForm | str, strategy: Strategy | None = None) -> VerificationReport:
    which = CharForm(which)
    if which is CharForm.THIN_TH1:
        return verify_thin_th1(n, strategy or Strategy.series(), Signing.CHAR)
    if which is CharForm.THIN_CHAIN:
        return verify_thin_chain(n, strategy, Signing.CHAR)
    return verify_thick(n, strategy, Signing.CHAR)


# -- Euler characteristic of thin Kac modules ---------------------------------


def kac_weights(d: RootDatum, M: int):
    """``(i, lam)`` for ``M >= i_1 >= ... >= i_r >= 0`` and ``lam = -sum i_k beta_k``."""
    r = d.r
    for i in itertools.combinations_with_replacement(range(M, -1, -1), r):
        lam = (0,) * d.n
        for ik, b in zip(i, d.betas):
            lam = wsub(lam, wscale(ik, b))
        yield i, lam


def kac_floor(d: RootDatum, phi: GradingVector, lam: Weight) -> int:
    """Lowest degree of ``sch nabla(lam)``: the smallest degree among the terms
    of ``e^{-rho} F_W(e^{lam + rho})`` (R_-1 only adds non-negative degree)."""
    mu = wadd(lam, d.rho)
    # max_w <phi, w mu> pairs equally ordered vectors
    best = sum(p * x for p, x in zip(sorted(phi.phi), sorted(mu)))
    return -best + phi.pair(d.rho)


def sch_nabla_numerator(d: RootDatum, lam: Weight) -> LaurentPoly:
    """``e^{-rho} R_-1 F_W(e^{lam + rho})``; dividing by R_0 gives sch nabla(lam)
    up to the parity sign."""
    R_m1 = binomial_product(denominator_factors(d, Part.ODD), d.n)
    return (R_m1 * orbit_sum(wadd(lam, d.rho))).shift(wneg(d.rho))


def sch_nabla(d: RootDatum, lam: Weight, phi: GradingVector, D: int, sign=1) -> TruncatedSeries:
    expr = RationalExpr(sch_nabla_numerator(d, lam).scale(sign), tuple(denominator_factors(d, Part.EVEN)))
    return expand(expr, phi, D)


def kac_sign(i, convention: str) -> int:
    if convention == "derived":
        return (-1) ** sum(i)
    if convention == "all-plus":
        return 1
    raise ValueError(f"unknown sign convention {convention!r}")


def assert_euler_bound(d: RootDatum, phi: GradingVector, D: int, M: int) -> None:
    """Every term left out (``i_1 > M``) must start above degree D.

    The lowest such floor is that of ``i = (M + 1, 0, ..., 0)``; floors grow
    with each ``i_k``, so checking it covers all omitted terms.
    """
    if not d.r:
        return
    excluded_floor = kac_floor(d, phi, wscale(-(M + 1), d.betas[0]))
    if excluded_floor <= D:
        raise CutoffTooTight(f"terms with i_1 = {M + 1} reach degree {excluded_floor} <= D = {D}")


def verify_kac_euler(n: int, D: int | None = None, M: int | None = None, sign_convention: str = "derived",
                     phi=None) -> VerificationReport:
    """``sum_{i_1 >= ... >= i_r >= 0} (-1)^{|i|} sch nabla(-sum i_k beta_k) = 1``
    below degree D, summing terms with ``i_1 <= M``."""
    t0 = time.perf_counter()
    d = make_root_datum(n, Borel.THIN)
    D = default_cutoff(n) if D is None else D
    M = D + 2 if M is None else M
    if D < 1 or M < D:
        raise ValueError(f"need D >= 1 and M >= D, got D={D}, M={M}")
    strategy = Strategy.series(phi, D).resolve(d)
    phi = strategy.grading(d)

    assert_euler_bound(d, phi, D, M)

    total = LaurentPoly.zero(n)
    used = skipped = 0
    for i, lam in kac_weights(d, M):
        if kac_floor(d, phi, lam) > D:
            skipped += 1
            continue
        used += 1
        coeff = (-1) ** sum(i) * kac_sign(i, sign_convention)
        total = total + orbit_sum(wadd(lam, d.rho), coeff)
    num = total.shift(wneg(d.rho)).truncate(phi, D)
    R_m1 = binomial_product(denominator_factors(d, Part.ODD), n)
    num = mul_truncated(num, R_m1, phi, D)
    partial = expand(RationalExpr(num, tuple(denominator_factors(d, Part.EVEN))), phi, D)
    one = TruncatedSeries(phi, D, LaurentPoly.one(n), 0)
    main = compare_series("euler-sum", partial, one,
                          {"terms_used": used, "terms_below_floor": skipped, "M": M, "sign_convention": sign_convention})
    checks = [main]
    for lam in _division_probe_weights(d):
        checks.append(_division_safety(d, lam, phi, D))
    return _finish("kac-euler", n, strategy, checks, t0)


def _division_probe_weights(d: RootDatum):
    out = [(0,) * d.n]
    if d.r:
        out.append(wneg(d.betas[0]))
    return out


def _division_safety(d: RootDatum, lam: Weight, phi: GradingVector, D: int) -> CheckResult:
    """``sch nabla(lam) * (e^rho R_0 / R_-1)`` must give back ``F_W(e^{lam+rho})``."""
    s = sch_nabla(d, lam, phi, D)
    back = expand(lhs_expr(d), phi, phi.degree(d.rho) + D)
    prod = s * back
    target = orbit_sum(wadd(lam, d.rho)).truncate(phi, prod.cutoff)
    return compare_polys(f"division-safety[{','.join(map(str, lam))}]", prod.poly, target, phi,
                         {"cutoff_abs": prod.cutoff})


# -- other Borel subalgebras --------------------------------------------------


@dataclass(frozen=True)
class OddChoice:
    """A choice of positive odd roots: ``sign * (eps_i + eps_j)`` for each pair
    ``i < j`` and ``2 eps_i`` for each i in ``diagonal``."""

    n: int
    pair_signs: Mapping[tuple[int, int], int]
    diagonal: frozenset[int]

    def __post_init__(self):
        pairs = {(i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1)}
        if set(self.pair_signs) != pairs or any(s not in (1, -1) for s in self.pair_signs.values()):
            raise ValueError("pair_signs must assign +-1 to every pair i < j")
        object.__setattr__(self, "diagonal", frozenset(self.diagonal))
        object.__setattr__(self, "pair_signs", dict(sorted(self.pair_signs.items())))

    @classmethod
    def thin(cls, n: int) -> "OddChoice":
        return cls(n, {(i, j): -1 for i in range(1, n + 1) for j in range(i + 1, n + 1)}, frozenset())

    @classmethod
    def thick(cls, n: int) -> "OddChoice":
        return cls(n, {(i, j): 1 for i in range(1, n + 1) for j in range(i + 1, n + 1)}, frozenset(range(1, n + 1)))

    @classmethod
    def from_functional(cls, h) -> "OddChoice":
        """Odd positive roots of the Borel cut out by a regular functional ``h``
        with ``h_1 > ... > h_n`` (so the even positive roots stay fixed)."""
        n = len(h)
        if any(a <= b for a, b in zip(h, h[1:])):
            raise ValueError("h must be strictly decreasing")
        if any(x == 0 for x in h) or any(h[i] + h[j] == 0 for i in range(n) for j in range(i + 1, n)):
            raise ValueError("h is not regular on the odd roots")
        signs = {(i + 1, j + 1): 1 if h[i] + h[j] > 0 else -1 for i in range(n) for j in range(i + 1, n)}
        return cls(n, signs, frozenset(i + 1 for i in range(n) if h[i] > 0))

    def roots(self) -> list[Weight]:
        out = [wscale(s, eps_sum(self.n, [i, j])) for (i, j), s in self.pair_signs.items()]
        out += [eps_sum(self.n, [i, i]) for i in sorted(self.diagonal)]
        return out

    def key(self):
        return tuple(self.pair_signs.values()), tuple(sorted(self.diagonal))

    def label(self) -> str:
        """e.g. ``"++-|12"``: pair signs in (i, j) order, then the diagonal set."""
        signs = "".join("+" if v > 0 else "-" for v in self.pair_signs.values())
        return f"{signs}|{''.join(map(str, sorted(self.diagonal)))}"

    def to_json(self):
        return {"pair_signs": [[i, j, s] for (i, j), s in self.pair_signs.items()], "diagonal": sorted(self.diagonal)}


def genuine_borel_choices(n: int) -> list[OddChoice]:
    """Distinct odd positive systems of Borels containing the fixed even Borel."""
    vals = [v for v in range(-(4 * n + 1), 4 * n + 2, 2)]
    seen, out = set(), []
    for h in itertools.combinations(sorted(vals, reverse=True), n):
        try:
            c = OddChoice.from_functional(h)
        except ValueError:
            continue
        if c.key() not in seen:
            seen.add(c.key())
            out.append(c)
    return out


def _half_weight_poly(roots: list[Weight], n: int) -> LaurentPoly:
    """``prod (e^{g/2} - e^{-g/2})`` on the half-lattice (exponent g stands for g/2)."""
    out = LaurentPoly.one(n)
    for g in roots:
        out = out * (LaurentPoly.monomial(g) - LaurentPoly.monomial(wneg(g)))
    return out


def _evaluate_e_rho_R(n: int, roots: list[Weight], s: Permutation, point) -> Fraction:
    """``(s . e^rho R)`` evaluated at ``e^{eps_i} = point[i]``, exactly."""
    d0 = make_root_datum(n, Borel.THIN)  # only the even data is used

    def mono(lam):
        lam = s.act(lam)
        out = Fraction(1)
        for x, k in zip(point, lam):
            out *= x ** k
        return out

    two_rho = tuple(int(2 * a) - sum(g[i] for g in roots) for i, a in enumerate(d0.rho0))
    # every exponent is doubled, i.e. the function is evaluated at e^{eps_i} = x_i^2
    val = mono(two_rho)
    for a in d0.even_pos:
        val *= (1 - mono(wscale(-2, a)))
    for g in roots:
        val /= (1 - mono(wscale(-2, g)))
    return val


def _pointwise_anti_invariance(n: int, roots: list[Weight], s: Permutation, points) -> bool:
    """``s(e^rho R) = -e^rho R`` tested at exact rational points (on the
    doubled lattice, so half-integral rho is harmless)."""
    ident = Permutation.identity(n)
    return all(_evaluate_e_rho_R(n, roots, s, x) == -_evaluate_e_rho_R(n, roots, ident, x) for x in points)


def _probe_points(n: int):
    """Two generic rational points; distinct primes keep every ``x^gamma != 1``."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    if n > 8:
        raise ValueError("probe points are tabulated for n <= 8")
    a = tuple(Fraction(primes[i], primes[-1 - i]) for i in range(n))
    b = tuple(Fraction(primes[2 * i + 1], primes[2 * i]) for i in range(n))
    return a, b


def scan_other_borels(n: int, choice: OddChoice) -> VerificationReport:
    """Is ``e^rho R`` W-anti-invariant for this odd positive system?

    Anti-invariance is equivalent to W-invariance of ``e^{rho_1} R_1bar``,
    i.e. of ``prod (e^{g/2} - e^{-g/2})``; exact evaluation of the full rational
    function ``e^rho R`` at rational points runs alongside as an independent check.
    """
    t0 = time.perf_counter()
    if n < 2:
        raise ValueError("scan needs n >= 2")
    roots = choice.roots()
    P = _half_weight_poly(roots, n)
    witness = None
    cross = []
    points = _probe_points(n)
    for i in range(1, n):
        s = Permutation.transposition(n, i, i + 1)
        cross.append(_pointwise_anti_invariance(n, roots, s, points))
        if witness is None:
            diff = series_diff(P.act(s), P, None, limit=1)
            if diff:
                _, w, a, b = diff[0]
                witness = Witness(w, a, b, None, "odd-product-invariance", (i, i + 1))
    invariant = witness is None
    agree = invariant == all(cross)
    main = CheckResult("odd-product-invariance", Verdict.VERIFIED if invariant else Verdict.REFUTED,
                       [witness] if witness else [], len(P), len(P), {"choice": choice.to_json()})
    oracle = CheckResult("pointwise-agrees", Verdict.VERIFIED if agree else Verdict.REFUTED,
                         detail={"pointwise": cross})
    if not agree:
        oracle.witnesses.append(Witness((0,) * n, int(invariant), int(all(cross)), None, "pointwise-agrees"))
    report = _finish("borel-scan", n, Strategy.exact(), [main, oracle], t0)
    return report


# -- registry -----------------------------------------------------------------


IDENTITIES = ("thin-th1", "thin-chain", "thick", "thin-char", "thick-char", "kac-euler", "borel-scan")


def run_identity(identity: str, n: int, strategy: Strategy | None = None, cutoff: int | None = None,
                 euler_bound: int | None = None, sign_convention: str = "derived",
                 phi=None) -> list[VerificationReport]:
    """Run one selector value at one n; returns one report per check."""

    def strat(default_kind):
        kind = strategy.kind if strategy else default_kind
        if kind == "exact":
            return Strategy.exact()
        return Strategy.series(phi if phi is not None else (strategy.phi if strategy else None),
                               cutoff if cutoff is not None else (strategy.cutoff if strategy else None))

    if identity == "thin-th1":
        return [verify_thin_th1(n, strat("exact"))]
    if identity == "thin-chain":
        return [verify_thin_chain(n, strat("series"))]
    if identity == "thick":
        return [verify_thick(n, strat("series"))]
    if identity == "thin-char":
        return [verify_char_versions(n, CharForm.THIN_TH1, strat("series")),
                verify_char_versions(n, CharForm.THIN_CHAIN, strat("series"))]
    if identity == "thick-char":
        return [verify_char_versions(n, CharForm.THICK, strat("series"))]
    if identity == "kac-euler":
        if strategy is not None and strategy.is_exact:
            return [_inapplicable("kac-euler", n, strategy, "the Euler sum is an infinite series")]
        D = cutoff if cutoff is not None else default_cutoff(n)
        return [verify_kac_euler(n, D, euler_bound, sign_convention, phi)]
    if identity == "borel-scan":
        return [_borel_scan_summary(n)]
    if identity == "all":
        out = []
        for ident in IDENTITIES:
            out.extend(run_identity(ident, n, strategy, cutoff, euler_bound, sign_convention, phi))
        return out
    raise ValueError(f"unknown identity {identity!r}")


def _borel_scan_summary(n: int) -> VerificationReport:
    """Anti-invariance must hold exactly for the thin and thick choices among
    all genuine Borels; reported as one check per Borel."""
    t0 = time.perf_counter()
    if n == 1:
        # W is trivial, so anti-invariance holds vacuously for both choices
        return _finish("borel-scan", n, Strategy.exact(), [CheckResult("trivial-W", Verdict.VERIFIED)], t0)
    checks = []
    special = {OddChoice.thin(n).key(), OddChoice.thick(n).key()}
    for choice in genuine_borel_choices(n):
        rep = scan_other_borels(n, choice)
        holds = rep.verdict is Verdict.VERIFIED
        expected = choice.key() in special
        name = "thin" if choice.key() == OddChoice.thin(n).key() else (
            "thick" if choice.key() == OddChoice.thick(n).key() else "mixed")
        c = CheckResult(f"{name}[{choice.label()}]", Verdict.VERIFIED if holds == expected else Verdict.REFUTED,
                        detail={"anti_invariant": holds, "choice": choice.to_json()})
        if holds != expected:
            c.witnesses.append(Witness((0,) * n, int(holds), int(expected), None, c.name))
        checks.append(c)
    return _finish("borel-scan", n, Strategy.exact(), checks, t0)
