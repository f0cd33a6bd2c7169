"""Property suites (fixed seeds via the ``fixed`` hypothesis profile)."""
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from perideno.lattice import GradingVector, LaurentPoly, Permutation, grading_degree, perm_apply
from perideno.roots import Borel, make_root_datum
from perideno.series import RationalExpr, expand, expand_naive
from perideno.verify import Strategy, Verdict, verify_thick, verify_thin_th1
from perideno.weyl import (
    adjacent_transpositions,
    antisymmetrize,
    antisymmetrize_naive,
    is_regular,
    orbit_decompose,
    reassemble,
)
from strategies import coeffs, dims, perms, polys, weights

# -- core lattice --------------------------------------------------------------


@given(dims(1, 5).flatmap(lambda n: st.tuples(perms(n), perms(n), polys(n))))
def test_action_composes(args):
    w, v, p = args
    assert perm_apply(w, perm_apply(v, p)) == perm_apply(w * v, p)


@given(dims(1, 6).flatmap(lambda n: st.tuples(perms(n), perms(n))))
def test_sign_homomorphism(args):
    w, v = args
    assert (w * v).sign == w.sign * v.sign


@given(dims(1, 4).flatmap(lambda n: st.tuples(polys(n, 20), polys(n, 20), polys(n, 20))))
def test_mul_commutative_associative(args):
    a, b, c = args
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(dims(1, 4).flatmap(lambda n: st.tuples(polys(n, 8), polys(n, 8), polys(n, 8))))
def test_ring_axioms(args):
    a, b, c = args
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a + (-a) == LaurentPoly.zero(a.n)
    assert a * LaurentPoly.one(a.n) == a


@given(dims(1, 5).flatmap(lambda n: st.tuples(weights(n), weights(n), weights(n))))
def test_grading_linear(args):
    phi, lam, mu = args
    g = GradingVector(phi)
    assert grading_degree(g, tuple(x + y for x, y in zip(lam, mu))) == grading_degree(g, lam) + grading_degree(g, mu)


@given(dims(1, 4).flatmap(lambda n: st.tuples(perms(n), polys(n), polys(n))))
def test_action_is_ring_homomorphism(args):
    w, a, b = args
    assert perm_apply(w, a * b) == perm_apply(w, a) * perm_apply(w, b)


# -- Weyl group ----------------------------------------------------------------


@given(dims(1, 5).flatmap(lambda n: polys(n, 5)))
def test_antisymmetrize_is_anti_invariant(p):
    f = antisymmetrize(p)
    for s in adjacent_transpositions(p.n):
        assert f.act(s) == -f


@given(dims(1, 4).flatmap(lambda n: polys(n, 4)))
def test_fast_antisymmetrize_matches_loop(p):
    assert antisymmetrize(p) == antisymmetrize_naive(p)


@given(dims(2, 5).flatmap(lambda n: weights(n, -2, 2)), coeffs)
def test_non_regular_monomials_vanish(lam, c):
    assume(not is_regular(lam))
    assert antisymmetrize(LaurentPoly.monomial(lam, c)).is_zero()


@given(dims(1, 5).flatmap(lambda n: polys(n, 5)))
def test_decompose_then_reassemble(p):
    f = antisymmetrize(p)
    rebuilt = reassemble(orbit_decompose(f))
    assert (rebuilt if rebuilt is not None else LaurentPoly.zero(p.n)) == f


# -- series --------------------------------------------------------------------

PHI2 = GradingVector((1, 2))
GAMMAS2 = [(1, 0), (0, 1), (1, 1), (-1, 1), (3, -1), (1, 2)]  # all pair positively with (1, 2)


def exprs2(max_factors=3):
    factor = st.tuples(st.sampled_from(GAMMAS2), st.sampled_from([-1, 1]))
    return st.builds(RationalExpr, polys(2, 3, -2, 2), st.lists(factor, max_size=max_factors).map(tuple))


@given(exprs2(), exprs2(), st.integers(0, 6))
def test_expand_multiplicative(a, b, D):
    ea, eb = expand(a, PHI2, D + 10), expand(b, PHI2, D + 10)
    prod = ea * eb
    direct = expand(a * b, PHI2, prod.cutoff)
    assert prod.poly == direct.poly


@given(exprs2(), st.integers(-2, 8), st.integers(0, 4))
def test_expand_restriction(e, D, gap):
    full = expand(e, PHI2, D + gap)
    assert full.restrict(D).poly == expand(e, PHI2, D).poly


@given(exprs2(4), st.integers(0, 9))
def test_expand_matches_independent_order(e, D):
    # completeness below the cutoff, re-derived one factor at a time
    assert expand(e, PHI2, D).poly == expand_naive(e, PHI2, D).poly


@given(polys(2, 3, -2, 2), st.lists(st.tuples(st.sampled_from(GAMMAS2), st.sampled_from([-1, 1])), max_size=3),
       st.integers(0, 8))
def test_polynomial_valued_expression(num, factors, D):
    from perideno.lattice import binomial_product

    p = num * binomial_product(factors, 2)
    e = RationalExpr(p, tuple(factors))
    assert expand(e, PHI2, D).poly == num.truncate(PHI2, D)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("borel", list(Borel))
def test_default_gradings_admissible(n, borel):
    # construction checks positive roots and every S_n-image of each beta-chain weight
    phi = make_root_datum(n, borel).default_grading()
    assert len(phi.phi) == n


# -- verifiers -----------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 5))
def test_exact_and_series_agree(n):
    for fn in (verify_thin_th1, verify_thick):
        assert fn(n, Strategy.exact()).verdict is fn(n, Strategy.series(cutoff=6)).verdict is Verdict.VERIFIED


@pytest.mark.parametrize("n", range(2, 7))
def test_a_antisymmetrized(n):
    assert verify_thin_th1(n, Strategy.exact()).check("A-antisymmetrized").ok


@pytest.mark.parametrize("n", range(2, 7))
def test_two_orbits_net_two(n):
    from perideno.verify import thick_two_orbits_checks

    assert all(c.ok for c in thick_two_orbits_checks(n))


@pytest.mark.parametrize("n", range(1, 5))
def test_division_safety(n):
    from perideno.verify import verify_kac_euler

    rep = verify_kac_euler(n, 6, 8)
    assert [c.ok for c in rep.checks if c.name.startswith("division-safety")] and rep.verdict is Verdict.VERIFIED
