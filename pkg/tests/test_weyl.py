import math

import pytest

from perideno.errors import AntiInvarianceViolation
from perideno.lattice import LaurentPoly, Permutation
from perideno.roots import Borel, make_root_datum, sign_tau_closed_form, tau_n
from perideno.verify import two_orbits_analysis
from perideno.weyl import (
    CosetKind,
    antisymmetrize,
    antisymmetrize_naive,
    compute_A,
    coset_representatives,
    iota,
    is_regular,
    j_value,
    j_value_by_cosets,
    orbit_decompose,
    orbit_sum,
    reassemble,
    regular_part,
    supp_A_violations,
)

M = LaurentPoly.monomial


class TestAntisymmetrize:
    def test_n2_unit(self):
        assert antisymmetrize(M((1, 0)), 2) == M((1, 0)) - M((0, 1))

    def test_non_regular_vanishes(self):
        assert antisymmetrize(M((1, 1, 0))).is_zero()

    def test_rho_three_against_loop(self):
        rho = make_root_datum(3, Borel.THIN).rho
        out = antisymmetrize(M(rho))
        assert len(out) == 6
        assert out == antisymmetrize_naive(M(rho))
        # explicit loop over the six permutations
        manual = LaurentPoly.zero(3)
        for w in Permutation.all(3):
            manual = manual + M(w.act(rho), w.sign)
        assert out == manual

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            antisymmetrize(M((1, 0)), 3)

    def test_fast_path_matches_naive_mixed(self):
        p = M((3, 1, 0, -2), 2) + M((0, 0, 1, 2)) + M((1, 2, 3, 4), -5)
        assert antisymmetrize(p) == antisymmetrize_naive(p)

    def test_orbit_sum_sign(self):
        assert orbit_sum((0, 1)) == M((0, 1)) - M((1, 0))


class TestRegular:
    @pytest.mark.parametrize("lam,expected", [((2, 1, 0), True), ((1, 1, 0), False), ((0,), True)])
    def test_is_regular(self, lam, expected):
        assert is_regular(lam) is expected

    def test_regular_part(self):
        assert regular_part(M((1, 1)) + M((1, 0))) == M((1, 0))
        assert regular_part(LaurentPoly.zero(2)).is_zero()

    @pytest.mark.parametrize("n", range(2, 7))
    def test_regular_part_of_A_inside_W_rho(self, n):
        rho = make_root_datum(n, Borel.THIN).rho
        orbit = {w.act(rho) for w in Permutation.all(n)}
        assert regular_part(compute_A(n)).support() <= orbit


class TestOrbitDecompose:
    def test_single(self):
        assert orbit_decompose(M((1, 0)) - M((0, 1))) == [((1, 0), 1)]

    def test_zero(self):
        assert orbit_decompose(LaurentPoly.zero(3)) == []

    def test_violation(self):
        with pytest.raises(AntiInvarianceViolation) as err:
            orbit_decompose(M((1, 0)))
        assert err.value.transposition == Permutation.transposition(2, 1, 2)

    def test_two_orbits_n3(self):
        info = two_orbits_analysis(3)
        orbits = info["lhs_orbits"]
        assert [c for _, c in orbits] == [1, -1]
        rho = make_root_datum(3, Borel.THICK).rho
        plus = tuple(sorted((x + 1 for x in rho), reverse=True))
        minus = tuple(sorted((x - 1 for x in rho), reverse=True))
        assert [mu for mu, _ in orbits] == [plus, minus]

    def test_reassemble_roundtrip(self):
        p = antisymmetrize(M((3, 0, 1), 2) + M((5, -1, 2), -1))
        assert reassemble(orbit_decompose(p)) == p


class TestCosets:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_sizes(self, n):
        r = n // 2
        assert len(coset_representatives(CosetKind.FULL, n)) == math.factorial(n)
        assert len(coset_representatives(CosetKind.MOD_LAST, n)) == n
        assert len(coset_representatives(CosetKind.MOD_IOTA, n, r)) == math.factorial(n) // math.factorial(r)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_mod_last_hits_every_slot(self, n):
        reps = coset_representatives(CosetKind.MOD_LAST, n)
        assert sorted(w(1) for w in reps) == list(range(1, n + 1))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_mod_iota_is_transversal(self, n):
        r = n // 2
        reps = coset_representatives(CosetKind.MOD_IOTA, n, r)
        sub = [iota(n, s) for s in Permutation.all(r)] if r else [Permutation.identity(n)]
        products = {(y * s).images for y in reps for s in sub}
        assert len(products) == math.factorial(n)
        tail = range(n - r + 1, n + 1)
        for y in reps:
            assert all(y(a) < y(b) for a, b in zip(tail, list(tail)[1:]))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_iota_images_even(self, n):
        r = n // 2
        for s in Permutation.all(r):
            assert iota(n, s).sign == 1

    def test_iota_rejects_too_large(self):
        with pytest.raises(ValueError):
            iota(3, Permutation.identity(2))


class TestA:
    def test_n2(self):
        assert compute_A(2) == M((1, 0))

    def test_n3_support(self):
        A = compute_A(3)
        for k in A.support():
            assert all(0 <= x <= 2 for x in k) and k[0] >= 1 and k[2] <= 1
        assert supp_A_violations(3, A) == []

    def test_n4_a_rho(self):
        assert compute_A(4).coeff(make_root_datum(4, Borel.THIN).rho) == tau_n(4).sign == 1

    @pytest.mark.parametrize("n", range(2, 7))
    def test_support_containment(self, n):
        assert supp_A_violations(n) == []

    @pytest.mark.parametrize("n", range(2, 7))
    def test_iota_invariant(self, n):
        A = compute_A(n)
        for s in Permutation.all(n // 2):
            assert A.act(iota(n, s)) == A

    @pytest.mark.parametrize("n", range(2, 7))
    def test_a_vanishes_off_identity_coset(self, n):
        A = compute_A(n)
        d = make_root_datum(n, Borel.THIN)
        for y in coset_representatives(CosetKind.MOD_IOTA, n, d.r):
            if not y.is_identity():
                assert A.coeff(y.act(d.rho)) == 0
        assert A.coeff(d.rho) == sign_tau_closed_form(n)


class TestJ:
    @pytest.mark.parametrize("n,j", [(2, 1), (3, -1), (5, 2)])
    def test_examples(self, n, j):
        assert j_value(n) == j

    @pytest.mark.parametrize("n", range(2, 8))
    def test_formula(self, n):
        expected = tau_n(n).sign * math.factorial(n // 2)
        assert j_value(n) == expected == j_value_by_cosets(n)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            j_value(0)
