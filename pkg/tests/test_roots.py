from fractions import Fraction

import pytest

from perideno.lattice import eps_sum, transposition_count_sign, wadd, wscale
from perideno.roots import (
    Borel,
    Part,
    Signing,
    denominator_factors,
    index_sets,
    make_root_datum,
    p_prime_closed_form,
    sign_tau_closed_form,
    tau_n,
)


class TestMakeRootDatum:
    def test_thin_three(self):
        assert make_root_datum(3, Borel.THIN).rho == (2, 1, 0)

    def test_thick_two(self):
        d = make_root_datum(2, Borel.THICK)
        assert d.rho == (-1, -2)
        assert d.betas == ((0, 2), (2, 0))

    def test_thin_one(self):
        d = make_root_datum(1, "thin")
        assert (d.r, d.betas, d.rho) == (0, (), (0,))
        assert d.even_pos == () and d.odd_pos == ()

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            make_root_datum(0, Borel.THIN)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_invariants(self, n):
        half = n * (n - 1) // 2
        thin, thick = make_root_datum(n, Borel.THIN), make_root_datum(n, Borel.THICK)
        for d in (thin, thick):
            assert len(d.even_pos) == half
            assert tuple(Fraction(a) for a in d.rho) == tuple(x - y for x, y in zip(d.rho0, d.rho1))
        assert len(thin.odd_pos) == half and len(thick.odd_pos) == half + n
        assert thin.rho == tuple(n - i for i in range(1, n + 1))
        assert thick.rho == tuple(-i for i in range(1, n + 1))
        assert thin.r == n // 2 and thick.r == n
        assert thin.betas == tuple(wscale(-1, eps_sum(n, [2 * k - 1, 2 * k])) for k in range(1, n // 2 + 1))
        assert thick.betas == tuple(wscale(2, eps_sum(n, [n + 1 - k])) for k in range(1, n + 1))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_rho_up_from_betas(self, n):
        d = make_root_datum(n, Borel.THIN)
        acc = d.rho
        for k, b in enumerate(d.betas, start=1):
            acc = wadd(acc, wscale(n - 2 * k, b))
        assert acc == d.rho_up == eps_sum(n, range(1, 2 * d.r, 2))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_p_prime_sum_plus_first_r_units_is_rho(self, n):
        # the shift is eps_1 + ... + eps_r (the exponent of A), not rho_up
        d = make_root_datum(n, Borel.THIN)
        acc = eps_sum(n, range(1, d.r + 1))
        for i, j in index_sets(d)["P_prime"]:
            acc = wadd(acc, eps_sum(n, [i, j]))
        assert acc == d.rho

    def test_thick_rho1_is_half_sum(self):
        d = make_root_datum(3, Borel.THICK)
        assert d.rho1 == (Fraction(2),) * 3


class TestDenominatorFactors:
    def test_thick_one_odd(self):
        assert denominator_factors(make_root_datum(1, "thick"), Part.ODD, Signing.SUPER) == [((2,), -1)]

    def test_thin_two_odd(self):
        assert denominator_factors(make_root_datum(2, "thin"), "odd", "super") == [((-1, -1), -1)]

    @pytest.mark.parametrize("borel", ["thin", "thick"])
    def test_two_even(self, borel):
        assert denominator_factors(make_root_datum(2, borel), Part.EVEN) == [((1, -1), -1)]

    def test_char_signs(self):
        facs = denominator_factors(make_root_datum(3, "thick"), Part.ODD, Signing.CHAR)
        assert {c for _, c in facs} == {1}


class TestTau:
    def test_two(self):
        t = tau_n(2)
        assert t.is_identity() and t.sign == 1

    def test_five(self):
        assert tau_n(5).sign == 1

    def test_four(self):
        t = tau_n(4)
        assert t.images == (1, 4, 2, 3)
        assert (t(2), t(4), t(3)) == (4, 3, 2)
        assert t.sign == 1 == transposition_count_sign(t.images)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_sign_pattern(self, n):
        expected = 1 if n % 2 == 0 else (-1) ** ((n - 1) // 2)
        assert tau_n(n).sign == expected == sign_tau_closed_form(n)


class TestIndexSets:
    def test_four(self):
        sets = index_sets(make_root_datum(4, "thin"))
        assert sets["P_prime"] == [(1, 2), (1, 3)]

    def test_five(self):
        assert len(index_sets(make_root_datum(5, "thin"))["P_prime"]) == 4

    def test_two_u_empty(self):
        assert index_sets(make_root_datum(2, "thin"))["U"] == []

    def test_rejects_thick(self):
        with pytest.raises(ValueError):
            index_sets(make_root_datum(3, "thick"))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_p_prime_closed_forms(self, n):
        size = len(index_sets(make_root_datum(n, "thin"))["P_prime"])
        assert size == p_prime_closed_form(n)
        if n >= 2:
            expected = Fraction(n * (n - 2), 4) if n % 2 == 0 else Fraction((n - 1) ** 2, 4)
            assert size == expected

    def test_s_prime_three(self):
        sets = index_sets(make_root_datum(3, "thin"))
        assert sets["S_prime"] == [(-1, 0, -1)]
        assert sets["S"] == [(-1, -1, 0)]


class TestJson:
    def test_thin_three(self):
        doc = make_root_datum(3, "thin").to_json()
        assert doc["rho"] == [2, 1, 0] and doc["betas"] == [[-1, -1, 0]]
        assert doc["tau"] == [1, 3, 2]
        assert doc["rho0"] == ["1/1", "0/1", "-1/1"]

    def test_thin_one(self):
        assert make_root_datum(1, "thin").to_json()["betas"] == []

    def test_thick_two(self):
        doc = make_root_datum(2, "thick").to_json()
        assert doc["rho"] == [-1, -2] and doc["betas"] == [[0, 2], [2, 0]]
        assert "index_sets" not in doc
