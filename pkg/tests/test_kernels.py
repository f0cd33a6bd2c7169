"""The numba and numpy kernel backends must agree bit for bit."""
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from perideno import kernels
from perideno.lattice import Permutation, transposition_count_sign

BACKENDS = kernels.available_backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="numba unavailable")


def run_on(name, fn, *args):
    prev = kernels.use_backend(name)
    try:
        return fn(*args)
    finally:
        kernels.use_backend(prev)


def rows(n, m, lo=-4, hi=4):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)


@pytest.mark.parametrize("backend", BACKENDS)
def test_sort_sign_against_bubble_count(backend):
    perms = np.array(list(itertools.permutations(range(5))), dtype=np.int64)
    dom, sign = run_on(backend, kernels.sort_sign, perms)
    assert (dom == np.arange(4, -1, -1)).all()
    for row, s in zip(perms.tolist(), sign.tolist()):
        # sorting decreasingly: compare with the sign of the permutation reversed
        assert s == transposition_count_sign([5 - x for x in row])


@pytest.mark.parametrize("backend", BACKENDS)
def test_sort_sign_zero_on_repeat(backend):
    _, sign = run_on(backend, kernels.sort_sign, np.array([[1, 1, 0], [0, 1, 2]]))
    assert sign.tolist() == [0, -1]


@pytest.mark.parametrize("backend", BACKENDS)
def test_geometric_lattice_counts(backend):
    # 1 / ((1 - x)(1 - y)) up to total degree 3: 10 monomials
    exps, signs, origin = run_on(
        backend, kernels.geometric_lattice, np.zeros((1, 2), np.int64), np.array([3]),
        np.array([[1, 0], [0, 1]]), np.array([[1, 1]]), np.array([0, 0]))
    assert len(exps) == 10 and set(signs.tolist()) == {1} and set(origin.tolist()) == {0}
    assert {tuple(r) for r in exps.tolist()} == {(-a, -b) for a in range(4) for b in range(4) if a + b <= 3}


@pytest.mark.parametrize("backend", BACKENDS)
def test_geometric_lattice_negative_budget_dropped(backend):
    exps, _, origin = run_on(
        backend, kernels.geometric_lattice, np.zeros((2, 1), np.int64), np.array([-1, 0]),
        np.array([[1]]), np.array([[1], [1]]), np.array([1]))
    assert exps.tolist() == [[0]] and origin.tolist() == [1]


def test_row_packer_roundtrip():
    a = np.array([[-3, 5, 0], [2, -1, 7], [0, 0, 0]])
    p = kernels.RowPacker.covering(a)
    assert (p.unpack(p.pack(a)) == a).all()


def test_row_packer_overflow():
    with pytest.raises(OverflowError):
        kernels.RowPacker([0] * 8, [2**10] * 8)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


@needs_both
@given(st.integers(1, 5).flatmap(lambda n: rows(n, 12)))
def test_sort_sign_agree(data):
    a = np.array(data, dtype=np.int64)
    x = run_on("numpy", kernels.sort_sign, a)
    y = run_on("numba", kernels.sort_sign, a)
    assert (x[0] == y[0]).all() and (x[1] == y[1]).all()


@needs_both
@given(rows(3, 4), st.lists(st.integers(-2, 6), min_size=4, max_size=4), st.integers(0, 1))
def test_geometric_lattice_agree(starts, budgets, flip):
    starts = np.array(starts, dtype=np.int64)
    gammas = np.array([[1, -1, 0], [0, 1, 1], [2, 0, 0]], dtype=np.int64)
    degs = np.tile(np.array([1, 2, 3]), (4, 1))
    flips = np.array([flip, 1 - flip, 1])
    args = (starts, np.array(budgets), gammas, degs, flips)
    a = run_on("numpy", kernels.geometric_lattice, *args)
    b = run_on("numba", kernels.geometric_lattice, *args)
    key = lambda t: sorted(zip(t[2].tolist(), map(tuple, t[0].tolist()), t[1].tolist()))
    assert key(a) == key(b)


@needs_both
@given(st.lists(st.integers(-20, 20), max_size=40), st.data())
def test_merge_agree(keys, data):
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(keys), max_size=len(keys)))
    k, c = np.array(keys, np.int64), np.array(coeffs, np.int64)
    a = run_on("numpy", kernels.merge, k, c)
    b = run_on("numba", kernels.merge, k, c)
    assert a[0].tolist() == b[0].tolist() and a[1].tolist() == b[1].tolist()
    assert 0 not in a[1].tolist()


@needs_both
@given(rows(2, 6), rows(2, 5), st.integers(-4, 6))
def test_convolve_agree(ea, eb, cutoff):
    ea, eb = np.array(ea, np.int64), np.array(eb, np.int64)
    ca, cb = np.arange(1, 7, dtype=np.int64), np.arange(-2, 3, dtype=np.int64)
    da, db = -ea.sum(axis=1), -eb.sum(axis=1)
    outs = []
    for name in ("numpy", "numba"):
        e, c = run_on(name, kernels.convolve, ea, ca, da, eb, cb, db, cutoff)
        outs.append(run_on(name, kernels.merge_rows, e, c))
    assert outs[0][0].tolist() == outs[1][0].tolist() and outs[0][1].tolist() == outs[1][1].tolist()


@pytest.mark.parametrize("backend", BACKENDS)
def test_full_identity_under_each_backend(backend):
    from perideno.verify import Strategy, Verdict, verify_thin_chain

    rep = run_on(backend, verify_thin_chain, 3, Strategy.series(cutoff=8))
    assert rep.verdict is Verdict.VERIFIED


@needs_both
@given(st.lists(st.integers(-5, 5), max_size=30), st.data())
def test_merge_agree_sparse_keys(keys, data):
    # widely spread keys take the sort-based path rather than the dense table
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(keys), max_size=len(keys)))
    k = np.array([x * 10**12 for x in keys], np.int64)
    c = np.array(coeffs, np.int64)
    a = run_on("numpy", kernels.merge, k, c)
    b = run_on("numba", kernels.merge, k, c)
    assert a[0].tolist() == b[0].tolist() and a[1].tolist() == b[1].tolist()
