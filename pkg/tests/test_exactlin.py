import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schanuel_lab.errors import DimensionMismatch, NotSquare
from schanuel_lab.exactlin import (
    FpMatrix,
    FpScalar,
    cokernel_projection,
    invert,
    kernel_basis,
    rank,
    rref,
    solve_right,
    validate_prime,
)


def M(p, rows):
    return FpMatrix(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1))


# --- FpScalar / prime validation ---

def test_prime_validation():
    for p in (2, 3, 5, 7, 2**31 - 1):
        validate_prime(p)
    for bad in (0, 1, 4, 9, 2**31, 15):
        with pytest.raises(ValueError):
            validate_prime(bad)


def test_scalar_arithmetic():
    a = FpScalar(2, 5)
    b = FpScalar(4, 5)
    assert (a + b).value == 1
    assert (a * b).value == 3
    assert (-a).value == 3
    assert a.inverse().value == 3
    with pytest.raises(ValueError):
        FpScalar(5, 5)
    with pytest.raises(ZeroDivisionError):
        FpScalar(0, 5).inverse()


# --- rref examples ---

def test_rref_identity_f2():
    m = FpMatrix.identity(2, 2)
    reduced, pivots, rk = rref(m)
    assert reduced == m
    assert pivots == (0, 1)
    assert rk == 2


def test_rref_zero_f3():
    m = FpMatrix.zeros(3, 3, 2)
    reduced, pivots, rk = rref(m)
    assert reduced == m
    assert pivots == ()
    assert rk == 0


def test_rref_rank_one_f2():
    m = M(2, [[1, 1], [1, 1]])
    reduced, pivots, rk = rref(m)
    assert reduced == M(2, [[1, 1], [0, 0]])
    assert pivots == (0,)
    assert rk == 1


# --- kernel examples ---

def test_kernel_single_relation_f2():
    m = M(2, [[1, 1]])
    k = kernel_basis(m)
    assert k == M(2, [[1], [1]])


def test_kernel_identity_empty():
    for n in (0, 1, 3):
        k = kernel_basis(FpMatrix.identity(5, n))
        assert k.shape == (n, 0)


def test_kernel_zero_full():
    k = kernel_basis(FpMatrix.zeros(3, 2, 3))
    assert k == FpMatrix.identity(3, 3)


# --- solve examples ---

def test_solve_identity_returns_rhs():
    b = M(7, [[3, 1], [0, 5]])
    x = solve_right(FpMatrix.identity(7, 2), b)
    assert x == b


def test_solve_free_variable_zeroed():
    x = solve_right(M(2, [[1, 1]]), M(2, [[1]]))
    assert x == M(2, [[1], [0]])


def test_solve_inconsistent():
    assert solve_right(FpMatrix.zeros(2, 1, 1), M(2, [[1]])) is None


def test_solve_row_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_right(FpMatrix.zeros(2, 1, 1), FpMatrix.zeros(2, 2, 1))


# --- cokernel examples ---

def test_cokernel_identity():
    proj, dim = cokernel_projection(FpMatrix.identity(3, 3))
    assert dim == 0
    assert proj.shape == (0, 3)


def test_cokernel_zero():
    proj, dim = cokernel_projection(FpMatrix.zeros(2, 3, 2))
    assert dim == 3
    assert proj == FpMatrix.identity(2, 3)


def test_cokernel_column_11_f2_matches_enumeration():
    # independent oracle: every 1x2 map over F_2 killing (1,1), up to scale
    m = M(2, [[1], [1]])
    proj, dim = cokernel_projection(m)
    assert dim == 1
    candidates = [
        c
        for c in itertools.product(range(2), repeat=2)
        if (c[0] + c[1]) % 2 == 0 and any(c)
    ]
    assert [proj.entry(0, 0), proj.entry(0, 1)] in [list(c) for c in candidates]
    assert (proj @ m).is_zero


# --- invert examples ---

def test_invert_identity():
    assert invert(FpMatrix.identity(5, 4)) == FpMatrix.identity(5, 4)


def test_invert_shear_self_inverse_f2():
    s = M(2, [[1, 1], [0, 1]])
    assert invert(s) == s


def test_invert_singular():
    assert invert(M(2, [[1, 1], [1, 1]])) is None


def test_invert_not_square():
    with pytest.raises(NotSquare):
        invert(FpMatrix.zeros(2, 2, 3))


def test_invert_dim_zero():
    assert invert(FpMatrix.zeros(3, 0, 0)) == FpMatrix.zeros(3, 0, 0)


# --- properties ---

primes = st.sampled_from([2, 3, 5])


@st.composite
def fp_matrices(draw, max_dim=4):
    p = draw(primes)
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    entries = draw(
        st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c)
    )
    return FpMatrix.from_flat(p, r, c, entries)


@settings(max_examples=80, deadline=None)
@given(fp_matrices())
def test_rref_idempotent(m):
    once = rref(m).reduced
    assert rref(once).reduced == once


@settings(max_examples=80, deadline=None)
@given(fp_matrices())
def test_kernel_annihilates_and_has_right_rank(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero
    assert k.cols == m.cols - rank(m)
    assert rank(k) == k.cols


@settings(max_examples=80, deadline=None)
@given(fp_matrices())
def test_cokernel_annihilates_and_is_surjective(m):
    proj, dim = cokernel_projection(m)
    assert (proj @ m).is_zero
    assert dim == m.rows - rank(m)
    assert rank(proj) == dim


@settings(max_examples=80, deadline=None)
@given(fp_matrices(max_dim=3), st.data())
def test_solve_right_solves_consistent_systems(a, data):
    p = a.p
    n = data.draw(st.integers(0, 3))
    entries = data.draw(
        st.lists(st.integers(0, p - 1), min_size=a.cols * n, max_size=a.cols * n)
    )
    x0 = FpMatrix.from_flat(p, a.cols, n, entries)
    b = a @ x0
    x = solve_right(a, b)
    assert x is not None
    assert a @ x == b


@settings(max_examples=80, deadline=None)
@given(fp_matrices(max_dim=4))
def test_invert_two_sided(m):
    if m.rows != m.cols:
        return
    x = invert(m)
    if x is None:
        assert rank(m) < m.rows
    else:
        eye = FpMatrix.identity(m.p, m.rows)
        assert m @ x == eye
        assert x @ m == eye


def test_matmul_chunking_large_prime():
    # p close to 2**31 forces the chunked accumulation path
    p = 2**31 - 1
    a = FpMatrix(p, np.full((2, 5), p - 1, dtype=np.int64))
    b = FpMatrix(p, np.full((5, 2), p - 1, dtype=np.int64))
    got = a @ b
    expected = (5 * (p - 1) * (p - 1)) % p
    assert got.to_flat_list() == [expected] * 4
