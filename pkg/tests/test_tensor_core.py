import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonent.tensor_core import (
    BosonState,
    MultiIndex,
    SymmetricTensor,
    TensorFileError,
    ascending_of,
    basis_tensor,
    boson_distance,
    dim_sym,
    expand_full,
    format_tensor,
    hs_inner,
    index_table,
    multi_indices,
    multiplicity,
    parse_tensor,
    product_tensor,
    rank,
    read_tensor,
    symmetrize,
    unrank,
    write_tensor,
)


def random_tensor(rng, n, m):
    d = dim_sym(n, m)
    return SymmetricTensor(n, m, rng.standard_normal(d) + 1j * rng.standard_normal(d))


# oracles: brute-force enumeration over [n]^m


def enum_sorted(n, m):
    return sorted({tuple(sorted(j)) for j in itertools.product(range(1, n + 1), repeat=m)})


def orbit_size(i, n):
    return sum(1 for j in itertools.product(range(1, n + 1), repeat=len(i)) if tuple(sorted(j)) == tuple(i))


@pytest.mark.parametrize("n,m", [(1, 1), (1, 5), (2, 1), (2, 4), (3, 3), (4, 2), (3, 5)])
def test_dim_matches_enumeration(n, m):
    assert dim_sym(n, m) == len(enum_sorted(n, m))


def test_dim_known_values():
    assert dim_sym(2, 4) == 5
    assert dim_sym(3, 3) == 10
    assert dim_sym(2, 50) == 51


def test_dim_rejects_bad_and_huge():
    with pytest.raises(ValueError):
        dim_sym(0, 3)
    with pytest.raises(ValueError):
        dim_sym(2, 0)
    with pytest.raises(OverflowError):
        dim_sym(1000, 1000)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 4), (4, 3)])
def test_multiplicity_matches_orbit_count(n, m):
    for i in enum_sorted(n, m):
        mu = multiplicity(MultiIndex(i, n))
        assert mu.exact
        assert mu.value == orbit_size(i, n)


def test_multiplicity_examples():
    assert multiplicity(MultiIndex((1, 1, 2), 2)).value == 3
    assert multiplicity(MultiIndex((1, 2, 3), 3)).value == 6
    assert multiplicity(MultiIndex((1, 1, 1, 1), 2)).value == 1


def test_multiplicity_large_is_inexact_only_on_request():
    i = MultiIndex(tuple(range(1, 31)), 30)  # 30! overflows 64 bits
    with pytest.raises(OverflowError):
        multiplicity(i)
    mu = multiplicity(i, allow_inexact=True)
    assert not mu.exact
    assert math.isclose(mu.value, math.factorial(30), rel_tol=1e-10)
    # 20! still fits, so it stays exact
    assert multiplicity(MultiIndex(tuple(range(1, 21)), 20)).value == math.factorial(20)


@pytest.mark.parametrize("n,m", [(2, 5), (3, 4), (4, 3)])
def test_rank_is_lex_order(n, m):
    expected = enum_sorted(n, m)
    got = [i.entries for i in multi_indices(n, m)]
    assert got == expected
    for r, e in enumerate(expected):
        assert rank(MultiIndex(e, n)) == r
        assert unrank(r, n, m).entries == e


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(1, 10), st.data())
def test_rank_unrank_roundtrip(n, m, data):
    r = data.draw(st.integers(0, dim_sym(n, m) - 1))
    assert rank(unrank(r, n, m)) == r


def test_unrank_out_of_range():
    with pytest.raises(IndexError):
        unrank(-1, 2, 3)
    with pytest.raises(IndexError):
        unrank(dim_sym(2, 3), 2, 3)
    assert unrank(0, 3, 4).entries == (1, 1, 1, 1)
    assert unrank(dim_sym(3, 4) - 1, 3, 4).entries == (3, 3, 3, 3)


def test_multi_index_validation():
    with pytest.raises(ValueError):
        MultiIndex((2, 1), 2)
    with pytest.raises(ValueError):
        MultiIndex((1, 3), 2)
    i = MultiIndex((1, 1, 2, 3, 3, 3), 3)
    assert i.block_sizes() == [2, 1, 3]
    assert i.counts() == [2, 1, 3]
    assert ascending_of((3, 1, 2, 1), 3).entries == (1, 1, 2, 3)


def test_index_table_consistency():
    t = index_table(3, 3)
    assert t.entries.shape == (10, 3)
    assert np.all(t.counts.sum(axis=1) == 3)
    for r, row in enumerate(t.entries):
        c = multiplicity(MultiIndex(row, 3)).value
        assert math.isclose(t.sqrt_c[r], math.sqrt(c))


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (3, 3)])
def test_hs_inner_matches_full_expansion(n, m):
    rng = np.random.default_rng(1)
    S, T = random_tensor(rng, n, m), random_tensor(rng, n, m)
    full = np.vdot(expand_full(S).ravel(), expand_full(T).ravel())
    assert np.isclose(hs_inner(S, T), full)
    assert np.isclose(T.norm() ** 2, np.sum(np.abs(expand_full(T)) ** 2))


@pytest.mark.parametrize("n,m", [(2, 4), (3, 3)])
def test_symmetrize_inverts_expand(n, m):
    rng = np.random.default_rng(2)
    T = random_tensor(rng, n, m)
    full = expand_full(T)
    for perm in itertools.permutations(range(m)):
        assert np.allclose(full, np.transpose(full, perm))
    assert symmetrize(full).allclose(T)


def test_symmetrize_projects_nonsymmetric_input():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((2, 2, 2)) + 0j
    avg = sum(np.transpose(A, p) for p in itertools.permutations(range(3))) / 6
    assert np.allclose(expand_full(symmetrize(A)), avg)


def test_basis_is_orthonormal():
    basis = [basis_tensor(i) for i in multi_indices(3, 3)]
    G = np.array([[hs_inner(a, b) for b in basis] for a in basis])
    assert np.allclose(G, np.eye(len(basis)))
    # ê_(1,2) expands to (e1e2 + e2e1)/sqrt(2)
    full = expand_full(basis_tensor(MultiIndex((1, 2), 2)))
    assert np.allclose(full, np.array([[0, 1], [1, 0]]) / math.sqrt(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_product_tensor_is_outer_power(n, m, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    full = v
    for _ in range(m - 1):
        full = np.multiply.outer(full, v)
    assert np.allclose(expand_full(product_tensor(v, m)), full)
    assert np.isclose(product_tensor(v, m).norm(), np.linalg.norm(v) ** m)


def test_boson_state_and_distance():
    rng = np.random.default_rng(4)
    T = random_tensor(rng, 2, 3)
    with pytest.raises(ValueError):
        BosonState(2, 3, T.coeffs)
    psi = BosonState.from_tensor(T, normalize=True)
    phi = BosonState.from_tensor(T.scaled(np.exp(0.7j)), normalize=True)
    assert boson_distance(psi, phi) < 1e-7
    e = basis_tensor(MultiIndex((1, 1, 1), 2))
    f = basis_tensor(MultiIndex((2, 2, 2), 2))
    assert math.isclose(boson_distance(e, f), math.sqrt(2))


def test_coefficients_are_read_only():
    T = random_tensor(np.random.default_rng(5), 2, 2)
    with pytest.raises(ValueError):
        T.coeffs[0] = 1.0
    with pytest.raises(ValueError):
        SymmetricTensor(2, 2, np.ones(4))


def test_symmetric_coefficient_relation():
    T = random_tensor(np.random.default_rng(6), 3, 3)
    full = expand_full(T)
    for r, i in enumerate(multi_indices(3, 3)):
        j = tuple(x - 1 for x in i.entries)
        assert T.coefficient(i) == T.coeffs[r]
        assert np.isclose(T.coeffs[r], full[j] * math.sqrt(multiplicity(i).value))
        assert np.isclose(T.symmetric_coefficients()[r], full[j] * multiplicity(i).value)


def test_expand_cap():
    T = SymmetricTensor(4, 12, np.zeros(dim_sym(4, 12)))
    with pytest.raises(MemoryError):
        expand_full(T, cap=10_000)


def test_file_roundtrip(tmp_path):
    T = random_tensor(np.random.default_rng(7), 3, 4)
    path = tmp_path / "t.txt"
    write_tensor(T, path)
    U = read_tensor(path)
    assert (U.n, U.m) == (3, 4)
    assert np.array_equal(U.coeffs, T.coeffs)
    assert format_tensor(U) == format_tensor(T)


def test_parse_sparse_and_errors():
    T = parse_tensor("symtensor n=2 m=2 basis=orthonormal\n1 2 1.0 0.0\n")
    assert np.allclose(T.coeffs, [0, 1, 0])
    bad = [
        ("symtensor n=2 m=2\n", 1),
        ("symtensor n=2 m=2 basis=orthonormal\n1 2 1.0\n", 2),
        ("symtensor n=2 m=2 basis=orthonormal\n1 1 1 0\n2 1 1.0 0.0\n", 3),
        ("symtensor n=2 m=2 basis=orthonormal\n1 2 a 0.0\n", 2),
        ("symtensor n=2 m=2 basis=orthonormal\n1 2 1 0\n1 2 1 0\n", 3),
    ]
    for text, line in bad:
        with pytest.raises(TensorFileError) as info:
            parse_tensor(text)
        assert info.value.lineno == line
