import pytest
from hypothesis import given, strategies as st

from obcalc.zmodule import AbelianGroup, IntMatrix, cokernel, cokernel_of_columns, smith_normal_form

from oracles import cokernel_signature, det, invariant_factors


def small_matrices(max_dim=4, bound=9):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def test_snf_known_example():
    U, D, V = smith_normal_form(IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert D.diagonal() == [2, 6, 12]


def test_zero_matrix_is_free():
    assert cokernel(IntMatrix.zeros(3, 2)) == AbelianGroup(3)


def test_cokernel_of_no_columns():
    assert cokernel_of_columns([], 2) == AbelianGroup(2)


def test_group_printing():
    assert str(AbelianGroup(0)) == "0"
    assert str(AbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"


def test_group_sum_is_canonical():
    # Z/2 + Z/3 is cyclic of order 6
    assert AbelianGroup(0, (2,)) + AbelianGroup(0, (3,)) == AbelianGroup(0, (6,))


def test_bad_torsion_chain_rejected():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianGroup(0, (1,))


def test_from_diagonal_counts_zero_entries_as_free():
    assert AbelianGroup.from_diagonal([1, 3, 0], 4) == AbelianGroup(2, (3,))


@given(small_matrices())
def test_snf_is_unimodular_diagonal_chain(rows):
    m = IntMatrix.from_rows(rows)
    U, D, V = smith_normal_form(m)
    assert U @ m @ V == D
    assert abs(U.determinant()) == 1 and abs(V.determinant()) == 1
    assert D.is_diagonal()
    diag = D.diagonal()
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(small_matrices(max_dim=3))
def test_snf_matches_determinantal_divisors(rows):
    _, D, _ = smith_normal_form(IntMatrix.from_rows(rows))
    assert [d for d in D.diagonal() if d] == invariant_factors(rows)


@given(small_matrices(max_dim=3))
def test_cokernel_matches_oracle(rows):
    g = cokernel(IntMatrix.from_rows(rows))
    assert (g.free_rank, g.torsion) == cokernel_signature(rows)


@given(small_matrices(max_dim=3), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3))
def test_cokernel_invariant_under_row_operation(rows, i, j, k):
    n = len(rows)
    i, j = i % n, j % n
    if i == j:
        return
    moved = [list(r) for r in rows]
    moved[i] = [a + k * b for a, b in zip(moved[i], moved[j])]
    assert cokernel(IntMatrix.from_rows(rows)) == cokernel(IntMatrix.from_rows(moved))


@given(small_matrices(max_dim=3))
def test_determinant_matches_oracle(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert IntMatrix.from_rows(sq).determinant() == det(sq)
