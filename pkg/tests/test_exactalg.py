from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catcohom.errors import GradingMismatch
from catcohom.exactalg import (
    F2,
    INT,
    RAT,
    Complex,
    GroupPresentation,
    Matrix,
    Reducer,
    Ring,
    cohomology_at,
    determinant,
    invariant_factors,
    inverse,
    is_invertible,
    modp,
    nullspace,
    rank,
    smith_normal_form,
)


def small_int_matrices(max_dim=4, bound=6):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def test_ring_parse_and_coercion():
    assert Ring.parse("Z") == INT
    assert Ring.parse("F2") == F2 == Ring.parse("Fp:2")
    assert Ring.parse("GF7") == modp(7)
    assert RAT("3/6") == Fraction(1, 2)
    assert modp(5)(7) == 2
    assert modp(7).inv(3) == 5
    with pytest.raises(ValueError):
        Ring.parse("Fp:4")


def test_snf_known_example():
    M = Matrix.from_lists(INT, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    U, S, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert invariant_factors(M) == [2, 6, 12]


@settings(max_examples=60, deadline=None)
@given(small_int_matrices())
def test_snf_is_a_diagonalization(rows):
    M = Matrix.from_lists(INT, rows, len(rows[0]))
    U, S, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i, i] for i in range(min(S.nrows, S.ncols))]
    assert all(S[i, j] == 0 for i in range(S.nrows) for j in range(S.ncols) if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert len(nonzero) == rank(Matrix.from_lists(RAT, rows, len(rows[0])))


@settings(max_examples=60, deadline=None)
@given(small_int_matrices(bound=1))
def test_f2_rank_matches_generic_elimination(rows):
    M2 = Matrix.from_lists(F2, [[x % 2 for x in r] for r in rows], len(rows[0]))
    M3 = Matrix.from_lists(modp(3), [[x % 2 for x in r] for r in rows], len(rows[0]))
    # over F2 the rank equals the number of invariant factors that are odd
    factors = invariant_factors(Matrix.from_lists(INT, [[x % 2 for x in r] for r in rows],
                                                  len(rows[0])))
    assert rank(M2) == sum(1 for d in factors if d % 2)
    assert rank(M3) == sum(1 for d in factors if d % 3)


@settings(max_examples=40, deadline=None)
@given(small_int_matrices(bound=3))
def test_nullspace_vectors_are_killed(rows):
    M = Matrix.from_lists(RAT, rows, len(rows[0]))
    basis = nullspace(M)
    assert len(basis) == M.ncols - rank(M)
    for vec in basis:
        assert all(v == 0 for v in M.apply(vec).values())


def test_inverse_and_determinant():
    M = Matrix.from_lists(RAT, [[2, 1], [5, 3]])
    assert determinant(M) == 1
    assert M @ inverse(M) == Matrix.identity(RAT, 2)
    assert not is_invertible(Matrix.from_lists(F2, [[1, 1], [1, 1]]))
    assert is_invertible(Matrix.from_lists(INT, [[2, 1], [1, 1]]))
    assert not is_invertible(Matrix.from_lists(INT, [[2, 0], [0, 1]]))


def test_shape_mismatch_is_rejected():
    with pytest.raises(GradingMismatch):
        Matrix.identity(INT, 2) @ Matrix.identity(INT, 3)


def test_kron_dimensions():
    A = Matrix.from_lists(INT, [[1, 2], [3, 4]])
    B = Matrix.from_lists(INT, [[0, 1]])
    K = A.kron(B)
    assert K.shape == (2, 4)
    assert K.to_lists() == [[0, 1, 0, 2], [0, 3, 0, 4]]


def test_presentation_validation():
    assert str(GroupPresentation(INT, 2, [3])) == "Z^2 + Z/3"
    assert str(GroupPresentation(F2, 1)) == "F2"
    with pytest.raises(ValueError):
        GroupPresentation(INT, 0, [2, 3])
    with pytest.raises(ValueError):
        GroupPresentation(F2, 0, [2])


def test_cohomology_of_multiplication_by_two():
    # Z --2--> Z: H^0 = 0, H^1 = Z/2
    cx = Complex(INT, [1, 1], [Matrix.from_lists(INT, [[2]])], "cochain")
    assert cohomology_at(cx, 0) == GroupPresentation(INT, 0)
    assert cohomology_at(cx, 1) == GroupPresentation(INT, 0, [2])
    cx2 = Complex(F2, [1, 1], [Matrix.from_lists(F2, [[0]])], "cochain")
    assert cohomology_at(cx2, 1).dim == 1


def test_reducer_expresses_span_members():
    red = Reducer(RAT)
    assert red.add({0: 1, 1: 1}, "u")
    assert red.add({1: 1}, "v")
    assert not red.add({0: 2, 1: 3})
    assert red.express({0: 2, 1: 3}) == {"u": 2, "v": 1}
