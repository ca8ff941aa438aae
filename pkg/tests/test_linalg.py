import math
from fractions import Fraction
from itertools import combinations, product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gorhom.api import DomainError, ShapeError
from gorhom.linalg import (
    Domain,
    HomologyGroup,
    Inconsistency,
    Matrix,
    Solution,
    inverse,
    is_invertible,
    presented_group,
    rank,
    rank_kernel_image,
    smith_normal_form,
    solve_linear,
)

F2 = Domain.prime(2)
F3 = Domain.prime(3)
QQ = Domain.rational()
INT = Domain.integer()


def small_rows(max_entry: int, max_size: int = 4):
    def rows(shape):
        m, n = shape
        return st.lists(
            st.lists(st.integers(-max_entry, max_entry), min_size=n, max_size=n), min_size=m, max_size=m
        )

    return st.tuples(st.integers(1, max_size), st.integers(1, max_size)).flatmap(rows)


def determinantal_invariants(rows):
    """Invariant factors as quotients of consecutive gcds of k x k minors."""
    A = sympy.Matrix(rows)
    m, n = A.shape
    out, previous = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(n), k):
                g = math.gcd(g, int(A.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // previous)
        previous = g
    return out


def test_domain_rejects_composite_modulus() -> None:
    with pytest.raises(DomainError):
        Domain.prime(4)


def test_domain_parse() -> None:
    assert Domain.parse("GF(5)") == Domain.prime(5)
    assert Domain.parse("QQ") == QQ
    assert Domain.parse("zz") == INT
    with pytest.raises(DomainError):
        Domain.parse("RR")


def test_entries_are_canonical() -> None:
    A = Matrix.from_rows(F3, [[4, -1]])
    assert A.rows == ((1, 2),)
    B = Matrix.from_rows(QQ, [["2/4", 3]])
    assert B[0, 0] == Fraction(1, 2)
    assert Matrix.from_rows(F3, [["1/2"]])[0, 0] == 2
    with pytest.raises(DomainError):
        Matrix.from_rows(INT, [["1/2"]])


def test_shape_mismatch() -> None:
    with pytest.raises(ShapeError):
        Matrix.from_rows(F2, [[1, 0]]) @ Matrix.from_rows(F2, [[1, 0]])


def test_rank_of_zero_map() -> None:
    r, kernel, image = rank_kernel_image(Matrix.zeros(F2, 2, 3))
    assert r == 0
    assert kernel.ncols == 3
    assert image.ncols == 0


def test_rank_of_identity() -> None:
    r, kernel, image = rank_kernel_image(Matrix.identity(QQ, 3))
    assert r == 3
    assert kernel.ncols == 0
    assert image.ncols == 3


def test_rank_of_all_ones_over_f2() -> None:
    A = Matrix.from_rows(F2, [[1, 1], [1, 1]])
    r, kernel, _ = rank_kernel_image(A)
    assert r == 1
    assert kernel.columns() == [(1, 1)]


def test_rank_kernel_image_rejects_integers() -> None:
    with pytest.raises(DomainError):
        rank_kernel_image(Matrix.identity(INT, 2))


@given(small_rows(2, 3))
@settings(max_examples=200, deadline=None)
def test_kernel_dimension_matches_enumeration_over_f3(rows) -> None:
    A = Matrix.from_rows(F3, rows)
    r, kernel, image = rank_kernel_image(A)
    assert r + kernel.ncols == A.ncols
    assert image.ncols == r
    assert (A @ kernel).is_zero()
    solutions = sum(1 for v in product(range(3), repeat=A.ncols) if all(x == 0 for x in A.apply(v)))
    assert solutions == 3 ** kernel.ncols


@given(small_rows(5))
@settings(max_examples=200, deadline=None)
def test_rational_rank_matches_sympy(rows) -> None:
    assert rank(Matrix.from_rows(QQ, rows)) == sympy.Matrix(rows).rank()


@pytest.mark.parametrize(
    "rows, invariants",
    [
        ([[2]], (2,)),
        ([[0, 0], [0, 0]], ()),
        ([[2, 4], [6, 8]], (2, 4)),
        ([[2, 0], [0, 3]], (1, 6)),
        ([[4, 0], [0, 6]], (2, 12)),
        ([[6, 4], [4, 6]], (2, 10)),
        ([[1, 2, 3]], (1,)),
        ([[2], [4], [6]], (2,)),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], (1, 3)),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
    ],
)
def test_smith_examples(rows, invariants) -> None:
    A = Matrix.from_rows(INT, rows)
    snf = smith_normal_form(A)
    assert snf.invariants == invariants
    assert snf.U @ A @ snf.V == snf.D


def test_smith_of_empty_matrix() -> None:
    snf = smith_normal_form(Matrix.zeros(INT, 0, 3))
    assert snf.diagonal == ()
    assert snf.V.shape == (3, 3)


def test_smith_rejects_fields() -> None:
    with pytest.raises(DomainError):
        smith_normal_form(Matrix.identity(QQ, 2))


@given(small_rows(6))
@settings(max_examples=80, deadline=None)
def test_smith_decomposition(rows) -> None:
    A = Matrix.from_rows(INT, rows)
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert abs(sympy.Matrix(snf.U.rows).det()) == 1
    assert abs(sympy.Matrix(snf.V.rows).det()) == 1
    m, n = snf.D.shape
    assert all(snf.D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert nonzero == list(diag[: len(nonzero)])
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert nonzero == determinantal_invariants(rows)


def test_solve_identity() -> None:
    sol = solve_linear(Matrix.identity(QQ, 3), [1, "2/3", -4])
    assert isinstance(sol, Solution)
    assert sol.x == (1, Fraction(2, 3), -4)


def test_solve_parity_inconsistency() -> None:
    A = Matrix.from_rows(INT, [[2]])
    sol = solve_linear(A, [3])
    assert isinstance(sol, Inconsistency)
    assert not sol.consistent
    assert sol.modulus == 2
    assert sol.certifies(A, (3,))


def test_solve_over_f2() -> None:
    sol = solve_linear(Matrix.from_rows(F2, [[1, 1], [0, 1]]), [0, 1])
    assert isinstance(sol, Solution)
    assert sol.x == (1, 1)


def test_field_inconsistency_certificate() -> None:
    A = Matrix.from_rows(QQ, [[1], [1]])
    sol = solve_linear(A, [1, 2])
    assert isinstance(sol, Inconsistency)
    assert sol.modulus == 0
    assert sol.certifies(A, (Fraction(1), Fraction(2)))


def test_solve_shape_mismatch() -> None:
    with pytest.raises(ShapeError):
        solve_linear(Matrix.identity(F2, 2), [1])


@given(small_rows(3), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=80, deadline=None)
def test_solution_or_witness_over_integers(rows, rhs) -> None:
    A = Matrix.from_rows(INT, rows)
    b = tuple(rhs[: A.nrows])
    sol = solve_linear(A, b)
    if isinstance(sol, Solution):
        assert A.apply(sol.x) == b
    else:
        assert sol.certifies(A, b)


def test_inverse_and_invertibility() -> None:
    A = Matrix.from_rows(INT, [[2, 1], [1, 1]])
    assert is_invertible(A)
    assert A @ inverse(A) == Matrix.identity(INT, 2)
    assert not is_invertible(Matrix.from_rows(INT, [[2, 0], [0, 1]]))
    assert is_invertible(Matrix.from_rows(QQ, [[2, 0], [0, 1]]))


def test_presented_groups() -> None:
    assert presented_group(INT, 1, Matrix.from_rows(INT, [[2]])) == HomologyGroup(INT, 0, (2,))
    assert str(presented_group(INT, 2, Matrix.from_rows(INT, [[2], [0]]))) == "Z + Z/2"
    assert presented_group(F2, 2, Matrix.from_rows(F2, [[1], [1]])).dimension == 1
    assert HomologyGroup.zero(QQ).is_zero
    with pytest.raises(DomainError):
        _ = HomologyGroup(INT, 1).dimension
