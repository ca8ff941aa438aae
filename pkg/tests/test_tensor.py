import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gorhom.algebras import LEFT, RIGHT, module_tensor, regular, simple_top, truncated_polynomial
from gorhom.api import ModuleError, WindowError
from gorhom.complexes import ChainComplex, Tail, homology_at, long_exact_sequence
from gorhom.corpus import Corpus
from gorhom.functors import HomologyFunctors
from gorhom.linalg import Domain, HomologyGroup, Matrix
from gorhom.resolutions import projective_resolution
from gorhom.tensor import (
    cosyzygy_unbounded_homology,
    homology_window,
    plan_window,
    shifted_tensor,
    stable_tensor_homology,
    syzygy_shift_equivalence,
    tensor_complexes,
    tensor_homology,
    tensor_sequence_left,
    tensor_sequence_right,
    unbounded_tensor_homology,
)
from strategies import bounded_complexes

F2 = Domain.prime(2)
F3 = Domain.prime(3)
QQ = Domain.rational()
INT = Domain.integer()
R2 = truncated_polynomial(F2, 2)
X = R2.left_regular[1]


def periodic_x(side: str = RIGHT) -> ChainComplex:
    R = regular(R2, side)
    return ChainComplex.create(R2, side, {0: R}, {0: X}, lower=Tail.periodic(1), upper=Tail.periodic(1), name="T")


def k_left() -> ChainComplex:
    return ChainComplex.concentrated(simple_top(R2, LEFT), 0, name="k")


def test_plan_window_of_bounded_factor() -> None:
    plan = plan_window(periodic_x(), k_left(), -2, 3)
    assert plan.right_range == (0, 0)
    assert plan.left_range == (-3, 4)
    assert plan.pairs(1) == [(1, 0)]


def test_no_window_when_both_factors_are_unbounded() -> None:
    with pytest.raises(WindowError):
        homology_window(periodic_x(), periodic_x(LEFT), 0)


def test_sides_are_checked() -> None:
    k = k_left()
    with pytest.raises(ModuleError):
        tensor_homology(k, k, [0])


def test_concentrated_factors_match_module_tensor() -> None:
    k_r, R_l = simple_top(R2, RIGHT), regular(R2, LEFT)
    groups = tensor_homology(
        ChainComplex.concentrated(k_r, 0), ChainComplex.concentrated(R_l, 0), [-1, 0, 1]
    )
    assert groups[0] == module_tensor(k_r, R_l).group()
    assert groups[-1].is_zero and groups[1].is_zero


def test_periodic_complex_against_simple() -> None:
    T = periodic_x()
    for n, group in tensor_homology(T, k_left(), range(-4, 5)).items():
        assert group.dimension == 1, n
    assert homology_window(T, k_left(), 7).dimension == 1


def test_periodic_complex_against_free_module() -> None:
    R = ChainComplex.concentrated(regular(R2, LEFT), 0)
    assert all(g.is_zero for g in tensor_homology(periodic_x(), R, range(-3, 4)).values())


def test_fragment_squares_to_zero() -> None:
    fragment = tensor_complexes(periodic_x(), k_left(), -1, 1)
    fragment.complex.validate()
    with pytest.raises(WindowError):
        fragment.homology(5)


def test_integer_coefficients(corpus: Corpus) -> None:
    zz = corpus.module("zz.R")
    C = ChainComplex.create(zz.algebra, RIGHT, {1: zz, 0: zz}, {1: Matrix.from_rows(INT, [[2]])})
    Z = ChainComplex.concentrated(corpus.module("zz.R_left"), 0)
    Z2 = ChainComplex.concentrated(corpus.module("zz.Z2_left"), 0)
    with_z = tensor_homology(C, Z, [0, 1])
    assert with_z[0] == HomologyGroup(INT, 0, (2,))
    assert with_z[1].is_zero
    with_z2 = tensor_homology(C, Z2, [0, 1])
    assert with_z2[0] == with_z2[1] == HomologyGroup(INT, 0, (2,))


def test_shift_moves_homology() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    for i, (shifted, direct) in shifted_tensor(C, k_left(), 2, range(0, 5)).items():
        assert shifted == direct, i


def test_syzygy_shift_against_resolution() -> None:
    F = projective_resolution(simple_top(R2, LEFT), 4).complex
    for n in (1, 2):
        report = syzygy_shift_equivalence(periodic_x(), k_left(), F, n, range(-2, 3))
        assert report.holds
        assert [r.degree for r in report.rows] == [-2, -1, 0, 1, 2]


def test_tensor_with_flat_complex_preserves_exactness(corpus: Corpus) -> None:
    ses = corpus.sequence("f2x2.kRk_left")
    tensored = tensor_sequence_right(periodic_x(), ses.inclusion, ses.projection, -1, 2)
    tensored.verify()
    assert long_exact_sequence(tensored, -1, 2).exact


def test_split_sequence_tensored_on_the_right(corpus: Corpus) -> None:
    ses = corpus.sequence("f2x2.RRkk")
    tensored = tensor_sequence_left(ses.inclusion, ses.projection, k_left(), 0, 0)
    tensored.verify()
    les = long_exact_sequence(tensored, 0, 0)
    assert les.exact
    assert les.term("B", 0).group.dimension == 2


def test_unbounded_and_stable_tensor_homology(corpus: Corpus, functors: HomologyFunctors) -> None:
    k = corpus.module("f2x2.k")
    N = ChainComplex.concentrated(corpus.module("f2x2.k_left"), 0)
    res = functors.complete_resolution(k)
    assert unbounded_tensor_homology(res, N, 0).dimension == 1
    assert all(unbounded_tensor_homology(res, N, i).is_zero for i in range(1, 4))
    assert all(stable_tensor_homology(res, N, i).dimension == 1 for i in range(-2, 3))


def test_cosyzygy_formula() -> None:
    # Co_1 of the periodic complex is k
    assert cosyzygy_unbounded_homology(periodic_x(), 1, k_left(), 0).dimension == 1
    assert all(cosyzygy_unbounded_homology(periodic_x(), 1, k_left(), i).is_zero for i in range(1, 4))


@pytest.mark.parametrize("domain", [F2, F3, QQ], ids=str)
@given(data=st.data())
@settings(max_examples=34, deadline=None)
def test_tensor_signs_and_kunneth(domain: Domain, data: st.DataObject) -> None:
    M = data.draw(bounded_complexes(domain, RIGHT))
    N = data.draw(bounded_complexes(domain, LEFT))
    tensor_complexes(M, N, -1, 7).complex.validate()
    groups = tensor_homology(M, N, range(-1, 8))
    for n, group in groups.items():
        expected = sum(
            homology_at(M, i).dimension * homology_at(N, n - i).dimension for i in range(0, 4) if 0 <= n - i <= 3
        )
        assert group.dimension == expected, n
