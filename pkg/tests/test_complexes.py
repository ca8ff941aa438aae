import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gorhom.algebras import LEFT, RIGHT, free_module, ground, regular, simple_top, truncated_polynomial
from gorhom.api import ComplexError
from gorhom.complexes import (
    ABOVE,
    BELOW,
    ChainComplex,
    ChainMap,
    Tail,
    cokernel_module,
    cone,
    cone_sequence,
    direct_sum_complex,
    hom_complex,
    homology_at,
    is_acyclic,
    kernel_cokernel,
    long_exact_sequence,
    module_sequence,
    shift,
    truncate_hard,
    truncate_soft,
)
from gorhom.corpus import Corpus
from gorhom.linalg import Domain, HomologyGroup, Matrix
from strategies import bounded_complexes

F2 = Domain.prime(2)
F3 = Domain.prime(3)
R2 = truncated_polynomial(F2, 2)
X = R2.left_regular[1]


def periodic_x(side: str = RIGHT) -> ChainComplex:
    """``... -> R --x--> R --x--> R -> ...`` in every degree."""
    R = regular(R2, side)
    return ChainComplex.create(R2, side, {0: R}, {0: X}, lower=Tail.periodic(1), upper=Tail.periodic(1), name="T")


def test_periodic_complex_is_acyclic() -> None:
    T = periodic_x()
    assert T.dim(-7) == T.dim(11) == 2
    assert T.sup == math.inf and T.inf == -math.inf
    assert not T.is_bounded
    cert = is_acyclic(T)
    assert cert
    assert cert.probe_range == T.required_probe_range()


def test_probe_range_must_cover_one_period() -> None:
    with pytest.raises(ComplexError):
        is_acyclic(periodic_x(), probe_range=(0, 0))


def test_square_of_differential_is_checked() -> None:
    R = regular(R2, RIGHT)
    ident = Matrix.identity(F2, 2)
    with pytest.raises(ComplexError) as info:
        ChainComplex.create(R2, RIGHT, {2: R, 1: R, 0: R}, {2: ident, 1: ident}, name="bad")
    assert info.value.degree == 2


def test_square_of_differential_is_checked_below_the_window() -> None:
    # d_0 d_1 = 0 inside the window but d_1 d_0 != 0 where the lower tail repeats it
    K = ground(F2)
    V = free_module(K, RIGHT, 2)
    d1 = Matrix.from_rows(F2, [[0, 1], [0, 0]])
    d0 = Matrix.from_rows(F2, [[0, 0], [0, 1]])
    assert (d0 @ d1).is_zero()
    with pytest.raises(ComplexError, match="d\\^2") as info:
        ChainComplex.create(K, RIGHT, {1: V, 0: V}, {1: d1, 0: d0}, lower=Tail.periodic(2), name="bad")
    assert info.value.degree < 0


def test_linearity_is_checked() -> None:
    k = simple_top(R2, RIGHT)
    R = regular(R2, RIGHT)
    with pytest.raises(ComplexError):
        ChainComplex.create(R2, RIGHT, {1: k, 0: R}, {1: Matrix.from_rows(F2, [[1], [0]])})


def test_homology_of_bounded_complex() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    assert homology_at(C, 0).dimension == 1
    assert homology_at(C, 1).dimension == 1
    assert homology_at(C, 2).is_zero
    assert C.sup == 1 and C.inf == 0
    assert not is_acyclic(C).acyclic
    assert is_acyclic(C).degree == 0


def test_homology_with_torsion(corpus: Corpus) -> None:
    Z2 = corpus.module("zz.Z2")
    C = ChainComplex.concentrated(Z2, 3)
    assert homology_at(C, 3) == HomologyGroup(Domain.integer(), 0, (2,))
    zz = corpus.module("zz.R")
    D = ChainComplex.create(zz.algebra, RIGHT, {1: zz, 0: zz}, {1: Matrix.from_rows(Domain.integer(), [[3]])})
    assert homology_at(D, 0) == HomologyGroup(Domain.integer(), 0, (3,))
    assert homology_at(D, 1).is_zero


def test_shift_signs_and_degrees() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    S = shift(C, 1)
    assert (S.lo, S.hi) == (1, 2)
    assert S.differential(2) == X.scale(-1)
    assert homology_at(S, 1) == homology_at(C, 0)


def test_truncations() -> None:
    T = periodic_x()
    below = truncate_hard(T, 0, BELOW)
    above = truncate_hard(T, 1, ABOVE)
    assert below.dim(1) == 0 and below.dim(-5) == 2
    assert above.dim(0) == 0 and above.dim(6) == 2
    assert homology_at(below, 0).dimension == 1
    assert homology_at(above, 1).dimension == 1
    soft = truncate_soft(T, 0)
    assert soft.module(0).group().dimension == 1
    assert is_acyclic(soft)


def test_cokernel_module() -> None:
    Co = cokernel_module(periodic_x(), 0)
    assert Co.group().dimension == 1


def test_cone_of_identity_is_acyclic() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    c = cone(ChainMap.identity(C))
    assert is_acyclic(c)
    assert c.dim(1) == 4


def test_cone_sequence_is_exact() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    ses = cone_sequence(ChainMap.identity(C))
    ses.verify()
    les = long_exact_sequence(ses, -1, 3)
    assert les.exact


def test_chain_map_must_commute() -> None:
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})

    def component(n: int) -> Matrix:
        if n == 1:
            return Matrix.identity(F2, 2)
        return Matrix.zeros(F2, C.dim(n), C.dim(n))

    with pytest.raises(ComplexError, match="commute") as info:
        ChainMap.from_function(C, C, component)
    assert info.value.degree == 1


def test_kernel_of_split_surjection() -> None:
    T = periodic_x()
    two = direct_sum_complex([T, T])

    def proj(n: int) -> Matrix:
        return Matrix.identity(F2, 2).hstack(Matrix.zeros(F2, 2, 2))

    f = ChainMap.from_function(two, T, proj)
    kc = kernel_cokernel(f, split=True)
    assert kc.kernel.dim(0) == 2
    assert is_acyclic(kc.kernel)
    assert kc.cokernel.module(0).group().is_zero
    assert f.component(0) @ kc.section(0) == Matrix.identity(F2, 2)


def test_module_sequence_long_exact(corpus: Corpus) -> None:
    ses = corpus.sequence("f2x2.kRk")
    les = long_exact_sequence(ses, 0, 0)
    assert les.exact
    assert les.term("B", 0).group.dimension == 2


def test_module_sequence_rejects_non_exact() -> None:
    k, R = simple_top(R2, LEFT), regular(R2, LEFT)
    with pytest.raises(ComplexError):
        module_sequence(k, Matrix.from_rows(F2, [[0], [1]]), R, Matrix.from_rows(F2, [[0, 0]]), k)


def test_hom_complex_of_periodic_resolution() -> None:
    T = periodic_x(LEFT)
    k = simple_top(R2, LEFT)
    H = hom_complex(T, k)
    for n in range(-3, 4):
        assert homology_at(H, n).dimension == 1


@given(data=st.data(), c=st.integers(0, 2))
@settings(max_examples=50, deadline=None)
def test_cone_of_chain_map_has_exact_long_sequence(data: st.DataObject, c: int) -> None:
    C = data.draw(bounded_complexes(F3, RIGHT))
    D = data.draw(bounded_complexes(F3, RIGHT))
    S = direct_sum_complex([C, D])
    homotopy = {}

    def h(n: int) -> Matrix:
        # C_n -> S_(n+1)
        if n not in homotopy:
            rows, cols = S.dim(n + 1), C.dim(n)
            if rows == 0 or cols == 0:
                homotopy[n] = Matrix.zeros(F3, rows, cols)
            else:
                row = st.lists(st.integers(0, 2), min_size=cols, max_size=cols)
                homotopy[n] = Matrix.from_rows(F3, data.draw(st.lists(row, min_size=rows, max_size=rows)), cols)
        return homotopy[n]

    def component(n: int) -> Matrix:
        rows = [[c if i == j else 0 for j in range(C.dim(n))] for i in range(C.dim(n))]
        rows += [[0] * C.dim(n) for _ in range(D.dim(n))]
        inclusion = Matrix.from_rows(F3, rows, C.dim(n))
        return inclusion + S.differential(n + 1) @ h(n) + h(n - 1) @ C.differential(n)

    f = ChainMap.from_function(C, S, component)
    ses = cone_sequence(f)
    ses.verify()
    assert long_exact_sequence(ses, -1, 5).exact
    if c:
        # f is homotopic to c times the inclusion
        for n in range(0, 5):
            assert homology_at(cone(f), n).dimension == homology_at(D, n).dimension, n
