import math
from dataclasses import replace

import pytest

from gorhom.algebras import (
    LEFT,
    RIGHT,
    cyclic_group_algebra,
    direct_sum,
    is_projective,
    regular,
    simple_top,
    trivial_module,
    truncated_polynomial,
)
from gorhom.api import ResolutionError
from gorhom.complexes import ChainComplex, Tail, is_acyclic
from gorhom.corpus import Corpus
from gorhom.linalg import Domain, Matrix
from gorhom.resolutions import (
    FINITE,
    PERIODIC,
    TRUNCATED,
    assemble_complex_resolution,
    complete_projective_resolution_frobenius,
    complete_resolution_of_acyclic,
    complete_resolution_of_cokernel,
    complete_resolution_of_finite,
    complete_resolution_of_projective,
    fixture_cyclic,
    frobenius_resolver,
    is_F_totally_acyclic,
    is_totally_acyclic,
    pad_split_surjective,
    projective_resolution,
    proper_gorenstein_resolution,
    shift_resolution,
)

F2 = Domain.prime(2)
R2 = truncated_polynomial(F2, 2)
X = R2.left_regular[1]


def periodic_x() -> ChainComplex:
    R = regular(R2, RIGHT)
    return ChainComplex.create(R2, RIGHT, {0: R}, {0: X}, lower=Tail.periodic(1), upper=Tail.periodic(1), name="T")


def test_truncated_resolution_of_simple() -> None:
    P = projective_resolution(simple_top(R2, LEFT), 3)
    assert P.kind == TRUNCATED
    assert P.valid_through == 2
    assert [P.complex.dim(n) for n in range(0, 4)] == [2, 2, 2, 2]
    P.verify()
    assert P.syzygy(1).group().dimension == 1


def test_periodic_resolution_of_simple() -> None:
    P = projective_resolution(simple_top(R2, RIGHT), 0, detect_period=True)
    assert P.kind == PERIODIC
    assert P.period == 1
    assert P.valid_through == math.inf
    P.verify()
    assert P.complex.dim(17) == 2


def test_projective_module_resolves_itself() -> None:
    P = projective_resolution(regular(R2, LEFT), 5)
    assert P.kind == FINITE
    assert P.length == 0


def test_finite_global_dimension(corpus: Corpus) -> None:
    for ident in ("f2ut.S1", "f2ut.S2"):
        P = projective_resolution(corpus.module(ident), 5)
        assert P.kind == FINITE
        assert P.length <= 1
        P.verify()


def test_negative_length_is_rejected() -> None:
    with pytest.raises(ResolutionError):
        projective_resolution(simple_top(R2, LEFT), -1)


def test_total_acyclicity() -> None:
    assert is_totally_acyclic(periodic_x())
    assert is_F_totally_acyclic(periodic_x())
    R = regular(R2, RIGHT)
    C = ChainComplex.create(R2, RIGHT, {1: R, 0: R}, {1: X})
    verdict = is_totally_acyclic(C)
    assert not verdict
    assert verdict.degree == 0


def test_frobenius_splice() -> None:
    res = complete_projective_resolution_frobenius(simple_top(R2, RIGHT))
    assert res.g == 0
    assert res.method == "Frobenius splice"
    assert all(res.T.dim(n) == 2 for n in range(-4, 5))
    assert res.kernel.sup <= -1
    assert is_acyclic(res.T)
    data = res.to_json()
    assert data["certificates"]["totally_acyclic"] is True
    assert data["g"] == 0
    tate = res.as_tate_flat()
    tate.verify()
    assert tate.F is res.approx and tate.g == 0


def test_splice_of_repeated_simple() -> None:
    k = simple_top(R2, RIGHT)
    P = projective_resolution(direct_sum([k, k, k]), 0, detect_period=True)
    assert P.kind == PERIODIC
    assert P.period == 1
    res = complete_projective_resolution_frobenius(direct_sum([k, k, k]))
    assert res.method == "Frobenius splice"
    assert all(res.T.dim(n) == 6 for n in range(-3, 4))
    assert is_acyclic(res.T)


def test_splice_of_projective_module() -> None:
    res = complete_projective_resolution_frobenius(regular(R2, LEFT))
    assert res.method == "projective"
    assert is_acyclic(res.T)
    assert res.T.dim(0) == 2


def test_splice_needs_frobenius(corpus: Corpus) -> None:
    with pytest.raises(ResolutionError):
        complete_projective_resolution_frobenius(corpus.module("f2ut.S1"))


def test_projective_resolution_of_projective() -> None:
    res = complete_resolution_of_projective(regular(R2, RIGHT))
    assert res.g == 0
    assert res.kernel.sup <= -1
    with pytest.raises(ResolutionError):
        complete_resolution_of_projective(simple_top(R2, RIGHT))


def test_agreement_degree_is_enforced() -> None:
    res = complete_projective_resolution_frobenius(simple_top(R2, RIGHT), validate=False)
    with pytest.raises(ResolutionError, match="isomorphism"):
        replace(res, g=-1).validate()
    with pytest.raises(ResolutionError):
        pad_split_surjective(res, -1)


def test_shifted_resolution() -> None:
    res = complete_projective_resolution_frobenius(simple_top(R2, RIGHT))
    moved = shift_resolution(res, 2)
    assert moved.g == 2
    moved.validate()


def test_acyclic_complex(corpus: Corpus) -> None:
    res = complete_resolution_of_acyclic(corpus.complex("intro"))
    assert res.method == "acyclic"
    assert res.T.dim(0) == 0
    with pytest.raises(ResolutionError):
        complete_resolution_of_acyclic(corpus.complex("tb01"))


def test_cyclic_group_fixture() -> None:
    fixture = fixture_cyclic(2)
    res = fixture.resolution
    assert res.g == 0
    assert res.T.dim(-3) == 2
    assert fixture.coefficient.side == LEFT
    assert res.to_json()["certificates"]["totally_acyclic"] is True
    with_z2 = fixture_cyclic(3, coefficients=2)
    assert with_z2.coefficient.relations.ncols == 1
    with pytest.raises(ResolutionError):
        fixture_cyclic(1)


def test_finite_projective_dimension(corpus: Corpus) -> None:
    (M,) = [corpus.module(i) for i in ("f2ut.S1", "f2ut.S2") if not is_projective(corpus.module(i))]
    res = complete_resolution_of_finite(M)
    assert res.g == 1
    assert is_acyclic(res.T)
    assert res.kernel.sup <= 0


def test_cosyzygy_of_totally_acyclic_complex() -> None:
    res = complete_resolution_of_cokernel(periodic_x(), 2)
    assert res.subject.module(0).group().dimension == 1
    assert res.g == 0


def test_proper_resolutions(corpus: Corpus) -> None:
    k = simple_top(R2, LEFT)
    G = proper_gorenstein_resolution(k)
    assert G.method == "module itself"
    assert G.complex.hi == 0
    H = proper_gorenstein_resolution(corpus.module("f2ut.S1"))
    assert H.method == "projective resolution"


def test_frobenius_resolver_rejects_torsion() -> None:
    A = cyclic_group_algebra(Domain.integer(), 2)
    with pytest.raises(ResolutionError):
        frobenius_resolver(trivial_module(A, RIGHT, 2))
    assert frobenius_resolver(trivial_module(A, RIGHT)).dimension == 0


def test_assembled_approximation(corpus: Corpus) -> None:
    M = corpus.complex("tb04")
    approx = assemble_complex_resolution(M)
    assert approx.G.inf == M.inf
    assert approx.G.sup <= approx.bound
    assert is_acyclic(approx.kernel)
    assert approx.dimensions == {0: 0, 1: 0}


def test_assembled_approximation_over_triangular_algebra(corpus: Corpus) -> None:
    approx = assemble_complex_resolution(corpus.complex("tb08"))
    approx.verify()
    assert all(is_projective(approx.G.module(n)) for n in range(approx.G.lo, approx.G.hi + 1))


def test_zero_complex_assembles_to_zero() -> None:
    zero = ChainComplex.zero(R2, RIGHT)
    approx = assemble_complex_resolution(zero)
    assert approx.G.dim(0) == 0
    assert approx.bound == -math.inf


def test_tau_components_are_identities() -> None:
    res = complete_projective_resolution_frobenius(simple_top(R2, RIGHT))
    assert res.tau.component(3) == Matrix.identity(F2, 2)
