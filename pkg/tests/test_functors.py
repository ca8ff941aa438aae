import pytest

from gorhom.api import DegreeError, GorhomError, ModuleError, ResolutionError
from gorhom.corpus import Corpus
from gorhom.functors import (
    DEFINITIONALLY_ZERO,
    EXT,
    GF_NOTE,
    TATE,
    FunctorRequest,
    HomologyFunctors,
    oriented,
)
from gorhom.linalg import Domain, HomologyGroup
from gorhom.resolutions import fixture_cyclic

INT = Domain.integer()
Z_MOD_2 = HomologyGroup(INT, 0, (2,))


@pytest.mark.parametrize("i", range(0, 5))
def test_tor_of_simple_over_dual_numbers(corpus: Corpus, functors: HomologyFunctors, i: int) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    assert functors.tor(k, k_left, i).dimension == 1
    assert functors.tor_by_right(k, k_left, i).dimension == 1


def test_tor_of_projective(corpus: Corpus, functors: HomologyFunctors) -> None:
    R, k_left = corpus.module("f2x2.R"), corpus.module("f2x2.k_left")
    assert functors.tor(R, k_left, 0).dimension == 1
    assert all(functors.tor(R, k_left, i).is_zero for i in range(1, 4))


@pytest.mark.parametrize("i", range(0, 4))
def test_tor_against_nilpotent_quotient(corpus: Corpus, functors: HomologyFunctors, i: int) -> None:
    k, M2 = corpus.module("f3x3.k"), corpus.module("f3x3.M2_left")
    assert functors.tor(k, M2, i).dimension == 1


def test_negative_tor_of_modules(corpus: Corpus, functors: HomologyFunctors) -> None:
    with pytest.raises(DegreeError):
        functors.tor(corpus.module("f2x2.k"), corpus.module("f2x2.k_left"), -1)


def test_tor_below_the_complex_is_definitionally_zero(corpus: Corpus, functors: HomologyFunctors) -> None:
    group = functors.tor(corpus.complex("tb02"), corpus.module("f2x2.k_left"), 1)
    assert group.is_zero
    assert group.note == DEFINITIONALLY_ZERO
    assert functors.tor(corpus.complex("tb02"), corpus.module("f2x2.k_left"), 3).dimension == 1


def test_values_are_memoized(corpus: Corpus, functors: HomologyFunctors) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    assert functors.tor(k, k_left, 2) is functors.tor(k, k_left, 2)


@pytest.mark.parametrize("ring", ["f2x2", "f2c2"])
def test_tate_tor_of_simple(corpus: Corpus, functors: HomologyFunctors, ring: str) -> None:
    k, k_left = corpus.module(f"{ring}.k"), corpus.module(f"{ring}.k_left")
    for i in range(-3, 4):
        assert functors.tate_tor(k, k_left, i).dimension == 1
        assert functors.stable_tor(k, k_left, i) == functors.tate_tor(k, k_left, i)


def test_tate_tor_of_projective_vanishes(corpus: Corpus, functors: HomologyFunctors) -> None:
    R, k_left = corpus.module("f2x2.R"), corpus.module("f2x2.k_left")
    assert all(functors.tate_tor(R, k_left, i).is_zero for i in range(-2, 3))


def test_tate_tor_over_integral_group_ring(corpus: Corpus, functors: HomologyFunctors) -> None:
    Z, Z_left = corpus.module("zc2.Z"), corpus.module("zc2.Z_left")
    assert functors.tate_tor(Z, Z_left, 1) == Z_MOD_2
    assert functors.tate_tor(Z, Z_left, 2).is_zero
    assert functors.tate_tor(Z, Z_left, -1) == Z_MOD_2
    Z2 = corpus.module("zc2.Z2_left")
    assert all(functors.tate_tor(Z, Z2, i) == Z_MOD_2 for i in range(-2, 3))


def test_tate_tor_of_finite_projective_dimension(corpus: Corpus, functors: HomologyFunctors) -> None:
    for ident in ("f2ut.S1", "f2ut.S2"):
        M, N = corpus.module(ident), corpus.module(f"{ident}_left")
        assert all(functors.tate_tor(M, N, i).is_zero for i in range(-2, 3))


def test_tate_tor_of_shifted_module(corpus: Corpus, functors: HomologyFunctors) -> None:
    k_left = corpus.module("f2x2.k_left")
    res = functors.complete_resolution(corpus.complex("tb02"))
    assert res.g == 2
    assert functors.tate_tor(corpus.complex("tb02"), k_left, 5).dimension == 1


def test_unbounded_tor_over_self_injective_algebra(corpus: Corpus, functors: HomologyFunctors) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    assert functors.unbounded_tor(k, k_left, 0).dimension == 1
    assert all(functors.unbounded_tor(k, k_left, i).is_zero for i in range(1, 4))


def test_comparison_sequence_is_exact(corpus: Corpus, functors: HomologyFunctors) -> None:
    les = functors.comparison_sequence(corpus.module("f2x2.k"), corpus.module("f2x2.k_left"), -2, 2)
    assert les.exact
    assert les.term("C", 0).group.dimension == 1


def test_tor_long_exact_sequence(corpus: Corpus, functors: HomologyFunctors) -> None:
    les = functors.tor_long_exact_sequence(corpus.module("f2x2.k"), corpus.sequence("f2x2.kRk_left"), 0, 2)
    assert les.exact
    with pytest.raises(DegreeError):
        functors.tor_long_exact_sequence(corpus.module("f2x2.k"), corpus.sequence("f2x2.kRk_left"), -1, 2)


def test_relative_tor(corpus: Corpus, functors: HomologyFunctors) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    assert functors.relative_tor_gp(k, k_left, 0).dimension == 1
    assert functors.relative_tor_gp(k, k_left, 1).is_zero
    gf = functors.relative_tor_gf(k, k_left, 0)
    assert gf.note == GF_NOTE
    assert gf == functors.relative_tor_gp(k, k_left, 0)
    with pytest.raises(DegreeError):
        functors.relative_tor_gp(k, k_left, -1)


def test_ext(corpus: Corpus, functors: HomologyFunctors) -> None:
    k, R = corpus.module("f2x2.k_left"), corpus.module("f2x2.R_left")
    assert all(functors.ext(k, k, i).dimension == 1 for i in range(0, 4))
    assert functors.ext(k, R, 0).dimension == 1
    assert all(functors.ext(k, R, i).is_zero for i in range(1, 4))
    with pytest.raises(DegreeError):
        functors.ext(k, k, -1)


def test_evaluate_request(corpus: Corpus, functors: HomologyFunctors) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    values = functors.evaluate(FunctorRequest(TATE, k, k_left, (-1, 0, 1)))
    assert sorted(values) == [-1, 0, 1]
    assert all(v.dimension == 1 for v in values.values())


def test_request_validation(corpus: Corpus) -> None:
    k, k_left = corpus.module("f2x2.k"), corpus.module("f2x2.k_left")
    with pytest.raises(GorhomError):
        FunctorRequest("hom", k, k_left, (0,))
    with pytest.raises(ModuleError):
        FunctorRequest(EXT, corpus.complex("tb01"), k_left, (0,))


def test_orientation_needs_commutativity(corpus: Corpus) -> None:
    S1_left = corpus.module("f2ut.S1_left")
    with pytest.raises(ModuleError):
        oriented(S1_left, "right")
    assert oriented(corpus.module("f2x2.k_left"), "right").side == "right"


def test_complex_with_several_degrees_needs_supplied_resolution(corpus: Corpus, functors: HomologyFunctors) -> None:
    with pytest.raises(ResolutionError):
        functors.complete_resolution(corpus.complex("tb05"))


def test_supplied_resolution_is_used(corpus: Corpus) -> None:
    res = fixture_cyclic(3).resolution
    functors = HomologyFunctors(supplied=[res])
    assert functors.complete_resolution(res.subject) is res
    Z_left = corpus.module("zc3.Z_left")
    assert functors.tate_tor(res.subject, Z_left, 1) == HomologyGroup(INT, 0, (3,))
