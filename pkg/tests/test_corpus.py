import json
from pathlib import Path

import pytest

from gorhom.algebras import LEFT, RIGHT, is_isomorphic
from gorhom.api import InputError
from gorhom.complexes import is_acyclic
from gorhom.corpus import Corpus, builtin_corpus, load_corpus, load_file
from gorhom.functors import HomologyFunctors


def write(tmp_path: Path, data: object, name: str = "corpus.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_builtin_fixtures(corpus: Corpus) -> None:
    summary = corpus.summary()
    assert summary["rings"] == 8
    assert summary["sequences"] == 3
    assert corpus.module("f2x2.k").side == RIGHT
    assert corpus.module("f2x2.k_left").side == LEFT
    assert corpus.module("f2x2.E1").side == LEFT
    assert "zz.E1" not in corpus.modules
    assert "tb11" in corpus.complexes


def test_builtin_complexes_are_valid(corpus: Corpus) -> None:
    for complex_ in corpus.complexes.values():
        complex_.validate()
    assert is_acyclic(corpus.complex("intro"))


def test_load_valid_file(fixtures_dir: Path) -> None:
    corpus = load_corpus([fixtures_dir / "corpus_valid.json"])
    assert is_isomorphic(corpus.module("dn.k_explicit"), corpus.module("dn.k"))
    assert corpus.ring("dn.constants").is_commutative
    res = corpus.resolution("dn.res")
    assert res.method == "supplied dn.res"
    assert res.g == 0
    assert corpus.sources["dn.T"].endswith("corpus_valid.json")


def test_supplied_resolution_computes_tate_tor(fixtures_dir: Path) -> None:
    corpus = load_corpus([fixtures_dir / "corpus_valid.json"])
    functors = HomologyFunctors(supplied=corpus.resolutions.values())
    k, k_left = corpus.module("dn.k"), corpus.module("dn.k_left")
    assert functors.complete_resolution(k).method == "supplied dn.res"
    assert all(functors.tate_tor(k, k_left, i).dimension == 1 for i in range(-2, 3))


def test_bad_differential_names_the_degree(fixtures_dir: Path) -> None:
    with pytest.raises(InputError, match="degree 2") as info:
        load_corpus([fixtures_dir / "bad_differential.json"])
    assert info.value.path.name == "bad_differential.json"
    assert "dn.bad" in info.value.reason


def test_unsupported_schema_version(fixtures_dir: Path) -> None:
    with pytest.raises(InputError, match="schema"):
        load_corpus([fixtures_dir / "bad_schema.json"])


def test_duplicate_id(fixtures_dir: Path) -> None:
    with pytest.raises(InputError, match="duplicate id 'f2x2'"):
        load_corpus([fixtures_dir / "duplicate.json"])
    # without the builtin fixtures the same file loads
    corpus = load_corpus([fixtures_dir / "duplicate.json"], builtin=False)
    assert corpus.summary()["rings"] == 1


def test_unknown_fields_are_rejected(tmp_path: Path) -> None:
    ring = {"id": "q", "family": "ground", "domain": "QQ", "colour": 1}
    path = write(tmp_path, {"schema_version": 1, "rings": [ring]})
    with pytest.raises(InputError, match="schema violation"):
        load_corpus([path], builtin=False)


def test_unknown_side(tmp_path: Path) -> None:
    path = write(
        tmp_path,
        {"schema_version": 1, "modules": [{"id": "m", "ring": "f2x2", "family": "regular", "side": "up"}]},
    )
    with pytest.raises(InputError, match="side"):
        load_corpus([path])


def test_malformed_json(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text("{\"schema_version\": 1,", encoding="utf-8")
    with pytest.raises(InputError, match="cannot read JSON"):
        load_file(path, Corpus())


def test_unknown_references(tmp_path: Path) -> None:
    module = {"id": "m", "ring": "nope", "family": "regular"}
    missing_ring = write(tmp_path, {"schema_version": 1, "modules": [module]})
    with pytest.raises(InputError, match="unknown ring id 'nope'"):
        load_corpus([missing_ring], builtin=False)
    missing_module = write(
        tmp_path,
        {"schema_version": 1, "complexes": [{"id": "c", "ring": "f2x2", "modules": {"0": "nope"}}]},
        "complexes.json",
    )
    with pytest.raises(InputError, match="unknown module id"):
        load_corpus([missing_module])


def test_module_axioms_are_checked_on_load(tmp_path: Path) -> None:
    # x acting as the identity violates x x = 0
    path = write(tmp_path, {"schema_version": 1, "modules": [{"id": "m", "ring": "f2x2", "action": [[[1]], [[1]]]}]})
    with pytest.raises(InputError, match="module 'm'"):
        load_corpus([path])


def test_injectives_are_left_modules(tmp_path: Path) -> None:
    path = write(
        tmp_path,
        {"schema_version": 1, "modules": [{"id": "e", "ring": "f2x2", "family": "injective", "side": "right"}]},
    )
    with pytest.raises(InputError, match="left modules"):
        load_corpus([path])


def test_describe_and_lookup_errors() -> None:
    corpus = builtin_corpus()
    described = corpus.describe("f2x2.k")
    assert described["dim"] == 1 and described["side"] == RIGHT
    assert corpus.describe("tb03")["lower_tail"] == {"kind": "zero"}
    with pytest.raises(InputError):
        corpus.argument("missing")
    with pytest.raises(InputError):
        corpus.module("tb03")
