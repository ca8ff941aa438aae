"""Input files and the builtin fixture registry.

A corpus file is UTF-8 JSON with a mandatory ``schema_version`` and lists of
rings, modules, complexes and complete resolutions; later entries refer to
earlier ones by id. Every object is verified when it is loaded.
"""
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError, validator

from gorhom.algebras import (
    LEFT,
    RIGHT,
    Algebra,
    FinModule,
    character_module,
    cyclic_group_algebra,
    direct_sum,
    free_module,
    ground,
    indecomposable_injectives,
    load_algebra,
    product_of_fields,
    regular,
    simple_top,
    trivial_module,
    truncated_polynomial,
    upper_triangular,
)
from gorhom.api import BaseModel, GorhomError, InputError, PathLike
from gorhom.complexes import (
    ZERO_TAIL,
    ChainComplex,
    ChainMap,
    ShortExactSequence,
    Tail,
    module_sequence,
)
from gorhom.functors import Argument
from gorhom.linalg import Domain, Matrix
from gorhom.resolutions import PROJECTIVE, CompleteResolution

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
BUILTIN = "builtin"

Scalar = Union[int, str]
Rows = List[List[Scalar]]


class _Entry(BaseModel):
    class Config:
        extra = "forbid"


class _Sided(_Entry):
    side: str = RIGHT

    @validator("side")
    def known_side(cls, v: str) -> str:
        if v not in (LEFT, RIGHT):
            raise ValueError(f"side must be 'left' or 'right', got {v!r}")
        return v


class TailSpec(_Entry):
    kind: str = "zero"
    period: int = 0

    def build(self) -> Tail:
        if self.kind == "zero":
            return ZERO_TAIL
        if self.kind == "periodic":
            return Tail.periodic(self.period)
        raise GorhomError(f"unknown tail kind {self.kind!r}")


class RingSpec(_Entry):
    id: str
    family: Optional[str] = None
    """``truncated_polynomial``, ``cyclic_group``, ``product_of_fields``,
    ``upper_triangular`` or ``ground``; omitted for explicit structure constants."""
    domain: str = "GF(2)"
    n: Optional[int] = None
    dim: Optional[int] = None
    constants: Optional[List[List[List[Scalar]]]] = None
    unit: Optional[List[Scalar]] = None
    frobenius_form: Optional[Rows] = None
    idempotents: Optional[Rows] = None
    labels: List[str] = []
    name: str = ""


class ModuleSpec(_Sided):
    id: str
    ring: str
    family: Optional[str] = None
    """``regular``, ``free``, ``trivial``, ``simple_top``, ``character`` or
    ``injective``; omitted for explicit action matrices."""
    rank: int = 1
    modulus: int = 0
    values: Optional[List[Scalar]] = None
    index: int = 1
    action: Optional[List[Rows]] = None
    relations: Optional[Rows] = None
    name: str = ""


class ComplexSpec(_Sided):
    id: str
    ring: str
    modules: Dict[int, str]
    differentials: Dict[int, Rows] = {}
    lower: TailSpec = TailSpec()
    upper: TailSpec = TailSpec()
    name: str = ""


class ResolutionSpec(_Entry):
    id: str
    subject: str
    T: str
    approx: str
    tau: Dict[int, Rows]
    tau_periods: Tuple[int, int] = (0, 0)
    g: int
    flavor: str = PROJECTIVE


class CorpusFile(_Entry):
    schema_version: int
    rings: List[RingSpec] = []
    modules: List[ModuleSpec] = []
    complexes: List[ComplexSpec] = []
    resolutions: List[ResolutionSpec] = []

    @validator("schema_version")
    def supported_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {v}, expected {SCHEMA_VERSION}")
        return v


@dataclass
class Corpus:
    """Named rings, modules, complexes, resolutions and short exact sequences."""

    rings: Dict[str, Algebra] = field(default_factory=dict)
    modules: Dict[str, FinModule] = field(default_factory=dict)
    complexes: Dict[str, ChainComplex] = field(default_factory=dict)
    resolutions: Dict[str, CompleteResolution] = field(default_factory=dict)
    sequences: Dict[str, ShortExactSequence] = field(default_factory=dict)
    sources: Dict[str, str] = field(default_factory=dict)

    def _claim(self, ident: str, source: str) -> None:
        if ident in self.sources:
            raise InputError(source, f"duplicate id {ident!r} (first defined in {self.sources[ident]})")
        self.sources[ident] = source

    def add_ring(self, ident: str, algebra: Algebra, source: str = BUILTIN) -> None:
        self._claim(ident, source)
        self.rings[ident] = algebra

    def add_module(self, ident: str, module: FinModule, source: str = BUILTIN) -> None:
        self._claim(ident, source)
        self.modules[ident] = module

    def add_complex(self, ident: str, complex_: ChainComplex, source: str = BUILTIN) -> None:
        self._claim(ident, source)
        self.complexes[ident] = complex_

    def add_resolution(self, ident: str, res: CompleteResolution, source: str = BUILTIN) -> None:
        self._claim(ident, source)
        self.resolutions[ident] = res

    def add_sequence(self, ident: str, ses: ShortExactSequence, source: str = BUILTIN) -> None:
        self._claim(ident, source)
        self.sequences[ident] = ses

    def _lookup(self, table: Dict[str, Any], kind: str, ident: str) -> Any:
        try:
            return table[ident]
        except KeyError:
            raise InputError(self.sources.get(ident, "<corpus>"), f"unknown {kind} id {ident!r}") from None

    def ring(self, ident: str) -> Algebra:
        return self._lookup(self.rings, "ring", ident)

    def module(self, ident: str) -> FinModule:
        return self._lookup(self.modules, "module", ident)

    def complex(self, ident: str) -> ChainComplex:
        return self._lookup(self.complexes, "complex", ident)

    def resolution(self, ident: str) -> CompleteResolution:
        return self._lookup(self.resolutions, "resolution", ident)

    def sequence(self, ident: str) -> ShortExactSequence:
        return self._lookup(self.sequences, "sequence", ident)

    def argument(self, ident: str) -> Argument:
        """A module or a complex."""
        if ident in self.modules:
            return self.modules[ident]
        if ident in self.complexes:
            return self.complexes[ident]
        raise InputError("<corpus>", f"unknown module or complex id {ident!r}")

    def summary(self) -> Dict[str, int]:
        return {
            "rings": len(self.rings),
            "modules": len(self.modules),
            "complexes": len(self.complexes),
            "resolutions": len(self.resolutions),
            "sequences": len(self.sequences),
        }

    def describe(self, ident: str) -> Dict[str, Any]:
        """JSON of an object, enough to rebuild it."""
        if ident in self.modules:
            return module_json(self.modules[ident])
        if ident in self.complexes:
            return self.complexes[ident].to_json()
        if ident in self.resolutions:
            return self.resolutions[ident].to_json()
        raise InputError("<corpus>", f"unknown id {ident!r}")


def module_json(M: FinModule) -> Dict[str, Any]:
    return {
        "algebra": M.algebra.name,
        "side": M.side,
        "dim": M.dim,
        "action": [a.to_json() for a in M.action],
        "relations": M.relations.to_json(),
        "name": M.name,
    }


# ---------------------------------------------------------------------------
# Building objects from entries


def _matrix(domain: Domain, rows: Rows, shape: Tuple[int, int]) -> Matrix:
    return Matrix.from_json(domain, rows, shape)


def build_ring(spec: RingSpec) -> Algebra:
    domain = Domain.parse(spec.domain)
    family = spec.family
    if family is None:
        return load_algebra(spec.dict(exclude={"id", "family", "n"}, exclude_none=True))
    if family == "ground":
        return ground(domain)
    if family == "upper_triangular":
        return upper_triangular(domain)
    if spec.n is None:
        raise GorhomError(f"ring family {family!r} needs n")
    if family == "truncated_polynomial":
        return truncated_polynomial(domain, spec.n)
    if family == "cyclic_group":
        return cyclic_group_algebra(domain, spec.n)
    if family == "product_of_fields":
        return product_of_fields(domain, spec.n)
    raise GorhomError(f"unknown ring family {family!r}")


def build_module(spec: ModuleSpec, algebra: Algebra) -> FinModule:
    side, dom = spec.side, algebra.domain
    family = spec.family
    if family is None:
        if not spec.action:
            raise GorhomError("a module needs a family or action matrices")
        dim = len(spec.action[0])
        action = [_matrix(dom, rows, (dim, dim)) for rows in spec.action]
        relations = None
        if spec.relations is not None:
            ncols = len(spec.relations[0]) if spec.relations else 0
            relations = _matrix(dom, spec.relations, (dim, ncols))
        return FinModule.create(algebra, side, action, relations, spec.name or spec.id)
    if family == "regular":
        M = regular(algebra, side)
    elif family == "free":
        M = free_module(algebra, side, spec.rank)
    elif family == "trivial":
        M = trivial_module(algebra, side, spec.modulus)
    elif family == "simple_top":
        M = simple_top(algebra, side)
    elif family == "character":
        if spec.values is None:
            raise GorhomError("a character module needs values")
        M = character_module(algebra, spec.values, side, spec.modulus)
    elif family == "injective":
        if side != LEFT:
            raise GorhomError("builtin injectives are left modules")
        injectives = indecomposable_injectives(algebra, LEFT)
        if not 1 <= spec.index <= len(injectives):
            raise GorhomError(f"injective index {spec.index} out of range 1..{len(injectives)}")
        M = injectives[spec.index - 1]
    else:
        raise GorhomError(f"unknown module family {family!r}")
    return replace(M, name=spec.name or M.name or spec.id)


def build_complex(spec: ComplexSpec, algebra: Algebra, modules: Dict[str, FinModule]) -> ChainComplex:
    dom = algebra.domain
    mods: Dict[int, FinModule] = {}
    for degree, ident in spec.modules.items():
        if ident not in modules:
            raise GorhomError(f"unknown module id {ident!r} in degree {degree}")
        mods[degree] = modules[ident]

    def dim(n: int) -> int:
        return mods[n].dim if n in mods else 0

    lower = spec.lower.build()
    diffs = {}
    for degree, rows in spec.differentials.items():
        below = degree - 1
        if mods and below < min(mods) and lower.is_periodic:
            below += lower.period
        diffs[degree] = _matrix(dom, rows, (dim(below), dim(degree)))
    return ChainComplex.create(
        algebra, spec.side, mods, diffs, lower, spec.upper.build(), name=spec.name or spec.id
    )


def build_resolution(spec: ResolutionSpec, corpus: Corpus) -> CompleteResolution:
    T, approx = corpus.complex(spec.T), corpus.complex(spec.approx)
    subject = corpus.argument(spec.subject)
    if isinstance(subject, FinModule):
        subject = ChainComplex.concentrated(subject, 0)
    if not spec.tau:
        raise GorhomError("tau needs at least one component")
    lo, hi = min(spec.tau), max(spec.tau)
    dom = T.domain
    comps = []
    for n in range(lo, hi + 1):
        shape = (approx.dim(n), T.dim(n))
        comps.append(_matrix(dom, spec.tau[n], shape) if n in spec.tau else Matrix.zeros(dom, *shape))
    tau = ChainMap(T, approx, lo, hi, tuple(comps), *spec.tau_periods)
    res = CompleteResolution(T, approx, tau, spec.g, subject, spec.flavor, f"supplied {spec.id}")
    return res.validate()


def load_file(path: PathLike, corpus: Corpus) -> None:
    path = Path(path)
    source = str(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(path, f"cannot read JSON: {exc}") from exc
    try:
        data = CorpusFile.parse_obj(raw)
    except ValidationError as exc:
        raise InputError(path, f"schema violation: {exc}") from exc

    def guarded(kind: str, ident: str, build: Any) -> Any:
        try:
            return build()
        except InputError as exc:
            raise InputError(path, f"{kind} {ident!r}: {exc.reason}") from exc
        except GorhomError as exc:
            raise InputError(path, f"{kind} {ident!r}: {exc}") from exc

    for r in data.rings:
        corpus.add_ring(r.id, guarded("ring", r.id, lambda: build_ring(r)), source)
    for m in data.modules:
        algebra = guarded("module", m.id, lambda: corpus.ring(m.ring))
        corpus.add_module(m.id, guarded("module", m.id, lambda: build_module(m, algebra)), source)
    for c in data.complexes:
        algebra = guarded("complex", c.id, lambda: corpus.ring(c.ring))
        corpus.add_complex(c.id, guarded("complex", c.id, lambda: build_complex(c, algebra, corpus.modules)), source)
    for s in data.resolutions:
        corpus.add_resolution(s.id, guarded("resolution", s.id, lambda: build_resolution(s, corpus)), source)
    logger.info(
        f"loaded {path.name}: {len(data.rings)} rings, {len(data.modules)} modules, "
        f"{len(data.complexes)} complexes, {len(data.resolutions)} resolutions"
    )


def load_corpus(paths: Sequence[PathLike] = (), builtin: bool = True) -> Corpus:
    """Builtin fixtures (unless disabled) followed by the given files in order."""
    corpus = builtin_corpus() if builtin else Corpus()
    for path in paths:
        load_file(path, corpus)
    return corpus


# ---------------------------------------------------------------------------
# Builtin fixtures


def _named(M: FinModule, name: str) -> FinModule:
    return replace(M, name=name)


def _both_sides(corpus: Corpus, ident: str, make: Any, name: str) -> None:
    corpus.add_module(ident, _named(make(RIGHT), name))
    corpus.add_module(f"{ident}_left", _named(make(LEFT), name))


def _nilpotent_quotient(algebra: Algebra, side: str, length: int) -> FinModule:
    """``k[x]/(x^length)`` as a module over ``k[x]/(x^n)``."""
    dom = algebra.domain
    shift_rows = [[1 if r == c + 1 else 0 for c in range(length)] for r in range(length)]
    J = Matrix.from_rows(dom, shift_rows)
    powers = [Matrix.identity(dom, length)]
    for _ in range(1, algebra.dim):
        powers.append(powers[-1] @ J)
    return FinModule.create(algebra, side, powers, name=f"k[x]/(x^{length})")


def builtin_corpus() -> Corpus:
    corpus = Corpus()
    F2, F3, ZZ = Domain.prime(2), Domain.prime(3), Domain.integer()
    rings = {
        "f2x2": truncated_polynomial(F2, 2),
        "f3x3": truncated_polynomial(F3, 3),
        "f2c2": cyclic_group_algebra(F2, 2),
        "f2xf2": product_of_fields(F2, 2),
        "f2ut": upper_triangular(F2),
        "zz": ground(ZZ),
        "zc2": cyclic_group_algebra(ZZ, 2),
        "zc3": cyclic_group_algebra(ZZ, 3),
    }
    for rid, A in rings.items():
        corpus.add_ring(rid, A)
        _both_sides(corpus, f"{rid}.R", lambda side, A=A: regular(A, side), "R")
        if A.domain.is_field:
            for i, E in enumerate(indecomposable_injectives(A, LEFT), start=1):
                corpus.add_module(f"{rid}.E{i}", E)

    for rid in ("f2x2", "f3x3"):
        A = rings[rid]
        _both_sides(corpus, f"{rid}.k", lambda side, A=A: simple_top(A, side), "k")
    A = rings["f3x3"]
    _both_sides(corpus, "f3x3.M2", lambda side: _nilpotent_quotient(A, side, 2), "k[x]/(x^2)")
    A = rings["f2c2"]
    _both_sides(corpus, "f2c2.k", lambda side: trivial_module(A, side), "k")
    for rid in ("f2xf2", "f2ut"):
        A = rings[rid]
        values = ([1, 0], [0, 1]) if rid == "f2xf2" else ([1, 0, 0], [0, 0, 1])
        for i, v in enumerate(values, start=1):
            _both_sides(corpus, f"{rid}.S{i}", lambda side, A=A, v=v: character_module(A, v, side), f"S{i}")
    for rid in ("zz", "zc2", "zc3"):
        A = rings[rid]
        _both_sides(corpus, f"{rid}.Z", lambda side, A=A: trivial_module(A, side), "Z")
        _both_sides(corpus, f"{rid}.Z2", lambda side, A=A: trivial_module(A, side, 2), "Z/2")

    _builtin_complexes(corpus)
    _builtin_sequences(corpus)
    return corpus


def _builtin_complexes(corpus: Corpus) -> None:
    def add(ident: str, rid: str, modules: Dict[int, str], diffs: Optional[Dict[int, Matrix]] = None) -> None:
        A = corpus.ring(rid)
        mods = {n: corpus.module(m) for n, m in modules.items()}
        corpus.add_complex(ident, ChainComplex.create(A, RIGHT, mods, diffs or {}, name=ident))

    F2 = Domain.prime(2)
    x2 = corpus.ring("f2x2").left_regular[1]
    x3 = corpus.ring("f3x3").left_regular[1]
    eps = Matrix.from_rows(F2, [[1, 0]])

    # M_0 = M_-1 = R with the identity between them: acyclic with projective terms
    add("intro", "f2x2", {0: "f2x2.R", -1: "f2x2.R"}, {0: Matrix.identity(F2, 2)})
    add("tb01", "f2x2", {0: "f2x2.k"})
    add("tb02", "f2x2", {2: "f2x2.k"})
    add("tb03", "f2x2", {1: "f2x2.R", 0: "f2x2.R"}, {1: x2})
    add("tb04", "f2x2", {1: "f2x2.R", 0: "f2x2.k"}, {1: eps})
    add("tb05", "f2x2", {1: "f2x2.k", 0: "f2x2.k"})
    add("tb06", "f2c2", {3: "f2c2.R", 2: "f2c2.R"}, {3: Matrix.identity(F2, 2)})
    add("tb07", "f2ut", {0: "f2ut.S1"})
    add("tb08", "f2ut", {1: "f2ut.S1", 0: "f2ut.R"})
    add("tb09", "f3x3", {0: "f3x3.R", -1: "f3x3.R"}, {0: x3})
    add("tb10", "f2xf2", {1: "f2xf2.S2", 0: "f2xf2.S1"})
    add("tb11", "f2x2", {2: "f2x2.R", 1: "f2x2.R", 0: "f2x2.R"}, {2: x2, 1: x2})


def _builtin_sequences(corpus: Corpus) -> None:
    F2 = Domain.prime(2)
    i = Matrix.from_rows(F2, [[0], [1]])
    p = Matrix.from_rows(F2, [[1, 0]])
    for suffix in ("", "_left"):
        k, R = corpus.module(f"f2x2.k{suffix}"), corpus.module(f"f2x2.R{suffix}")
        corpus.add_sequence(f"f2x2.kRk{suffix}", module_sequence(k, i, R, p, k))
    R, k = corpus.module("f2x2.R"), corpus.module("f2x2.k")
    # the split sequence 0 -> R -> R + k -> k -> 0
    inc = Matrix.identity(F2, 2).vstack(Matrix.zeros(F2, 1, 2))
    proj = Matrix.zeros(F2, 1, 2).hstack(Matrix.identity(F2, 1))
    corpus.add_sequence("f2x2.RRkk", module_sequence(R, inc, direct_sum([R, k]), proj, k))
