"""Chain complexes with a finite explicit window and optional periodic tails.

A complex stores modules and differentials ``d_n: C_n -> C_(n-1)`` for the
degrees ``lo..hi``. Below and above the window it is either zero or repeats
with a fixed period. Derived constructions (cones, sums, truncations, Hom)
extend the window by one period of every periodic tail so that their own
tails repeat again.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from gorhom.algebras import (
    LEFT,
    Algebra,
    FinModule,
    HomSpace,
    direct_sum,
    module_hom,
    other_side,
    submodule,
    zero_module,
)
from gorhom.api import ComplexError, DomainError, ModuleError
from gorhom.linalg import (
    Domain,
    HomologyGroup,
    LinearSolver,
    Matrix,
    image_basis,
    in_span,
    kernel_basis,
    presented_group,
    rank,
    same_span,
)

logger = logging.getLogger(__name__)

Bound = Union[int, float]

__all__ = [
    "AcyclicityCertificate",
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "HomologySpace",
    "KernelCokernel",
    "LongExactSequence",
    "ShortExactSequence",
    "Tail",
    "cone",
    "direct_sum_complex",
    "exact_at",
    "hom_complex",
    "homology_at",
    "homology_space",
    "induced_map",
    "is_acyclic",
    "kernel_cokernel",
    "long_exact_sequence",
    "shift",
    "truncate_hard",
    "truncate_soft",
]


@dataclass(frozen=True)
class Tail:
    kind: str = "zero"
    period: int = 0

    def __post_init__(self) -> None:
        if self.kind == "zero" and self.period != 0:
            raise ComplexError("a zero tail has no period")
        if self.kind == "periodic" and self.period < 1:
            raise ComplexError("a periodic tail needs a positive period")
        if self.kind not in ("zero", "periodic"):
            raise ComplexError(f"unknown tail kind {self.kind!r}")

    @classmethod
    def periodic(cls, period: int) -> "Tail":
        return cls("periodic", period)

    @property
    def is_periodic(self) -> bool:
        return self.kind == "periodic"

    def to_json(self) -> Dict[str, Any]:
        if self.is_periodic:
            return {"kind": "periodic", "period": self.period}
        return {"kind": "zero"}


ZERO_TAIL = Tail()


def ground_module(algebra: Algebra, dim: int, relations: Optional[Matrix] = None, name: str = "") -> FinModule:
    """A space (abelian group over ZZ) as a module over the ground algebra."""
    k = algebra.ground
    dom = algebra.domain
    if relations is None:
        relations = Matrix.zeros(dom, dim, 0)
    return FinModule(k, LEFT, dim, (Matrix.identity(dom, dim),), relations, name)


@dataclass(frozen=True)
class ChainComplex:
    algebra: Algebra
    side: str
    lo: int
    hi: int
    modules: Tuple[FinModule, ...]
    differentials: Tuple[Matrix, ...]
    lower: Tail = ZERO_TAIL
    upper: Tail = ZERO_TAIL
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        width = self.hi - self.lo + 1
        if width < 0 or len(self.modules) != width or len(self.differentials) != width:
            raise ComplexError(f"window {self.lo}..{self.hi} does not match the data")
        for tail in (self.lower, self.upper):
            if tail.is_periodic and tail.period > width:
                raise ComplexError(
                    f"window {self.lo}..{self.hi} is shorter than the tail period {tail.period}"
                )

    # construction

    @classmethod
    def from_functions(
        cls,
        algebra: Algebra,
        side: str,
        lo: int,
        hi: int,
        module_fn: Callable[[int], FinModule],
        diff_fn: Callable[[int], Matrix],
        lower: Tail = ZERO_TAIL,
        upper: Tail = ZERO_TAIL,
        name: str = "",
        validate: bool = True,
    ) -> "ChainComplex":
        modules = tuple(module_fn(n) for n in range(lo, hi + 1))
        diffs = tuple(diff_fn(n) for n in range(lo, hi + 1))
        complex_ = cls(algebra, side, lo, hi, modules, diffs, lower, upper, name)
        if validate:
            complex_.validate()
        return complex_

    @classmethod
    def create(
        cls,
        algebra: Algebra,
        side: str,
        modules: Dict[int, FinModule],
        differentials: Optional[Dict[int, Matrix]] = None,
        lower: Tail = ZERO_TAIL,
        upper: Tail = ZERO_TAIL,
        name: str = "",
    ) -> "ChainComplex":
        """Build and validate a complex from degree-indexed data.

        Missing modules inside the window are zero, missing differentials are
        zero maps.
        """
        if not modules:
            return cls.zero(algebra, side)
        differentials = differentials or {}
        lo, hi = min(modules), max(modules)
        zero = zero_module(algebra, side)
        dom = algebra.domain

        def module_at(n: int) -> FinModule:
            return modules.get(n, zero)

        def target(n: int) -> FinModule:
            if n >= lo:
                return module_at(n)
            if lower.is_periodic:
                return module_at(n + lower.period)
            return zero

        def diff_at(n: int) -> Matrix:
            if n in differentials:
                return differentials[n]
            return Matrix.zeros(dom, target(n - 1).dim, module_at(n).dim)

        for n, d in differentials.items():
            if not lo <= n <= hi:
                raise ComplexError(f"differential given outside the window in degree {n}", n)
        return cls.from_functions(algebra, side, lo, hi, module_at, diff_at, lower, upper, name)

    @classmethod
    def zero(cls, algebra: Algebra, side: str) -> "ChainComplex":
        return cls(algebra, side, 0, -1, (), (), name="0")

    @classmethod
    def concentrated(cls, module: FinModule, degree: int = 0, name: str = "") -> "ChainComplex":
        d = Matrix.zeros(module.domain, 0, module.dim)
        return cls(
            module.algebra, module.side, degree, degree, (module,), (d,),
            name=name or module.name,
        )

    # access

    @property
    def domain(self) -> Domain:
        return self.algebra.domain

    def _wrap(self, n: int) -> Optional[int]:
        if self.lo <= n <= self.hi:
            return n
        if n > self.hi and self.upper.is_periodic:
            p = self.upper.period
            return n - p * ((n - self.hi + p - 1) // p)
        if n < self.lo and self.lower.is_periodic:
            p = self.lower.period
            return n + p * ((self.lo - n + p - 1) // p)
        return None

    def module(self, n: int) -> FinModule:
        w = self._wrap(n)
        if w is None:
            return zero_module(self.algebra, self.side)
        return self.modules[w - self.lo]

    def differential(self, n: int) -> Matrix:
        w = self._wrap(n)
        if w is None:
            return Matrix.zeros(self.domain, self.module(n - 1).dim, 0)
        return self.differentials[w - self.lo]

    def dim(self, n: int) -> int:
        return self.module(n).dim

    def relations(self, n: int) -> Matrix:
        return self.module(n).relations

    @property
    def is_bounded(self) -> bool:
        return not (self.lower.is_periodic or self.upper.is_periodic)

    def periods(self) -> Tuple[int, int]:
        return (self.lower.period, self.upper.period)

    def required_probe_range(self) -> Tuple[int, int]:
        return (self.lo - self.lower.period, self.hi + self.upper.period)

    def probe_range(self) -> Tuple[int, int]:
        """Window plus one full period (and one degree) on each side."""
        lo, hi = self.required_probe_range()
        return (lo - 1, hi + 1)

    def _nonzero_degrees(self) -> List[int]:
        lo, hi = self.required_probe_range()
        return [n for n in range(lo, hi + 1) if not self.module(n).is_zero()]

    @property
    def sup(self) -> Bound:
        """Largest degree with a nonzero module (structural)."""
        nz = self._nonzero_degrees()
        if not nz:
            return -math.inf
        if self.upper.is_periodic and max(nz) > self.hi - self.upper.period:
            return math.inf
        return max(nz)

    @property
    def inf(self) -> Bound:
        nz = self._nonzero_degrees()
        if not nz:
            return math.inf
        if self.lower.is_periodic and min(nz) < self.lo + self.lower.period:
            return -math.inf
        return min(nz)

    def __str__(self) -> str:
        dims = " ".join(f"{n}:{self.dim(n)}" for n in range(self.lo, self.hi + 1))
        tails = f"lower={self.lower.kind}"
        if self.lower.is_periodic:
            tails += f"({self.lower.period})"
        tails += f" upper={self.upper.kind}"
        if self.upper.is_periodic:
            tails += f"({self.upper.period})"
        return f"{self.name or 'complex'} [{dims}] {tails}"

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.name,
            "side": self.side,
            "window": [
                {
                    "degree": n,
                    "dim": self.dim(n),
                    "relations": self.relations(n).to_json(),
                    "differential": self.differential(n).to_json(),
                }
                for n in range(self.lo, self.hi + 1)
            ],
            "lower_tail": self.lower.to_json(),
            "upper_tail": self.upper.to_json(),
        }

    # validation

    def validate(self) -> None:
        """Check shapes, linearity and ``d d = 0`` over the window plus a period each side."""
        for m in self.modules:
            if m.algebra != self.algebra or m.side != self.side:
                raise ComplexError(f"module {m} does not belong to this complex")
        if self.upper.is_periodic:
            p = self.upper.period
            if self.module(self.hi - p) != self.module(self.hi):
                raise ComplexError(
                    f"upper tail seam mismatch between degrees {self.hi - p} and {self.hi}",
                    self.hi,
                )
        lo, hi = self.probe_range()
        for n in range(lo, hi + 1):
            self._check_degree(n)

    def _check_degree(self, n: int) -> None:
        src, tgt = self.module(n), self.module(n - 1)
        d = self.differential(n)
        if d.shape != (tgt.dim, src.dim):
            raise ComplexError(
                f"differential in degree {n} has shape {d.shape}, expected {(tgt.dim, src.dim)}",
                n,
            )
        if src.dim == 0 or tgt.dim == 0:
            return
        for i, (a, b) in enumerate(zip(src.action, tgt.action)):
            if not tgt.congruent_zero(d @ a - b @ d):
                raise ComplexError(
                    f"differential in degree {n} is not linear for basis element {i + 1}", n
                )
        if not tgt.congruent_zero(d @ src.relations):
            raise ComplexError(f"differential in degree {n} does not respect relations", n)
        below = self.module(n - 2)
        if below.dim and not below.congruent_zero(self.differential(n - 1) @ d):
            raise ComplexError(f"d^2 != 0 in degree {n}", n)


def _lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass(frozen=True)
class _Span:
    lo: int
    hi: int
    lower: int
    upper: int


def _derived_window(spans: Sequence[_Span], reach: int = 1) -> Tuple[int, int, Tail, Tail]:
    """Window and tails of a degreewise construction out of the given pieces."""
    lows = [s.lower for s in spans if s.lower]
    ups = [s.upper for s in spans if s.upper]
    p_low = _lcm(lows) if lows else 0
    p_up = _lcm(ups) if ups else 0
    live = [s for s in spans if s.lo <= s.hi] or list(spans)
    lo = min(s.lo for s in live) - p_low - reach
    hi = max(s.hi for s in live) + p_up + reach
    if hi < lo:
        hi = lo
    lower = Tail.periodic(p_low) if p_low else ZERO_TAIL
    upper = Tail.periodic(p_up) if p_up else ZERO_TAIL
    return lo, hi, lower, upper


def _span(c: ChainComplex, offset: int = 0) -> _Span:
    return _Span(c.lo + offset, c.hi + offset, c.lower.period, c.upper.period)


def unroll(c: ChainComplex, lo: int, hi: int) -> ChainComplex:
    """The same complex with its explicit window enlarged to contain ``lo..hi``."""
    lo, hi = min(lo, c.lo), max(hi, c.hi)
    return ChainComplex(
        c.algebra, c.side, lo, hi,
        tuple(c.module(n) for n in range(lo, hi + 1)),
        tuple(c.differential(n) for n in range(lo, hi + 1)),
        c.lower, c.upper, c.name,
    )


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """``(S^k C)_i = C_(i-k)`` with differential ``(-1)^k d_(i-k)``."""
    sign = -1 if k % 2 else 1
    return ChainComplex(
        c.algebra,
        c.side,
        c.lo + k,
        c.hi + k,
        c.modules,
        tuple(d.scale(sign) for d in c.differentials),
        c.lower,
        c.upper,
        f"S^{k} {c.name}" if c.name and k else c.name,
    )


def opposite_complex(c: ChainComplex) -> ChainComplex:
    """The same complex with every module moved to the other side (commutative algebras)."""
    if not c.algebra.is_commutative:
        raise ModuleError("switching sides needs a commutative algebra")
    return ChainComplex(
        c.algebra, other_side(c.side), c.lo, c.hi, tuple(m.opposite() for m in c.modules),
        c.differentials, c.lower, c.upper, c.name,
    )


BELOW = "below"
ABOVE = "above"


def truncate_hard(c: ChainComplex, n: int, side: str) -> ChainComplex:
    """``C_(<=n)`` for ``side="below"``, ``C_(>=n)`` for ``side="above"``."""
    zero = zero_module(c.algebra, c.side)
    if side == BELOW:
        lo = min(c.lo, n - c.lower.period, n)
        return ChainComplex.from_functions(
            c.algebra, c.side, lo, n, c.module, c.differential,
            lower=c.lower, upper=ZERO_TAIL, name=f"{c.name}_(<={n})", validate=False,
        )
    if side == ABOVE:
        hi = max(c.hi, n + c.upper.period, n)

        def diff(m: int) -> Matrix:
            if m == n:
                return Matrix.zeros(c.domain, 0, c.dim(n))
            return c.differential(m)

        return ChainComplex.from_functions(
            c.algebra, c.side, n, hi, lambda m: c.module(m) if m >= n else zero, diff,
            lower=ZERO_TAIL, upper=c.upper, name=f"{c.name}_(>={n})", validate=False,
        )
    raise ComplexError(f"unknown truncation side {side!r}")


def cokernel_module(c: ChainComplex, n: int) -> FinModule:
    """``Co_n(C) = C_n / im d_(n+1)``, presented."""
    m = c.module(n)
    rel = m.relations.hstack(c.differential(n + 1))
    return FinModule(m.algebra, m.side, m.dim, m.action, rel, f"Co_{n}({c.name or 'C'})")


def truncate_soft(c: ChainComplex, n: int) -> ChainComplex:
    """Degrees below ``n`` unchanged, ``Co_n(C)`` in degree ``n``, zero above."""
    top = cokernel_module(c, n)
    lo = min(c.lo, n - c.lower.period, n)
    return ChainComplex.from_functions(
        c.algebra, c.side, lo, n,
        lambda m: top if m == n else c.module(m),
        c.differential,
        lower=c.lower, upper=ZERO_TAIL, name=f"Tsa_{n}({c.name or 'C'})",
    )


# ---------------------------------------------------------------------------
# Chain maps


@dataclass(frozen=True)
class ChainMap:
    """Degreewise matrices ``f_n: S_n -> T_n`` for ``lo..hi``; repeats with the
    given periods outside the window, zero where a period is 0."""

    source: ChainComplex
    target: ChainComplex
    lo: int
    hi: int
    components: Tuple[Matrix, ...]
    lower_period: int = 0
    upper_period: int = 0

    def __post_init__(self) -> None:
        if len(self.components) != max(self.hi - self.lo + 1, 0):
            raise ComplexError(f"map window {self.lo}..{self.hi} does not match the data")

    @classmethod
    def from_function(
        cls,
        source: ChainComplex,
        target: ChainComplex,
        fn: Callable[[int], Matrix],
        lo: Optional[int] = None,
        hi: Optional[int] = None,
        validate: bool = True,
    ) -> "ChainMap":
        """Components on the joint window of both complexes, periodic where both are."""
        s_lo, s_hi, lower, upper = _derived_window([_span(source), _span(target)], reach=0)
        lo = s_lo if lo is None else lo
        hi = s_hi if hi is None else hi
        f = cls(
            source, target, lo, hi, tuple(fn(n) for n in range(lo, hi + 1)),
            lower.period, upper.period,
        )
        if validate:
            f.validate()
        return f

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(
            c, c, c.lo, c.hi,
            tuple(Matrix.identity(c.domain, c.dim(n)) for n in range(c.lo, c.hi + 1)),
            c.lower.period, c.upper.period,
        )

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, 0, -1, ())

    def component(self, n: int) -> Matrix:
        w: Optional[int] = None
        if self.lo <= n <= self.hi:
            w = n
        elif n > self.hi and self.upper_period:
            p = self.upper_period
            w = n - p * ((n - self.hi + p - 1) // p)
        elif n < self.lo and self.lower_period:
            p = self.lower_period
            w = n + p * ((self.lo - n + p - 1) // p)
        if w is None:
            return Matrix.zeros(self.source.domain, self.target.dim(n), self.source.dim(n))
        return self.components[w - self.lo]

    def _span(self) -> _Span:
        return _Span(self.lo, self.hi, self.lower_period, self.upper_period)

    def check_range(self) -> Tuple[int, int]:
        lo, hi, lower, upper = _derived_window(
            [_span(self.source), _span(self.target), self._span()], reach=1
        )
        return lo, hi

    def validate(self) -> None:
        if self.source.algebra != self.target.algebra or self.source.side != self.target.side:
            raise ComplexError("chain map between complexes over different rings")
        lo, hi = self.check_range()
        for n in range(lo, hi + 1):
            s, t = self.source.module(n), self.target.module(n)
            f = self.component(n)
            if f.shape != (t.dim, s.dim):
                raise ComplexError(
                    f"map component in degree {n} has shape {f.shape}, expected {(t.dim, s.dim)}",
                    n,
                )
            if not t.dim:
                continue
            for i, (a, b) in enumerate(zip(s.action, t.action)):
                if not t.congruent_zero(f @ a - b @ f):
                    raise ComplexError(
                        f"map component in degree {n} is not linear for basis element {i + 1}", n
                    )
            if not t.congruent_zero(f @ s.relations):
                raise ComplexError(f"map component in degree {n} does not respect relations", n)
            below = self.target.module(n - 1)
            lhs = self.target.differential(n) @ f
            rhs = self.component(n - 1) @ self.source.differential(n)
            if below.dim and not below.congruent_zero(lhs - rhs):
                raise ComplexError(f"map does not commute with differentials in degree {n}", n)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        return ChainMap.from_function(
            other.source, self.target, lambda n: self.component(n) @ other.component(n)
        )


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(
        shift(f.source, k), shift(f.target, k), f.lo + k, f.hi + k, f.components,
        f.lower_period, f.upper_period,
    )


def cone(f: ChainMap, name: str = "") -> ChainComplex:
    """``Cone(f)_n = S_(n-1) + T_n`` with differential ``[[-dS, 0], [f, dT]]``."""
    S, T = f.source, f.target
    dom = S.domain
    shifted = _Span(f.lo + 1, f.hi + 1, f.lower_period, f.upper_period)
    lo, hi, lower, upper = _derived_window([_span(S, 1), _span(T), shifted])

    def module_fn(n: int) -> FinModule:
        return direct_sum([S.module(n - 1), T.module(n)])

    def diff_fn(n: int) -> Matrix:
        dS = S.differential(n - 1)
        dT = T.differential(n)
        top = (-dS).hstack(Matrix.zeros(dom, S.dim(n - 2), T.dim(n)))
        bottom = f.component(n - 1).hstack(dT)
        return top.vstack(bottom)

    return ChainComplex.from_functions(
        S.algebra, S.side, lo, hi, module_fn, diff_fn, lower, upper,
        name=name or f"Cone({S.name or 'S'} -> {T.name or 'T'})",
    )


def direct_sum_complex(complexes: Sequence[ChainComplex], name: str = "") -> ChainComplex:
    head = complexes[0]
    lo, hi, lower, upper = _derived_window([_span(c) for c in complexes], reach=0)
    return ChainComplex.from_functions(
        head.algebra, head.side, lo, hi,
        lambda n: direct_sum([c.module(n) for c in complexes]),
        lambda n: Matrix.block_diag(head.domain, [c.differential(n) for c in complexes]),
        lower, upper, name=name or " + ".join(c.name or "C" for c in complexes),
    )


# ---------------------------------------------------------------------------
# Kernels and cokernels


def _free_module_section(f: Matrix, source: FinModule, target: FinModule) -> Optional[Matrix]:
    """A module map ``s: target -> source`` with ``f s == id`` modulo the target relations."""
    dom = source.domain
    if target.reduction.module.dim == 0:
        return Matrix.zeros(dom, source.dim, target.dim)
    try:
        H = module_hom(target, source)
    except DomainError:
        return None
    red = target.reduction
    size = red.module.dim
    if H.dim == 0:
        return None
    cols = [
        tuple(v for row in (red.projection @ f @ b @ red.section).rows for v in row)
        for b in H.basis
    ]
    system = Matrix.from_columns(dom, cols, size * size)
    ident = Matrix.identity(dom, size)
    sol = LinearSolver(system).solve(tuple(v for row in ident.rows for v in row))
    if not sol.consistent:
        return None
    return H.combine(sol.x)  # type: ignore[union-attr]


@dataclass(frozen=True)
class KernelCokernel:
    kernel: ChainComplex
    inclusion: ChainMap
    cokernel: ChainComplex
    projection: ChainMap
    sections: Optional[Dict[int, Matrix]] = field(default=None, compare=False)

    def section(self, n: int) -> Matrix:
        if self.sections is None:
            raise ComplexError("no sections were certified", n)
        lo, hi = min(self.sections), max(self.sections)
        if n in self.sections:
            return self.sections[n]
        middle = self.inclusion.target
        quotient = self.projection.source
        if n > hi and self.projection.upper_period:
            p = self.projection.upper_period
            return self.sections[n - p * ((n - hi + p - 1) // p)]
        if n < lo and self.projection.lower_period:
            p = self.projection.lower_period
            return self.sections[n + p * ((lo - n + p - 1) // p)]
        return Matrix.zeros(middle.domain, middle.dim(n), quotient.dim(n))


def kernel_cokernel(
    f: ChainMap, require_surjective: bool = False, split: bool = False
) -> KernelCokernel:
    """Degreewise kernel and cokernel of a chain map with induced differentials.

    With ``split`` a module section of every component is produced, which
    certifies degreewise split surjectivity.
    """
    S, T = f.source, f.target
    dom = S.domain
    lo, hi, lower, upper = _derived_window([_span(S), _span(T), f._span()], reach=0)
    kernel_bases: Dict[int, Matrix] = {}
    sections: Dict[int, Matrix] = {}

    for n in range(lo - 1, hi + 1):
        src = S.module(n)
        if not src.is_relation_free:
            raise ComplexError(f"kernel needs a relation-free source in degree {n}", n)
        fn = f.component(n)
        rel_t = T.relations(n)
        big = fn.hstack(rel_t)
        kb = kernel_basis(big).select_rows(range(src.dim))  # type: ignore[arg-type]
        kernel_bases[n] = image_basis(kb) if kb.ncols else kb
        if (require_surjective or split) and n >= lo:
            if not in_span(big, Matrix.identity(dom, T.dim(n))):
                raise ComplexError(f"map is not surjective in degree {n}", n)
        if split and n >= lo:
            s = _free_module_section(fn, src, T.module(n))
            if s is None:
                raise ComplexError(f"map is not split surjective in degree {n}", n)
            sections[n] = s

    def kernel_basis_at(n: int) -> Matrix:
        if n in kernel_bases:
            return kernel_bases[n]
        if n > hi and upper.is_periodic:
            p = upper.period
            return kernel_bases[n - p * ((n - hi + p - 1) // p)]
        if n < lo and lower.is_periodic:
            p = lower.period
            return kernel_bases[n + p * ((lo - n + p - 1) // p)]
        return Matrix.zeros(dom, S.dim(n), 0)

    def kernel_module(n: int) -> FinModule:
        return submodule(S.module(n), kernel_basis_at(n), name=f"K_{n}")

    def kernel_diff(n: int) -> Matrix:
        below = kernel_basis_at(n - 1)
        image = S.differential(n) @ kernel_basis_at(n)
        if below.ncols == 0:
            return Matrix.zeros(dom, 0, image.ncols)
        return LinearSolver(below).solve_matrix(image)

    kernel = ChainComplex.from_functions(
        S.algebra, S.side, lo, hi, kernel_module, kernel_diff, lower, upper,
        name=f"Ker({S.name or 'S'} -> {T.name or 'T'})",
    )
    inclusion = ChainMap(
        kernel, S, lo, hi, tuple(kernel_basis_at(n) for n in range(lo, hi + 1)),
        lower.period, upper.period,
    )

    def coker_module(n: int) -> FinModule:
        t = T.module(n)
        rel = t.relations.hstack(f.component(n))
        return FinModule(t.algebra, t.side, t.dim, t.action, rel, f"Coker_{n}")

    cokernel = ChainComplex.from_functions(
        T.algebra, T.side, lo, hi, coker_module, T.differential, lower, upper,
        name=f"Coker({S.name or 'S'} -> {T.name or 'T'})",
    )
    projection = ChainMap(
        T, cokernel, lo, hi, tuple(Matrix.identity(dom, T.dim(n)) for n in range(lo, hi + 1)),
        lower.period, upper.period,
    )
    return KernelCokernel(kernel, inclusion, cokernel, projection, sections if split else None)


# ---------------------------------------------------------------------------
# Homology


@dataclass(frozen=True)
class HomologySpace:
    """``H_n`` presented as the cycles modulo ``boundaries`` (in cycle coordinates)."""

    degree: int
    cycles: Matrix
    boundaries: Matrix
    group: HomologyGroup

    @property
    def size(self) -> int:
        return self.cycles.ncols

    def coordinates(self, vectors: Matrix) -> Matrix:
        """Cycle coordinates of the given cycles."""
        if self.size == 0:
            return Matrix.zeros(vectors.domain, 0, vectors.ncols)
        return LinearSolver(self.cycles).solve_matrix(vectors)


def homology_space(c: ChainComplex, n: int) -> HomologySpace:
    dom = c.domain
    g = c.dim(n)
    dn = c.differential(n)
    big = dn.hstack(c.relations(n - 1))
    z = kernel_basis(big).select_rows(range(g))  # type: ignore[arg-type]
    cycles = image_basis(z) if z.ncols else Matrix.zeros(dom, g, 0)
    gens = c.differential(n + 1).hstack(c.relations(n))
    if cycles.ncols == 0:
        boundaries = Matrix.zeros(dom, 0, gens.ncols)
    else:
        boundaries = LinearSolver(cycles).solve_matrix(gens)
    group = presented_group(dom, cycles.ncols, boundaries)
    logger.debug(f"H_{n}({c.name or 'C'}) = {group}")
    return HomologySpace(n, cycles, boundaries, group)


def homology_at(c: ChainComplex, n: int) -> HomologyGroup:
    return homology_space(c, n).group


def induced_map(f: ChainMap, n: int, source: Optional[HomologySpace] = None,
                target: Optional[HomologySpace] = None) -> Matrix:
    """Matrix of ``H_n(f)`` in cycle coordinates."""
    hs = source or homology_space(f.source, n)
    ht = target or homology_space(f.target, n)
    return ht.coordinates(f.component(n) @ hs.cycles)


def cokernel_group(target: HomologySpace, image: Matrix) -> HomologyGroup:
    """Cokernel of a map into ``target`` given by ``image`` in cycle coordinates."""
    return presented_group(target.cycles.domain, target.size, target.boundaries.hstack(image))


@dataclass(frozen=True)
class ExactnessVerdict:
    exact: bool
    image_rank: int
    kernel_rank: int


def exact_at(incoming: Matrix, outgoing: Matrix, rel_mid: Matrix, rel_out: Matrix) -> ExactnessVerdict:
    """Exactness of ``X -> Y -> Z`` at ``Y`` for presented ``Y`` and ``Z``.

    The image plus the relations of ``Y`` must equal the preimage of the
    relations of ``Z``: a field rank test, a lattice equality over ZZ.
    """
    dom = outgoing.domain
    y = rel_mid.nrows
    image = incoming.hstack(rel_mid)
    k = kernel_basis(outgoing.hstack(rel_out)).select_rows(range(y))  # type: ignore[arg-type]
    if k.ncols == 0:
        k = Matrix.zeros(dom, y, 0)
    exact = same_span(image, k) if image.ncols or k.ncols else True
    base = rank(rel_mid) if rel_mid.ncols else 0
    return ExactnessVerdict(
        exact,
        (rank(image) if image.ncols else 0) - base,
        (rank(k) if k.ncols else 0) - base,
    )


def _zero_matrix(domain: Domain, rows: int, cols: int) -> Matrix:
    return Matrix.zeros(domain, rows, cols)


@dataclass(frozen=True)
class ShortExactSequence:
    """``0 -> A -> B -> C -> 0`` given by two chain maps; exactness is verified degreewise."""

    inclusion: ChainMap
    projection: ChainMap

    def __post_init__(self) -> None:
        if self.inclusion.target != self.projection.source:
            raise ComplexError("maps of a short exact sequence do not compose")

    @property
    def left(self) -> ChainComplex:
        return self.inclusion.source

    @property
    def middle(self) -> ChainComplex:
        return self.inclusion.target

    @property
    def right(self) -> ChainComplex:
        return self.projection.target

    def check_range(self) -> Tuple[int, int]:
        lo, hi, _, _ = _derived_window(
            [_span(self.left), _span(self.middle), _span(self.right),
             self.inclusion._span(), self.projection._span()], reach=1,
        )
        return lo, hi

    def verify(self) -> None:
        dom = self.left.domain
        lo, hi = self.check_range()
        for n in range(lo, hi + 1):
            A, B, C = self.left.module(n), self.middle.module(n), self.right.module(n)
            i, p = self.inclusion.component(n), self.projection.component(n)
            if not exact_at(_zero_matrix(dom, A.dim, 0), i, A.relations, B.relations).exact:
                raise ComplexError(f"sequence is not injective in degree {n}", n)
            if not exact_at(i, p, B.relations, C.relations).exact:
                raise ComplexError(f"sequence is not exact in the middle in degree {n}", n)
            if not exact_at(p, _zero_matrix(dom, 0, C.dim), C.relations, _zero_matrix(dom, 0, 0)).exact:
                raise ComplexError(f"sequence is not surjective in degree {n}", n)


@dataclass(frozen=True)
class SequenceTerm:
    label: str
    degree: int
    space: HomologySpace

    @property
    def group(self) -> HomologyGroup:
        return self.space.group


@dataclass(frozen=True)
class Spot:
    index: int
    label: str
    verdict: ExactnessVerdict


@dataclass(frozen=True)
class LongExactSequence:
    """Terms from ``H_hi(A)`` down to ``H_lo(C)`` with the maps between consecutive terms."""

    terms: Tuple[SequenceTerm, ...]
    maps: Tuple[Matrix, ...]
    spots: Tuple[Spot, ...]

    @property
    def exact(self) -> bool:
        return all(s.verdict.exact for s in self.spots)

    def term(self, label: str, degree: int) -> SequenceTerm:
        for t in self.terms:
            if t.label == label and t.degree == degree:
                return t
        raise KeyError((label, degree))


def connecting_map(ses: ShortExactSequence, n: int, hc: HomologySpace, ha: HomologySpace) -> Matrix:
    """``H_n(C) -> H_(n-1)(A)``: lift a cycle through ``p``, apply ``d``, pull back through ``i``."""
    dom = ses.left.domain
    B = ses.middle
    if hc.size == 0:
        return Matrix.zeros(dom, ha.size, 0)
    p = ses.projection.component(n)
    lift = LinearSolver(p.hstack(ses.right.relations(n))).solve_matrix(hc.cycles)
    y = lift.select_rows(range(B.dim(n)))  # type: ignore[arg-type]
    dy = B.differential(n) @ y
    i = ses.inclusion.component(n - 1)
    pull = LinearSolver(i.hstack(B.relations(n - 1))).solve_matrix(dy)
    x = pull.select_rows(range(ses.left.dim(n - 1)))  # type: ignore[arg-type]
    return ha.coordinates(x)


def long_exact_sequence(ses: ShortExactSequence, lo: int, hi: int) -> LongExactSequence:
    terms: List[SequenceTerm] = []
    maps: List[Matrix] = []
    spaces: Dict[Tuple[str, int], HomologySpace] = {}

    def space(label: str, n: int) -> HomologySpace:
        key = (label, n)
        if key not in spaces:
            c = {"A": ses.left, "B": ses.middle, "C": ses.right}[label]
            spaces[key] = homology_space(c, n)
        return spaces[key]

    for n in range(hi, lo - 1, -1):
        ha, hb, hc = space("A", n), space("B", n), space("C", n)
        if terms:
            maps.append(connecting_map(ses, n + 1, terms[-1].space, ha))
        terms.append(SequenceTerm("A", n, ha))
        maps.append(induced_map(ses.inclusion, n, ha, hb))
        terms.append(SequenceTerm("B", n, hb))
        maps.append(induced_map(ses.projection, n, hb, hc))
        terms.append(SequenceTerm("C", n, hc))
    spots = []
    for k in range(1, len(terms) - 1):
        verdict = exact_at(maps[k - 1], maps[k], terms[k].space.boundaries, terms[k + 1].space.boundaries)
        spots.append(Spot(k, f"H_{terms[k].degree}({terms[k].label})", verdict))
    les = LongExactSequence(tuple(terms), tuple(maps), tuple(spots))
    if not les.exact:
        logger.warning(f"long exact sequence fails at {[s.label for s in spots if not s.verdict.exact]}")
    return les


def cone_sequence(f: ChainMap) -> ShortExactSequence:
    """``0 -> T -> Cone(f) -> S[1] -> 0``."""
    S, T = f.source, f.target
    c = cone(f)
    dom = S.domain
    S1 = shift(S, 1)

    def incl(n: int) -> Matrix:
        return Matrix.zeros(dom, S.dim(n - 1), T.dim(n)).vstack(Matrix.identity(dom, T.dim(n)))

    def proj(n: int) -> Matrix:
        return Matrix.identity(dom, S.dim(n - 1)).hstack(Matrix.zeros(dom, S.dim(n - 1), T.dim(n)))

    return ShortExactSequence(
        ChainMap.from_function(T, c, incl), ChainMap.from_function(c, S1, proj)
    )


def module_sequence(A: FinModule, i: Matrix, B: FinModule, p: Matrix, C: FinModule) -> ShortExactSequence:
    """``0 -> A --i--> B --p--> C -> 0`` as complexes concentrated in degree 0."""
    cA, cB, cC = (ChainComplex.concentrated(X, 0) for X in (A, B, C))

    def at_zero(m: Matrix, src: ChainComplex, tgt: ChainComplex) -> Callable[[int], Matrix]:
        return lambda n: m if n == 0 else Matrix.zeros(src.domain, tgt.dim(n), src.dim(n))

    ses = ShortExactSequence(
        ChainMap.from_function(cA, cB, at_zero(i, cA, cB)),
        ChainMap.from_function(cB, cC, at_zero(p, cB, cC)),
    )
    ses.verify()
    return ses


# ---------------------------------------------------------------------------
# Acyclicity


@dataclass(frozen=True)
class AcyclicityCertificate:
    acyclic: bool
    probe_range: Tuple[int, int]
    degree: Optional[int] = None
    group: Optional[HomologyGroup] = None

    def __bool__(self) -> bool:
        return self.acyclic


def is_acyclic(c: ChainComplex, probe_range: Optional[Tuple[int, int]] = None) -> AcyclicityCertificate:
    """Homology vanishes on the probe range; the tails extend the verdict to all degrees."""
    need = c.required_probe_range()
    if probe_range is None:
        probe_range = need
    elif probe_range[0] > need[0] or probe_range[1] < need[1]:
        raise ComplexError(
            f"probe range {probe_range[0]}..{probe_range[1]} does not cover {need[0]}..{need[1]}",
            need[0] if probe_range[0] > need[0] else need[1],
        )
    for n in range(probe_range[0], probe_range[1] + 1):
        h = homology_at(c, n)
        if not h.is_zero:
            return AcyclicityCertificate(False, probe_range, n, h)
    return AcyclicityCertificate(True, probe_range)


# ---------------------------------------------------------------------------
# Hom complexes


_hom = lru_cache(maxsize=4096)(module_hom)


def hom_complex(c: ChainComplex, N: FinModule, name: str = "") -> ChainComplex:
    """``Hom_R(C, N)`` over the ground domain, ``Hom(C_(-n), N)`` in degree ``n``."""
    if N.algebra != c.algebra or N.side != c.side:
        raise ModuleError("Hom complex needs a module over the same ring and side")
    k = c.algebra.ground
    lo, hi = -c.hi - c.upper.period - 1, -c.lo + c.lower.period + 1
    lower = c.upper
    upper = c.lower

    def space(n: int) -> HomSpace:
        return _hom(c.module(-n), N)

    def module_fn(n: int) -> FinModule:
        return ground_module(c.algebra, space(n).dim, name=f"Hom(C_{-n},N)")

    def diff_fn(n: int) -> Matrix:
        src, tgt = space(n), space(n - 1)
        d = c.differential(-n + 1)
        if src.dim == 0 or tgt.dim == 0:
            return Matrix.zeros(c.domain, tgt.dim, src.dim)
        cols = [tgt.coordinates(phi @ d) for phi in src.basis]
        return Matrix.from_columns(c.domain, cols, tgt.dim)

    return ChainComplex.from_functions(
        k, LEFT, lo, hi, module_fn, diff_fn, lower, upper,
        name=name or f"Hom({c.name or 'C'},{N.name or 'N'})",
    )
