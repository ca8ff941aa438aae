"""Tensor products of complexes evaluated through finite degree windows.

The degree-``n`` piece of ``M (x) N`` is the sum of ``M_i (x)_R N_(n-i)``.
Only finitely many pieces contribute to a band of degrees once one factor is
bounded on the relevant side; ``plan_window`` finds those pieces and
``homology_window`` recomputes every answer on a window widened by one degree.
"""
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Sequence, Tuple

from gorhom.algebras import LEFT, RIGHT, FinModule, direct_sum, module_tensor, zero_module
from gorhom.api import ComplexError, ModuleError, WindowError
from gorhom.complexes import (
    ChainComplex,
    ChainMap,
    HomologySpace,
    ShortExactSequence,
    cokernel_module,
    homology_space,
    shift,
    truncate_hard,
)
from gorhom.linalg import HomologyGroup, Matrix

if TYPE_CHECKING:
    from gorhom.resolutions import CompleteResolution

logger = logging.getLogger(__name__)

Range = Tuple[int, int]


@dataclass(frozen=True)
class TensorWindowPlan:
    """Truncation bounds of both factors computing ``H_lo..H_hi`` exactly."""

    lo: int
    hi: int
    left_range: Range
    right_range: Range

    def pairs(self, n: int) -> List[Tuple[int, int]]:
        a, b = self.left_range
        c, e = self.right_range
        return [(i, n - i) for i in range(a, b + 1) if c <= n - i <= e]

    def widened(self) -> "TensorWindowPlan":
        a, b = self.left_range
        c, e = self.right_range
        return TensorWindowPlan(self.lo, self.hi, (a - 1, b + 1), (c - 1, e + 1))

    def merged(self, other: "TensorWindowPlan") -> "TensorWindowPlan":
        return TensorWindowPlan(
            min(self.lo, other.lo),
            max(self.hi, other.hi),
            (min(self.left_range[0], other.left_range[0]), max(self.left_range[1], other.left_range[1])),
            (min(self.right_range[0], other.right_range[0]), max(self.right_range[1], other.right_range[1])),
        )


def _finite(x: float) -> bool:
    return not math.isinf(x)


def plan_window(M: ChainComplex, N: ChainComplex, lo: int, hi: int) -> TensorWindowPlan:
    """Smallest truncations of ``M`` and ``N`` whose tensor product has the
    homology of ``M (x) N`` in degrees ``lo..hi``."""
    m_inf, m_sup = M.inf, M.sup
    n_inf, n_sup = N.inf, N.sup
    if m_inf > m_sup or n_inf > n_sup:
        return TensorWindowPlan(lo, hi, (0, -1), (0, -1))
    left_lo = max(m_inf, lo - 1 - n_sup)
    left_hi = min(m_sup, hi + 1 - n_inf)
    if not (_finite(left_lo) and _finite(left_hi)):
        raise WindowError(
            f"no finite window for {M.name or 'M'} (x) {N.name or 'N'} in degrees {lo}..{hi}"
        )
    left = (int(left_lo), int(left_hi))
    right_lo = max(n_inf, lo - 1 - left[1])
    right_hi = min(n_sup, hi + 1 - left[0])
    right = (int(right_lo), int(right_hi))
    return TensorWindowPlan(lo, hi, left, right)


@dataclass(frozen=True)
class Piece:
    left: int
    right: int
    offset: int
    size: int


@dataclass(frozen=True)
class TensorFragment:
    """``M (x) N`` on degrees ``lo-1..hi+1``; homology is exact on ``lo..hi``."""

    complex: ChainComplex
    plan: TensorWindowPlan
    pieces: Dict[int, Tuple[Piece, ...]]

    @property
    def lo(self) -> int:
        return self.plan.lo

    @property
    def hi(self) -> int:
        return self.plan.hi

    def space(self, n: int) -> HomologySpace:
        if not self.lo <= n <= self.hi:
            raise WindowError(f"degree {n} lies outside the computed window {self.lo}..{self.hi}")
        return homology_space(self.complex, n)

    def homology(self, n: int) -> HomologyGroup:
        return self.space(n).group

    def piece(self, n: int, i: int) -> Optional[Piece]:
        for p in self.pieces.get(n, ()):
            if p.left == i:
                return p
        return None


def _check_sides(M: ChainComplex, N: ChainComplex) -> None:
    if M.algebra != N.algebra:
        raise ModuleError("tensor product of complexes over different algebras")
    if M.side != RIGHT or N.side != LEFT:
        raise ModuleError("tensor product needs right modules on the left and left modules on the right")


def _build_fragment(M: ChainComplex, N: ChainComplex, plan: TensorWindowPlan) -> TensorFragment:
    dom = M.domain
    lo, hi = plan.lo - 1, plan.hi + 1
    pieces: Dict[int, Tuple[Piece, ...]] = {}
    summands: Dict[int, List[FinModule]] = {}
    for n in range(lo, hi + 1):
        found = []
        mods = []
        offset = 0
        for i, j in plan.pairs(n):
            a, b = M.module(i), N.module(j)
            if a.dim == 0 or b.dim == 0:
                continue
            t = module_tensor(a, b)
            found.append(Piece(i, j, offset, t.dim))
            mods.append(t)
            offset += t.dim
        pieces[n] = tuple(found)
        summands[n] = mods
    ground = M.algebra.ground

    def module_fn(n: int) -> FinModule:
        if not summands[n]:
            return zero_module(ground, LEFT)
        return direct_sum(summands[n])

    def size(n: int) -> int:
        return sum(p.size for p in pieces.get(n, ()))

    def diff_fn(n: int) -> Matrix:
        rows = size(n - 1) if n > lo else 0
        out = [[dom.zero] * size(n) for _ in range(rows)]
        if n == lo:
            return Matrix.zeros(dom, 0, size(n))
        below = {(p.left, p.right): p for p in pieces[n - 1]}
        for p in pieces[n]:
            i, j = p.left, p.right
            blocks = []
            q = below.get((i - 1, j))
            if q is not None:
                blocks.append((q, M.differential(i).kron(Matrix.identity(dom, N.dim(j)))))
            q = below.get((i, j - 1))
            if q is not None:
                sign = -1 if i % 2 else 1
                blocks.append((q, Matrix.identity(dom, M.dim(i)).kron(N.differential(j)).scale(sign)))
            for q, blk in blocks:
                for r in range(blk.nrows):
                    row = blk.rows[r]
                    target = out[q.offset + r]
                    for c in range(blk.ncols):
                        if row[c] != 0:
                            target[p.offset + c] = dom.reduce(target[p.offset + c] + row[c])
        return Matrix(dom, rows, size(n), tuple(tuple(r) for r in out))

    complex_ = ChainComplex.from_functions(
        ground, LEFT, lo, hi, module_fn, diff_fn,
        name=f"{M.name or 'M'} (x) {N.name or 'N'}",
    )
    return TensorFragment(complex_, plan, pieces)


def tensor_complexes(
    M: ChainComplex,
    N: ChainComplex,
    lo: int,
    hi: int,
    plan: Optional[TensorWindowPlan] = None,
) -> TensorFragment:
    """``M (x)_R N`` with exact homology in degrees ``lo..hi``; ``d d = 0`` is verified."""
    _check_sides(M, N)
    if plan is None:
        plan = plan_window(M, N, lo, hi)
    return _build_fragment(M, N, plan)


def homology_window(M: ChainComplex, N: ChainComplex, n: int) -> HomologyGroup:
    """``H_n(M (x) N)``, checked against a window widened by one degree."""
    plan = plan_window(M, N, n, n)
    group = _build_fragment(M, N, plan).homology(n)
    wide = _build_fragment(M, N, plan.widened()).homology(n)
    if group != wide:
        raise WindowError(f"window instability in degree {n}: {group} vs {wide}")
    return group


def tensor_homology(
    M: ChainComplex, N: ChainComplex, degrees: Sequence[int]
) -> Dict[int, HomologyGroup]:
    """``H_i(M (x) N)`` for several degrees from a single fragment."""
    degrees = list(degrees)
    if not degrees:
        return {}
    lo, hi = min(degrees), max(degrees)
    _check_sides(M, N)
    plan = plan_window(M, N, lo, hi)
    fragment = _build_fragment(M, N, plan)
    wide = _build_fragment(M, N, plan.widened())
    out = {}
    for n in degrees:
        g = fragment.homology(n)
        if g != wide.homology(n):
            raise WindowError(f"window instability in degree {n}")
        out[n] = g
    return out


@dataclass(frozen=True)
class TensorMap:
    source: TensorFragment
    target: TensorFragment
    map: ChainMap


def _map_fragment(source: TensorFragment, target: TensorFragment, block: Callable[[int, int], Matrix]) -> ChainMap:
    dom = source.complex.domain

    def component(n: int) -> Matrix:
        rows = target.complex.dim(n)
        cols = source.complex.dim(n)
        out = [[dom.zero] * cols for _ in range(rows)]
        for p in source.pieces.get(n, ()):
            q = target.piece(n, p.left)
            if q is None:
                continue
            blk = block(p.left, p.right)
            for r in range(blk.nrows):
                for c in range(blk.ncols):
                    if blk.rows[r][c] != 0:
                        out[q.offset + r][p.offset + c] = blk.rows[r][c]
        return Matrix(dom, rows, cols, tuple(tuple(r) for r in out))

    return ChainMap.from_function(source.complex, target.complex, component)


def tensor_map_left(f: ChainMap, N: ChainComplex, lo: int, hi: int) -> TensorMap:
    """``f (x) N: S (x) N -> T (x) N`` on a common window."""
    S, T = f.source, f.target
    _check_sides(S, N)
    plan = plan_window(S, N, lo, hi).merged(plan_window(T, N, lo, hi))
    src = _build_fragment(S, N, plan)
    tgt = _build_fragment(T, N, plan)
    dom = S.domain
    m = _map_fragment(src, tgt, lambda i, j: f.component(i).kron(Matrix.identity(dom, N.dim(j))))
    return TensorMap(src, tgt, m)


def tensor_map_right(M: ChainComplex, g: ChainMap, lo: int, hi: int) -> TensorMap:
    """``M (x) g: M (x) S -> M (x) T`` on a common window."""
    S, T = g.source, g.target
    _check_sides(M, S)
    plan = plan_window(M, S, lo, hi).merged(plan_window(M, T, lo, hi))
    src = _build_fragment(M, S, plan)
    tgt = _build_fragment(M, T, plan)
    dom = M.domain

    def block(i: int, j: int) -> Matrix:
        return Matrix.identity(dom, M.dim(i)).kron(g.component(j))

    return TensorMap(src, tgt, _map_fragment(src, tgt, block))


# ---------------------------------------------------------------------------
# Unbounded and stable homology


def unbounded_tensor_homology(res: "CompleteResolution", N: ChainComplex, i: int) -> HomologyGroup:
    """``H_(i-1)(K (x) N)`` for ``K`` the kernel of the comparison map."""
    K = res.kernel
    return homology_window(K, N, i - 1)


def stable_tensor_homology(res: "CompleteResolution", N: ChainComplex, i: int) -> HomologyGroup:
    """``H_i(T (x) N)``."""
    return homology_window(res.T, N, i)


def cosyzygy_unbounded_homology(T: ChainComplex, n: int, N: ChainComplex, i: int) -> HomologyGroup:
    """Unbounded homology of ``Co_n(T)`` against ``N`` as ``H_(i+n-1)(T_(<=n-1) (x) N)``."""
    return homology_window(truncate_hard(T, n - 1, "below"), N, i + n - 1)


@dataclass(frozen=True)
class ShiftRow:
    degree: int
    direct: HomologyGroup
    shifted: HomologyGroup

    @property
    def agrees(self) -> bool:
        return self.direct == self.shifted


@dataclass(frozen=True)
class SyzygyShiftReport:
    n: int
    factor: str
    rows: Tuple[ShiftRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.agrees for r in self.rows)


def syzygy_shift_equivalence(
    T: ChainComplex,
    N: ChainComplex,
    F: ChainComplex,
    n: int,
    degrees: Sequence[int],
    factor: str = "right",
) -> SyzygyShiftReport:
    """Compare ``H_i(T (x) N)`` with ``H_(i-n)(T (x) Co_n(F))`` for a resolution
    ``F`` of ``N`` (``factor="right"``), or ``H_i(N (x) T)`` with
    ``H_(i-n)(Co_n(F) (x) T)`` for a resolution ``F`` of the left factor ``N``."""
    if n < N.sup:
        raise ComplexError(f"syzygy shift needs n >= sup of the resolved complex, got n = {n}", n)
    co = ChainComplex.concentrated(cokernel_module(F, n), 0, name=f"Co_{n}(F)")
    rows = []
    if factor == "right":
        direct = tensor_homology(T, N, degrees)
        shifted = tensor_homology(T, co, [i - n for i in degrees])
    elif factor == "left":
        direct = tensor_homology(N, T, degrees)
        shifted = tensor_homology(co, T, [i - n for i in degrees])
    else:
        raise ComplexError(f"unknown factor {factor!r}")
    for i in degrees:
        rows.append(ShiftRow(i, direct[i], shifted[i - n]))
    report = SyzygyShiftReport(n, factor, tuple(rows))
    if not report.holds:
        logger.warning(f"syzygy shift by {n} fails in degrees {[r.degree for r in rows if not r.agrees]}")
    return report


def shifted_tensor(
    M: ChainComplex, N: ChainComplex, k: int, degrees: Sequence[int]
) -> Dict[int, Tuple[HomologyGroup, HomologyGroup]]:
    """``H_i((S^k M) (x) N)`` next to ``H_(i-k)(M (x) N)``."""
    left = tensor_homology(shift(M, k), N, degrees)
    right = tensor_homology(M, N, [i - k for i in degrees])
    return {i: (left[i], right[i - k]) for i in degrees}


def tensor_sequence_right(
    M: ChainComplex, inclusion: ChainMap, projection: ChainMap, lo: int, hi: int
) -> ShortExactSequence:
    """``0 -> M (x) A -> M (x) B -> M (x) C -> 0`` on one window, for ``0 -> A -> B -> C -> 0``."""
    A, B, C = inclusion.source, inclusion.target, projection.target
    for X in (A, B, C):
        _check_sides(M, X)
    plan = plan_window(M, A, lo, hi).merged(plan_window(M, B, lo, hi)).merged(plan_window(M, C, lo, hi))
    fa, fb, fc = (_build_fragment(M, X, plan) for X in (A, B, C))
    dom = M.domain

    def block(g: ChainMap) -> Callable[[int, int], Matrix]:
        return lambda i, j: Matrix.identity(dom, M.dim(i)).kron(g.component(j))

    return ShortExactSequence(
        _map_fragment(fa, fb, block(inclusion)), _map_fragment(fb, fc, block(projection))
    )


def tensor_sequence_left(
    inclusion: ChainMap, projection: ChainMap, N: ChainComplex, lo: int, hi: int
) -> ShortExactSequence:
    """``0 -> A (x) N -> B (x) N -> C (x) N -> 0`` on one window; exact when the sequence splits degreewise."""
    A, B, C = inclusion.source, inclusion.target, projection.target
    for X in (A, B, C):
        _check_sides(X, N)
    plan = plan_window(A, N, lo, hi).merged(plan_window(B, N, lo, hi)).merged(plan_window(C, N, lo, hi))
    fa, fb, fc = (_build_fragment(X, N, plan) for X in (A, B, C))
    dom = N.domain

    def block(f: ChainMap) -> Callable[[int, int], Matrix]:
        return lambda i, j: f.component(i).kron(Matrix.identity(dom, N.dim(j)))

    return ShortExactSequence(
        _map_fragment(fa, fb, block(inclusion)), _map_fragment(fb, fc, block(projection))
    )
