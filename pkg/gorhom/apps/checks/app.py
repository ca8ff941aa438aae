"""Checkers that instantiate the balance, exact sequence and dimension results
on concrete objects and compare both sides degree by degree."""
import logging
import time
from dataclasses import replace
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from gorhom.algebras import (
    LEFT,
    RIGHT,
    FinModule,
    indecomposable_injectives,
    module_hom,
    module_tensor,
    ring_dual,
)
from gorhom.api import Application, DimensionError, GorhomError, ModuleError, ResolutionError
from gorhom.apps.checks import (
    BALANCE_TATE,
    BALANCE_UNBOUNDED,
    DIMENSION_BOUND,
    ERROR,
    FAILED,
    PASSED,
    RELATIVE_COMPARISON,
    STOR_SEQUENCES,
    SUBADDITIVITY,
    THEOREM_C,
    VANISHING,
    CheckInput,
    CheckReport,
    CheckSettings,
    ComparisonRow,
)
from gorhom.complexes import (
    ABOVE,
    BELOW,
    ChainMap,
    LongExactSequence,
    ShortExactSequence,
    cokernel_group,
    cokernel_module,
    long_exact_sequence,
    truncate_hard,
)
from gorhom.corpus import Corpus, load_corpus
from gorhom.functors import Argument, HomologyFunctors, module_on, oriented
from gorhom.gdims import GFD, check_subadditivity, gfd_detect, homology_sup, theorem_b_bound
from gorhom.linalg import HomologyGroup, Matrix
from gorhom.resolutions import FLAT, complete_resolution_of_cokernel
from gorhom.tensor import (
    cosyzygy_unbounded_homology,
    homology_window,
    syzygy_shift_equivalence,
    tensor_sequence_left,
    unbounded_tensor_homology,
)

logger = logging.getLogger(__name__)

Rows = List[ComparisonRow]
ProbeRange = Tuple[int, int]

DEFAULT_RANGE: ProbeRange = (-4, 6)


# ---------------------------------------------------------------------------
# Rows


def _iso(label: str, degree: Optional[int], left: HomologyGroup, right: HomologyGroup) -> ComparisonRow:
    return ComparisonRow(
        label=label,
        degree=degree,
        relation="iso",
        left=str(left),
        right=str(right),
        passed=left == right,
        witness={"left": left.to_json(), "right": right.to_json()},
    )


def _zero(label: str, degree: Optional[int], group: HomologyGroup) -> ComparisonRow:
    return ComparisonRow(
        label=label,
        degree=degree,
        relation="zero",
        left=str(group),
        right="0",
        passed=group.is_zero,
        witness={"left": group.to_json()},
    )


def _spots(les: LongExactSequence, prefix: str, labels: Optional[Sequence[str]] = None) -> Rows:
    rows = []
    for spot in les.spots:
        if labels is not None and spot.label not in labels:
            continue
        v = spot.verdict
        rows.append(
            ComparisonRow(
                label=f"{prefix} exact at {spot.label}",
                relation="exact",
                left=f"image rank {v.image_rank}",
                right=f"kernel rank {v.kernel_rank}",
                passed=v.exact,
            )
        )
    return rows


def _degrees(probe_range: ProbeRange) -> List[int]:
    lo, hi = probe_range
    return list(range(lo, hi + 1))


def _name(X: Any) -> str:
    return getattr(X, "name", "") or "?"


def _run(theorem: str, instance: str, build: Callable[[Rows], None]) -> CheckReport:
    """Collect rows from ``build``; an error keeps the rows computed so far."""
    rows: Rows = []
    start = time.perf_counter()
    error = ""
    try:
        build(rows)
        status = PASSED if all(r.passed for r in rows) else FAILED
    except GorhomError as exc:
        status = ERROR
        error = f"{type(exc).__name__}: {exc}"
        logger.warning(f"{theorem} on {instance}: {error}")
    return CheckReport(
        check_id=theorem,
        theorem=theorem,
        instance=instance,
        rows=rows,
        status=status,
        error=error,
        runtime=time.perf_counter() - start,
    )


def _map_after(les: LongExactSequence, label: str, degree: int) -> Matrix:
    for k, t in enumerate(les.terms):
        if t.label == label and t.degree == degree:
            return les.maps[k]
    raise KeyError((label, degree))


def _is_gorenstein_projective(functors: HomologyFunctors, M: FinModule) -> bool:
    try:
        return functors.complete_resolution(M).g <= 0
    except GorhomError as exc:
        logger.info(f"{_name(M)} not certified Gorenstein projective: {exc}")
        return False


# ---------------------------------------------------------------------------
# Checkers


def check_balance_tate(
    M: Argument, N: Argument, probe_range: ProbeRange = DEFAULT_RANGE, functors: Optional[HomologyFunctors] = None
) -> CheckReport:
    """Tate homology from a complete resolution of ``M`` against ``H(M (x) T_N)``
    from one of ``N``, with the syzygy shift of ``N`` as a second witness."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        resN = functors.complete_resolution(Nc)
        degrees = _degrees(probe_range)
        for i in degrees:
            rows.append(
                _iso("Tate Tor(M,N) vs H(M (x) T_N)", i, functors.tate_tor(Mc, Nc, i), homology_window(Mc, resN.T, i))
            )
        if isinstance(N, FinModule) and resN.approx.dim(0):
            TM = functors.complete_resolution(Mc).T
            shift = syzygy_shift_equivalence(TM, Nc, resN.approx, 1, degrees)
            for r in shift.rows:
                label = "H(T_M (x) N) vs H(T_M (x) Co_1(F_N)) one degree down"
                rows.append(_iso(label, r.degree, r.direct, r.shifted))

    return _run(BALANCE_TATE, f"M = {_name(M)}, N = {_name(N)}", build)


def check_balance_unbounded(
    M: Argument, N: Argument, probe_range: ProbeRange = DEFAULT_RANGE, functors: Optional[HomologyFunctors] = None
) -> CheckReport:
    """``bTor_i(M, N)`` against ``bTor_i(N, M)`` over a commutative algebra."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        Mc = oriented(M, RIGHT)
        if not Mc.algebra.is_commutative:
            raise ModuleError("swapping the arguments needs a commutative algebra")
        Nc = oriented(N, LEFT)
        Nr, Ml = oriented(Nc, RIGHT), oriented(Mc, LEFT)
        for i in _degrees(probe_range):
            rows.append(
                _iso(
                    "bTor(M,N) vs bTor(N,M)", i, functors.unbounded_tor(Mc, Nc, i), functors.unbounded_tor(Nr, Ml, i)
                )
            )

    return _run(BALANCE_UNBOUNDED, f"M = {_name(M)}, N = {_name(N)}", build)


def check_theorem_c(M: FinModule, N: Argument, functors: Optional[HomologyFunctors] = None) -> CheckReport:
    """``0 -> sTor_0 -> M (x) N -> Hom(Hom(M, R), N) -> sTor_(-1) -> 0`` for a
    Gorenstein projective module ``M``, exactness certified at every spot."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        if not isinstance(M, FinModule) or not _is_gorenstein_projective(functors, M):
            raise ResolutionError(f"{_name(M)} is not certified Gorenstein projective")
        Mr = module_on(M, RIGHT)
        Nl = module_on(N, LEFT) if isinstance(N, FinModule) else oriented(N, LEFT)
        les = functors.comparison_sequence(Mr, Nl, -1, 0)
        rows.append(_zero("bTor_1(M,N) = H_0(K (x) N)", 1, les.term("A", 0).group))
        rows.append(_zero("Tor_-1(M,N)", -1, les.term("C", -1).group))
        rows.extend(_spots(les, "four-term sequence"))
        s0, t0 = les.term("B", 0).group, les.term("C", 0).group
        b0, s1 = les.term("A", -1).group, les.term("B", -1).group
        if isinstance(N, FinModule):
            rows.append(_iso("Tor_0(M,N) vs M (x) N", 0, t0, module_tensor(Mr, Nl).group()))
            hom = module_hom(ring_dual(Mr), Nl)
            rows.append(_iso("bTor_0(M,N) vs Hom(Hom(M,R),N)", 0, b0, HomologyGroup(Mr.domain, hom.dim)))
        rows.append(_iso("sTor_0(M,N) vs Tate Tor_0", 0, s0, functors.tate_tor(Mr, Nl, 0)))
        rows.append(_iso("sTor_-1(M,N) vs Tate Tor_-1", -1, s1, functors.tate_tor(Mr, Nl, -1)))
        alternating = s0.rank - t0.rank + b0.rank - s1.rank
        rows.append(
            ComparisonRow(
                label="alternating rank sum",
                relation="=",
                left=str(alternating),
                right="0",
                passed=alternating == 0,
            )
        )

    return _run(THEOREM_C, f"M = {_name(M)}, N = {_name(N)}", build)


def check_stor_sequences(
    M: Argument,
    N: Argument,
    n: int = 0,
    probe_range: ProbeRange = DEFAULT_RANGE,
    functors: Optional[HomologyFunctors] = None,
) -> CheckReport:
    """``... -> sTor_(i+1) -> Tor_(i+1-n)(Co_n T, N) -> bTor_(i+2-n)(Co_n T, N) -> sTor_i -> ...``
    from the split sequence ``0 -> T_(<=n-1) -> T -> T_(>=n) -> 0``."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        T = functors.complete_resolution(Mc, FLAT).T
        dom = T.domain
        low, high = truncate_hard(T, n - 1, BELOW), truncate_hard(T, n, ABOVE)

        def identity_where(src: Any, tgt: Any, keep: Callable[[int], bool]) -> Callable[[int], Matrix]:
            def fn(m: int) -> Matrix:
                if keep(m):
                    return Matrix.identity(dom, src.dim(m))
                return Matrix.zeros(dom, tgt.dim(m), src.dim(m))

            return fn

        ses = ShortExactSequence(
            ChainMap.from_function(low, T, identity_where(low, T, lambda m: m <= n - 1)),
            ChainMap.from_function(T, high, identity_where(T, high, lambda m: m >= n)),
        )
        ses.verify()
        lo, hi = probe_range
        les = long_exact_sequence(tensor_sequence_left(ses.inclusion, ses.projection, Nc, lo, hi), lo, hi)
        rows.extend(_spots(les, "truncation sequence"))

        co = cokernel_module(T, n)
        resC = replace(complete_resolution_of_cokernel(T, n), flavor=FLAT)
        for i in range(lo, hi + 1):
            j = i - n
            if j >= 0:
                label = f"H(T_(>={n}) (x) N) vs Tor(Co_{n}(T),N)"
                rows.append(_iso(label, i, les.term("C", i).group, functors.tor(co, Nc, j)))
            else:
                rows.append(_zero(f"H(T_(>={n}) (x) N) below the cosyzygy", i, les.term("C", i).group))
            rows.append(
                _iso(
                    f"H(T_(<={n - 1}) (x) N) vs bTor(Co_{n}(T),N)",
                    i,
                    les.term("A", i).group,
                    unbounded_tensor_homology(resC, Nc, i - n + 1),
                )
            )
            rows.append(_iso("H(T (x) N) vs Tate Tor(M,N)", i, les.term("B", i).group, functors.tate_tor(Mc, Nc, i)))
        for i in range(1, 4):
            rows.append(_zero(f"bTor(Co_{n}(T),N) in positive degree", i, cosyzygy_unbounded_homology(T, n, Nc, i)))

    return _run(STOR_SEQUENCES, f"M = {_name(M)}, N = {_name(N)}, n = {n}", build)


def check_relative_comparison(
    M: FinModule, N: Argument, probe_range: ProbeRange = DEFAULT_RANGE, functors: Optional[HomologyFunctors] = None
) -> CheckReport:
    """``bTor_i = Tor^GP_i`` for ``i >= 2`` and ``0 -> Tor^GP_1 -> bTor_1 -> sTor_0``."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        if not isinstance(M, FinModule):
            raise ModuleError("relative Tor is defined for a module in the first argument")
        Mr, Nc = module_on(M, RIGHT), oriented(N, LEFT)
        lo, hi = probe_range
        for i in range(max(lo, 2), hi + 1):
            unbounded = functors.unbounded_tor(Mr, Nc, i)
            rows.append(_iso("bTor(M,N) vs Tor^GP(M,N)", i, unbounded, functors.relative_tor_gp(Mr, Nc, i)))
            if Mr.domain.is_field:
                rows.append(
                    _iso("bTor(M,N) vs Tor^GF(M,N)", i, unbounded, functors.relative_tor_gf(Mr, Nc, i))
                )
        les = functors.comparison_sequence(Mr, Nc, 0, 1)
        image = _map_after(les, "B", 1)
        coker = cokernel_group(les.term("C", 1).space, image)
        rows.append(_iso("coker H_1(tau (x) N) vs Tor^GP_1(M,N)", 1, coker, functors.relative_tor_gp(Mr, Nc, 1)))
        rows.extend(_spots(les, "Tor^GP_1 -> bTor_1 -> sTor_0", labels=("H_1(C)", "H_0(A)")))

    instance = f"M = {_name(M)}, N = {_name(N)}, splf R^o < inf assumed (flat modules are projective)"
    return _run(RELATIVE_COMPARISON, instance, build)


def check_vanishing_and_dim_formulas(
    M: Argument,
    tests: Sequence[Argument],
    probe_range: ProbeRange = DEFAULT_RANGE,
    functors: Optional[HomologyFunctors] = None,
    cap: int = 8,
) -> CheckReport:
    """Vanishing of ``bTor_i(M, N)`` above ``Gfd M + sup H(N)``, ``Gfd M`` as the
    top nonvanishing degree over the test modules and the injectives, and
    ``bTor_0 = Hom(Hom(M, R), N)`` for Gorenstein projective modules."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        Mc = oriented(M, RIGHT)
        report = gfd_detect(Mc, functors, cap=cap)
        if not report.is_exact:
            raise DimensionError(f"Gfd is not certified ({report.describe()})")
        lo, hi = probe_range
        for N in tests:
            Nc = oriented(N, LEFT)
            s = homology_sup(Nc)
            if report.minus_infinity or s is None:
                start = lo
            else:
                assert report.value is not None
                start = max(lo, report.value + s + 1)
            for i in range(start, hi + 1):
                rows.append(_zero(f"bTor(M,{_name(N)}) above Gfd + sup", i, functors.unbounded_tor(Mc, Nc, i)))

        modules = [module_on(N, LEFT) for N in tests if isinstance(N, FinModule)]
        if Mc.domain.is_field:
            modules.extend(E for E in indecomposable_injectives(Mc.algebra, LEFT) if E not in modules)
        top = hi if report.minus_infinity else max(hi, (report.value or 0) + 1)
        found: Optional[int] = None
        for E in modules:
            for i in range(lo, top + 1):
                if not functors.unbounded_tor(Mc, E, i).is_zero:
                    found = i if found is None else max(found, i)
        expected = "-inf" if report.minus_infinity else str(report.value)
        rows.append(
            ComparisonRow(
                label="top nonvanishing bTor degree vs Gfd",
                relation="=",
                left="-inf" if found is None else str(found),
                right=expected,
                passed=(found is None) == report.minus_infinity and (found is None or found == report.value),
            )
        )

        if isinstance(M, FinModule) and _is_gorenstein_projective(functors, M):
            Mr = module_on(M, RIGHT)
            dual = ring_dual(Mr)
            for N in tests:
                if not isinstance(N, FinModule):
                    continue
                Nl = module_on(N, LEFT)
                label = f"bTor_0(M,{_name(N)}) vs Ext^0(Hom(M,R),N)"
                rows.append(_iso(label, 0, functors.unbounded_tor(Mr, Nl, 0), functors.ext(dual, Nl, 0)))
                for i in range(1, min(hi, 3) + 1):
                    rows.append(_zero(f"bTor(M,{_name(N)}) vs Ext^-i", i, functors.unbounded_tor(Mr, Nl, i)))

    names = ", ".join(_name(N) for N in tests)
    return _run(VANISHING, f"M = {_name(M)}, N in [{names}]", build)


def check_dimension_bound(M: Argument, functors: Optional[HomologyFunctors] = None) -> CheckReport:
    """``Gfd M <= max_i Gfd M_i + sup M`` for a bounded complex."""
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        report = theorem_b_bound(M, functors, GFD, compare=True)
        for r in report.table:
            rows.append(
                ComparisonRow(
                    label="component Gfd",
                    degree=r.degree,
                    relation="=",
                    left=str(r.dimension),
                    right=r.method,
                    passed=True,
                )
            )
        value = report.value
        assert value is not None
        bound = "-inf" if report.bound is None else str(report.bound)
        rows.append(
            ComparisonRow(
                label="Gfd vs componentwise bound",
                relation="<=",
                left=value.describe(),
                right=f"{bound}{' (strict)' if report.strict else ''}",
                passed=report.holds,
                witness=value.dict(),
            )
        )
        if not value.minus_infinity:
            lower = value.lower_witness
            rows.append(
                ComparisonRow(
                    label="upper and lower witnesses agree",
                    relation="=",
                    left=value.describe(),
                    right="?" if lower is None else f"Tor_{lower.degree} against {lower.module}",
                    passed=value.is_exact and lower is not None and lower.degree == value.value,
                )
            )

    return _run(DIMENSION_BOUND, f"M = {_name(M)}", build)


def check_subadditivity_report(ses: ShortExactSequence, functors: Optional[HomologyFunctors] = None) -> CheckReport:
    functors = functors or HomologyFunctors()

    def build(rows: Rows) -> None:
        report = check_subadditivity(ses, functors)
        rows.append(
            ComparisonRow(
                label="Gfd(B) vs max(Gfd(A), Gfd(C))",
                relation="<=",
                left=report.middle.describe(),
                right=f"max({report.left.describe()}, {report.right.describe()})",
                passed=report.holds,
            )
        )

    instance = f"0 -> {_name(ses.left)} -> {_name(ses.middle)} -> {_name(ses.right)} -> 0"
    return _run(SUBADDITIVITY, instance, build)


# ---------------------------------------------------------------------------
# Application


@lru_cache(maxsize=None)
def shared_corpus(files: Tuple[str, ...]) -> Corpus:
    return load_corpus(files)


@lru_cache(maxsize=None)
def shared_functors(files: Tuple[str, ...], horizon: int, limit: int) -> HomologyFunctors:
    """One memoizing instance per process and configuration."""
    corpus = shared_corpus(files)
    return HomologyFunctors(horizon, limit, supplied=corpus.resolutions.values())


class CheckApplication(Application):
    config: CheckSettings

    def __init__(
        self, config: CheckSettings, corpus: Optional[Corpus] = None, functors: Optional[HomologyFunctors] = None
    ) -> None:
        super().__init__(config)
        files = tuple(str(p) for p in config.corpus_files)
        self.corpus = corpus or shared_corpus(files)
        self.functors = functors or shared_functors(
            files, config.periodicity_horizon, config.isomorphism_search_limit
        )

    def _single_right(self, input_data: CheckInput) -> Argument:
        if len(input_data.right) != 1:
            raise GorhomError(f"{input_data.theorem} takes exactly one second argument")
        return self.corpus.argument(input_data.right[0])

    def _module(self, ident: str) -> FinModule:
        return self.corpus.module(ident)

    def _dispatch(self, input_data: CheckInput, probe: ProbeRange) -> CheckReport:
        t, f = input_data.theorem, self.functors
        if t == SUBADDITIVITY:
            return check_subadditivity_report(self.corpus.sequence(input_data.sequence), f)
        M = self.corpus.argument(input_data.left)
        if t == BALANCE_TATE:
            return check_balance_tate(M, self._single_right(input_data), probe, f)
        if t == BALANCE_UNBOUNDED:
            return check_balance_unbounded(M, self._single_right(input_data), probe, f)
        if t == THEOREM_C:
            return check_theorem_c(self._module(input_data.left), self._single_right(input_data), f)
        if t == STOR_SEQUENCES:
            return check_stor_sequences(M, self._single_right(input_data), input_data.n, probe, f)
        if t == RELATIVE_COMPARISON:
            return check_relative_comparison(self._module(input_data.left), self._single_right(input_data), probe, f)
        if t == VANISHING:
            tests = [self.corpus.argument(i) for i in input_data.right]
            return check_vanishing_and_dim_formulas(M, tests, probe, f, self.config.gdim_depth_cap)
        return check_dimension_bound(M, f)

    def _replay(self, input_data: CheckInput) -> Dict[str, Any]:
        objects = {}
        for ident in [input_data.left, *input_data.right]:
            if not ident:
                continue
            try:
                objects[ident] = self.corpus.describe(ident)
            except GorhomError:
                objects[ident] = None
        return {"input": input_data.dict(), "objects": objects}

    def run(self, input_data: CheckInput) -> CheckReport:
        probe = input_data.probe_range or self.config.probe_range
        logger.info(f"running {input_data.check_id} ({input_data.theorem})")
        try:
            report = self._dispatch(input_data, probe)
        except GorhomError as exc:
            report = CheckReport(
                check_id=input_data.check_id,
                theorem=input_data.theorem,
                instance=input_data.left,
                status=ERROR,
                error=f"{type(exc).__name__}: {exc}",
            )
        report = report.copy(update={"check_id": input_data.check_id})
        if not report.passed:
            report.replay = self._replay(input_data)
        if self.config.save_reports:
            input_data.dump_yaml(self.workdir / "input.yaml")
            report.dump_json(self.workdir / "report.json")
        logger.info(f"{input_data.check_id}: {report.status} ({report.runtime:.2f}s)")
        return report
