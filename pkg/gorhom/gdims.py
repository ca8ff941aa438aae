"""Gorenstein flat and projective dimensions of modules and bounded complexes.

``gfd_detect`` reads the flat dimension off the largest degree in which
``Tor(M, E)`` survives for an indecomposable injective ``E``; the scan is
finite because vanishing above a certified upper bound is automatic.
"""
import logging
import math
from typing import List, Optional, Tuple, Union

from gorhom.algebras import LEFT, RIGHT, FinModule, indecomposable_injectives
from gorhom.api import BaseModel, DimensionError, ResolutionError
from gorhom.complexes import ChainComplex, ShortExactSequence, homology_at, is_acyclic
from gorhom.functors import Argument, HomologyFunctors, oriented
from gorhom.linalg import HomologyGroup
from gorhom.resolutions import CompleteResolution

logger = logging.getLogger(__name__)

GFD = "Gfd"
GPD = "Gpd"

EXACT = "exact"
UPPER_ONLY = "upper bound only"
LOWER_ONLY = "lower bound only"

Bound = Union[int, float]


class Witness(BaseModel):
    kind: str
    """``tor`` (nonvanishing Tor), ``homology``, ``resolution`` or ``acyclic``."""
    degree: Optional[int] = None
    module: str = ""
    group: str = ""


class DimensionReport(BaseModel):
    quantity: str
    value: Optional[int] = None
    minus_infinity: bool = False
    status: str = EXACT
    upper_witness: Optional[Witness] = None
    lower_witness: Optional[Witness] = None
    method: str = ""

    @property
    def numeric(self) -> Bound:
        if self.minus_infinity:
            return -math.inf
        if self.value is None:
            return math.inf
        return self.value

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT

    def describe(self) -> str:
        if self.minus_infinity:
            return f"{self.quantity} = -inf"
        if self.status == UPPER_ONLY:
            return f"{self.quantity} <= {self.value}"
        if self.status == LOWER_ONLY:
            return f"{self.quantity} >= {self.value}"
        return f"{self.quantity} = {self.value}"


def _acyclic_report(quantity: str) -> DimensionReport:
    return DimensionReport(
        quantity=quantity,
        minus_infinity=True,
        lower_witness=Witness(kind="acyclic"),
        upper_witness=Witness(kind="acyclic"),
        method="acyclic complex",
    )


def _injectives(M: ChainComplex) -> List[FinModule]:
    if not M.domain.is_field:
        raise DimensionError("injective test modules need an algebra over a field")
    return indecomposable_injectives(M.algebra, LEFT)


def _tor_with(functors: HomologyFunctors, M: ChainComplex, E: FinModule, n: int) -> HomologyGroup:
    if M.inf == M.sup == 0:
        return functors.tor(M.module(0), E, n)
    return functors.tor_by_right(M, E, n)


def tor_witness(
    functors: HomologyFunctors, M: ChainComplex, n: int, injectives: Optional[List[FinModule]] = None
) -> Optional[Witness]:
    """An indecomposable injective ``E`` with ``Tor_n(M, E) != 0``, if any."""
    for E in injectives if injectives is not None else _injectives(M):
        group = _tor_with(functors, M, E, n)
        if not group.is_zero:
            return Witness(kind="tor", degree=n, module=E.name, group=str(group))
    return None


def module_upper_bound(functors: HomologyFunctors, X: Argument) -> Optional[Tuple[int, str]]:
    """The agreement degree of a constructed complete resolution, or ``None``."""
    try:
        res = functors.complete_resolution(X)
    except ResolutionError as exc:
        logger.info(f"no complete resolution for an upper bound: {exc}")
        return None
    return res.g, res.method


def gfd_detect(
    M: Argument,
    functors: Optional[HomologyFunctors] = None,
    bound: Optional[int] = None,
    cap: int = 8,
) -> DimensionReport:
    """Gorenstein flat dimension as the top degree of a nonvanishing ``Tor_n(M, E)``.

    The scan runs to ``bound + 2`` for a certified upper ``bound`` (computed
    when not given) or to ``cap + 2`` otherwise, in which case the result is
    only a lower bound.
    """
    functors = functors or HomologyFunctors()
    Mc = oriented(M, RIGHT)
    if not Mc.is_bounded:
        raise DimensionError("dimension detection needs a bounded complex")
    if is_acyclic(Mc):
        return _acyclic_report(GFD)
    upper: Optional[Witness] = None
    if bound is None:
        try:
            report = theorem_b_bound(Mc, functors, GFD, compare=False)
            bound = report.bound
            upper = Witness(kind="resolution", degree=bound, module="componentwise bound")
        except DimensionError as exc:
            logger.info(f"no certified upper bound: {exc}")
    else:
        upper = Witness(kind="resolution", degree=bound, module="supplied bound")
    depth = (cap if bound is None else bound) + 2
    injectives = _injectives(Mc)
    found: Optional[Witness] = None
    for n in range(int(Mc.inf), depth + 1):
        w = tor_witness(functors, Mc, n, injectives)
        if w is not None:
            found = w
    if found is None:
        raise DimensionError(f"Tor(M, E) vanishes through degree {depth} for every indecomposable injective")
    value = found.degree
    assert value is not None
    if value > depth - 2:
        raise DimensionError(f"depth {depth} exhausted without stabilization (Tor_{value} != 0)")
    if bound is not None and value > bound:
        raise DimensionError(f"witness degree {value} exceeds the certified bound {bound}")
    status = EXACT if bound is not None else LOWER_ONLY
    logger.info(f"Gfd({Mc.name or 'M'}) {'=' if status == EXACT else '>='} {value}")
    return DimensionReport(
        quantity=GFD,
        value=value,
        status=status,
        upper_witness=upper,
        lower_witness=found,
        method="Tor against indecomposable injectives",
    )


def homology_sup(M: ChainComplex) -> Optional[int]:
    """Largest degree of nonzero homology, ``None`` for acyclic complexes."""
    if math.isinf(M.sup):
        return None
    for n in range(int(M.sup), int(M.inf) - 1, -1):
        if not homology_at(M, n).is_zero:
            return n
    return None


def gpd_from_resolution(
    M: Argument, res: CompleteResolution, functors: Optional[HomologyFunctors] = None
) -> DimensionReport:
    """``g`` of ``res`` bounds the Gorenstein projective dimension from above; it is
    exact when ``sup H(M)`` or a nonvanishing ``Tor_g(M, E)`` reaches it."""
    Mc = oriented(M, res.side)
    if is_acyclic(Mc):
        return _acyclic_report(GPD)
    res.agreement()
    g = res.g
    upper = Witness(kind="resolution", degree=g, module=res.method)
    lower: Optional[Witness] = None
    s = homology_sup(Mc)
    if s is not None and s >= g:
        lower = Witness(kind="homology", degree=s, group=str(homology_at(Mc, s)))
    elif Mc.domain.is_field:
        functors = functors or HomologyFunctors()
        lower = tor_witness(functors, oriented(Mc, RIGHT), g)
    if lower is None and s is not None:
        lower = Witness(kind="homology", degree=s, group=str(homology_at(Mc, s)))
    exact = lower is not None and lower.degree == g
    return DimensionReport(
        quantity=GPD,
        value=g,
        status=EXACT if exact else UPPER_ONLY,
        upper_witness=upper,
        lower_witness=lower,
        method=f"complete resolution ({res.method})",
    )


class ComponentRow(BaseModel):
    degree: int
    dimension: int
    method: str = ""


class BoundReport(BaseModel):
    flavor: str
    sup: Optional[int] = None
    table: List[ComponentRow] = []
    bound: Optional[int] = None
    """``None`` for the zero complex."""
    value: Optional[DimensionReport] = None
    strict: bool = False
    holds: bool = True

    def describe(self) -> str:
        value = self.value.describe() if self.value else "?"
        bound = "-inf" if self.bound is None else str(self.bound)
        return f"{value} against bound {bound}{' (strict)' if self.strict else ''}"


def _component_dimension(functors: HomologyFunctors, X: FinModule, flavor: str) -> Tuple[int, str]:
    if flavor == GPD:
        report = gpd_from_resolution(X, functors.complete_resolution(X), functors)
    else:
        known = module_upper_bound(functors, X)
        if known is None:
            raise DimensionError(f"no certified upper bound for {X.name or 'component'}")
        report = gfd_detect(X, functors, bound=known[0])
    if not report.is_exact or report.value is None:
        raise DimensionError(f"{flavor} of {X.name or 'component'} is unknown ({report.describe()})")
    return report.value, report.method


def theorem_b_bound(
    M: Argument, functors: Optional[HomologyFunctors] = None, flavor: str = GFD, compare: bool = True
) -> BoundReport:
    """``max_i dim M_i + sup M`` with the table of component dimensions; with
    ``compare`` the dimension of ``M`` itself is computed and checked against it."""
    functors = functors or HomologyFunctors()
    Mc = oriented(M, RIGHT)
    if not Mc.is_bounded:
        raise DimensionError("the componentwise bound needs a bounded complex")
    if Mc.inf > Mc.sup:
        report = BoundReport(flavor=flavor)
        if compare:
            report.value = _acyclic_report(flavor)
        return report
    rows = []
    for n in range(int(Mc.inf), int(Mc.sup) + 1):
        X = Mc.module(n)
        if X.is_zero():
            continue
        try:
            dim, method = _component_dimension(functors, X, flavor)
        except (ResolutionError, DimensionError) as exc:
            raise DimensionError(f"component in degree {n} has unknown {flavor}: {exc}") from exc
        rows.append(ComponentRow(degree=n, dimension=dim, method=method))
    sup = int(Mc.sup)
    bound = max(r.dimension for r in rows) + sup
    report = BoundReport(flavor=flavor, sup=sup, table=rows, bound=bound)
    if compare:
        value = dimension(Mc, functors, flavor, bound)
        report.value = value
        report.holds = value.numeric <= bound
        report.strict = value.numeric < bound
        if not report.holds:
            logger.warning(f"componentwise bound violated: {value.describe()} > {bound}")
    return report


def dimension(
    M: Argument, functors: Optional[HomologyFunctors] = None, flavor: str = GFD, bound: Optional[int] = None
) -> DimensionReport:
    """``Gfd`` by detection; ``Gpd`` from a complete resolution when one can be
    built, else by detection (the two agree for the finitely generated objects
    over the supported algebras)."""
    functors = functors or HomologyFunctors()
    Mc = oriented(M, RIGHT)
    if flavor == GFD:
        return gfd_detect(Mc, functors, bound)
    try:
        res = functors.complete_resolution(Mc)
    except ResolutionError:
        report = gfd_detect(Mc, functors, bound)
        return report.copy(update={"quantity": GPD, "method": f"{report.method}; Gpd = Gfd"})
    return gpd_from_resolution(Mc, res, functors)


class SubadditivityReport(BaseModel):
    left: DimensionReport
    middle: DimensionReport
    right: DimensionReport
    holds: bool


def check_subadditivity(ses: ShortExactSequence, functors: Optional[HomologyFunctors] = None) -> SubadditivityReport:
    """``Gfd(B) <= max(Gfd(A), Gfd(C))`` for a degreewise exact ``0 -> A -> B -> C -> 0``."""
    functors = functors or HomologyFunctors()
    ses.verify()
    a, b, c = (gfd_detect(X, functors) for X in (ses.left, ses.middle, ses.right))
    holds = b.numeric <= max(a.numeric, c.numeric)
    if not holds:
        logger.warning(f"subadditivity fails: {b.describe()} against {a.describe()}, {c.describe()}")
    return SubadditivityReport(left=a, middle=b, right=c, holds=holds)
