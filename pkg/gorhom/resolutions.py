"""Projective resolutions, complete resolutions and Gorenstein approximations.

Complete resolutions are built by splicing over Frobenius algebras, read off
the fixtures over ``ZZ[C_n]``, or supplied by the user; in every case they are
validated before use.
"""
import itertools
import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from gorhom.algebras import (
    RIGHT,
    Algebra,
    FinModule,
    cyclic_group_algebra,
    dual,
    find_isomorphism,
    indecomposable_injectives,
    is_projective,
    other_side,
    projective_cover,
    regular,
    submodule,
    sum_action,
    trivial_module,
)
from gorhom.api import ComplexError, DomainError, ResolutionError
from gorhom.complexes import (
    ABOVE,
    BELOW,
    ZERO_TAIL,
    AcyclicityCertificate,
    ChainComplex,
    ChainMap,
    KernelCokernel,
    ShortExactSequence,
    Tail,
    cokernel_module,
    cone,
    direct_sum_complex,
    hom_complex,
    is_acyclic,
    kernel_cokernel,
    shift,
    shift_map,
    truncate_hard,
)
from gorhom.linalg import (
    Domain,
    LinearSolver,
    Matrix,
    image_basis,
    in_span,
    is_invertible,
    kernel_basis,
    same_span,
    vstack,
)
from gorhom.tensor import tensor_homology

logger = logging.getLogger(__name__)

PROJECTIVE = "projective"
FLAT = "flat"

FINITE = "finite"
PERIODIC = "periodic"
TRUNCATED = "truncated"


# ---------------------------------------------------------------------------
# Projective resolutions


@dataclass(frozen=True)
class ProjectiveResolution:
    """``F -> M`` with ``F_n`` projective for ``n >= 0``.

    ``kind`` is ``finite`` when the resolution stops, ``periodic`` when its
    upper tail repeats, and ``truncated`` when it was cut at ``length``; a
    truncated resolution computes derived functors in degrees below ``length``.
    """

    module: FinModule
    complex: ChainComplex
    augmentation: Matrix
    kind: str
    period: int = 0

    @property
    def length(self) -> int:
        return self.complex.hi

    @property
    def valid_through(self) -> Union[int, float]:
        if self.kind == TRUNCATED:
            return self.length - 1
        return math.inf

    def syzygy(self, n: int) -> FinModule:
        """``Co_n(F)``, isomorphic to the ``n``-th syzygy of the module."""
        return cokernel_module(self.complex, n)

    def verify(self) -> None:
        """Exactness of ``F -> M -> 0`` in every degree the resolution covers."""
        M, F, eps = self.module, self.complex, self.augmentation
        dom = M.domain
        if not in_span(eps.hstack(M.relations), Matrix.identity(dom, M.dim)):
            raise ResolutionError("augmentation is not surjective")
        k = kernel_basis(eps.hstack(M.relations)).select_rows(range(F.dim(0)))  # type: ignore[arg-type]
        if not same_span(k, F.differential(1)):
            raise ResolutionError("resolution is not exact at the augmentation")
        top = F.hi + self.period if self.kind == PERIODIC else F.hi
        if self.kind == TRUNCATED:
            top = F.hi - 1
        for n in range(1, top + 1):
            kn = kernel_basis(F.differential(n))
            if not same_span(kn, F.differential(n + 1)):
                raise ResolutionError(f"resolution is not exact in degree {n}")


def _as_projective(module: FinModule, name: str) -> FinModule:
    red = module.reduction.module
    return replace(red, name=name)


def projective_resolution(
    M: FinModule,
    length: int,
    detect_period: bool = False,
    horizon: int = 24,
    limit: int = 64,
) -> ProjectiveResolution:
    """Minimal-generator projective resolution of ``M``.

    Each kernel is covered by a free module on an irredundant generating set.
    A projective kernel ends the resolution. With ``detect_period`` every new
    syzygy is compared with the earlier ones and the first repetition closes
    a periodic upper tail; ``length`` is then ignored and ``horizon`` bounds
    the search.
    """
    if length < 0:
        raise ResolutionError(f"resolution length must be nonnegative, got {length}")
    algebra, side, dom = M.algebra, M.side, M.domain
    red = M.reduction

    def finish(modules: List[FinModule], diffs: List[Matrix], kind: str, upper: Tail = ZERO_TAIL) -> ChainComplex:
        return ChainComplex(
            algebra, side, 0, len(modules) - 1, tuple(modules), tuple(diffs),
            ZERO_TAIL, upper, name=f"P({M.name or 'M'})",
        )

    if red.module.dim == 0 or is_projective(M):
        P0 = _as_projective(M, "P0")
        F = finish([P0], [Matrix.zeros(dom, 0, P0.dim)], FINITE)
        return ProjectiveResolution(M, F, red.section, FINITE)

    cover = projective_cover(M)
    eps = cover.map
    modules: List[FinModule] = [cover.free]
    diffs: List[Matrix] = [Matrix.zeros(dom, 0, cover.free.dim)]
    k = kernel_basis(eps.hstack(M.relations)).select_rows(range(cover.free.dim))  # type: ignore[arg-type]
    basis = image_basis(k) if k.ncols else k
    seen: List[Tuple[int, FinModule, Matrix]] = []

    for degree in itertools.count(1):
        if basis.ncols == 0:
            logger.info(f"resolution of {M} stops at length {degree - 1}")
            return ProjectiveResolution(M, finish(modules, diffs, FINITE), eps, FINITE)
        if not detect_period and degree > length:
            return ProjectiveResolution(M, finish(modules, diffs, TRUNCATED), eps, TRUNCATED)
        if detect_period and degree > horizon:
            raise ResolutionError(f"no period found for {M} within {horizon} steps")
        omega = submodule(modules[-1], basis, name=f"Omega^{degree}")
        if detect_period:
            for t, prev, prev_cover_map in seen:
                phi = find_isomorphism(omega, prev, limit)
                if phi is None:
                    continue
                period = degree - t
                modules.append(modules[t])
                diffs.append(basis @ LinearSolver(phi).solve_matrix(prev_cover_map))
                logger.info(f"resolution of {M} is periodic with period {period} from degree {t}")
                F = finish(modules, diffs, PERIODIC, Tail.periodic(period))
                return ProjectiveResolution(M, F, eps, PERIODIC, period)
        if is_projective(omega):
            modules.append(_as_projective(omega, f"P{degree}"))
            diffs.append(basis @ omega.reduction.section)
            logger.info(f"resolution of {M} stops at length {degree}")
            return ProjectiveResolution(M, finish(modules, diffs, FINITE), eps, FINITE)
        cov = projective_cover(omega)
        d = basis @ cov.map
        seen.append((degree, omega, cov.map))
        modules.append(cov.free)
        diffs.append(d)
        basis = kernel_basis(d)
    raise AssertionError("unreachable")  # pragma: no cover


# ---------------------------------------------------------------------------
# Total acyclicity


@dataclass(frozen=True)
class TotalAcyclicity:
    totally_acyclic: bool
    method: str
    complex: AcyclicityCertificate
    tests: Tuple[Tuple[str, AcyclicityCertificate], ...] = ()

    def __bool__(self) -> bool:
        return self.totally_acyclic

    @property
    def degree(self) -> Optional[int]:
        if not self.complex:
            return self.complex.degree
        for _, cert in self.tests:
            if not cert:
                return cert.degree
        return None


def is_totally_acyclic(T: ChainComplex) -> TotalAcyclicity:
    """``T`` acyclic and ``Hom(T, R)`` acyclic."""
    cert = is_acyclic(T)
    if not cert:
        return TotalAcyclicity(False, "Hom(-,R)", cert)
    H = hom_complex(T, regular(T.algebra, T.side))
    hom_cert = is_acyclic(H)
    return TotalAcyclicity(bool(hom_cert), "Hom(-,R)", cert, (("Hom(T,R)", hom_cert),))


def is_F_totally_acyclic(T: ChainComplex) -> TotalAcyclicity:
    """``T`` acyclic and ``T (x) E`` acyclic for every indecomposable injective ``E``.

    Over ZZ the certificate falls back to total acyclicity of the finitely
    generated free complex.
    """
    cert = is_acyclic(T)
    if not cert:
        return TotalAcyclicity(False, "(x) injectives", cert)
    if not T.domain.is_field:
        total = is_totally_acyclic(T)
        return replace(total, method="Hom(-,R) over ZZ")
    lo, hi = T.probe_range()
    degrees = list(range(lo, hi + 1))
    tests = []
    for E in indecomposable_injectives(T.algebra, other_side(T.side)):
        Ec = ChainComplex.concentrated(E, 0)
        groups = tensor_homology(T, Ec, degrees) if T.side == RIGHT else tensor_homology(Ec, T, degrees)
        bad = [n for n in degrees if not groups[n].is_zero]
        if bad:
            tests.append((E.name, AcyclicityCertificate(False, (lo, hi), bad[0], groups[bad[0]])))
        else:
            tests.append((E.name, AcyclicityCertificate(True, (lo, hi))))
    return TotalAcyclicity(all(c for _, c in tests), "(x) injectives", cert, tuple(tests))


# ---------------------------------------------------------------------------
# Complete resolutions


@dataclass(frozen=True)
class TateFlatResolution:
    T: ChainComplex
    F: ChainComplex
    g: int
    iso: ChainMap

    def verify(self) -> None:
        """``T_n -> F_n`` is invertible for ``n >= g`` over the window plus a period."""
        _, hi = self.iso.check_range()
        for n in range(self.g, hi + 1):
            c = self.iso.component(n)
            if c.shape[0] != c.shape[1] or (c.shape[0] and not is_invertible(c)):
                raise ResolutionError(f"T and F do not agree in degree {n}")


@dataclass(frozen=True)
class CompleteResolution:
    """``T -> F`` with ``F`` a resolution of ``subject`` and ``tau_n`` invertible for ``n >= g``."""

    T: ChainComplex
    approx: ChainComplex
    tau: ChainMap
    g: int
    subject: ChainComplex
    flavor: str = PROJECTIVE
    method: str = "supplied"

    @property
    def algebra(self) -> Algebra:
        return self.T.algebra

    @property
    def side(self) -> str:
        return self.T.side

    @cached_property
    def kernel_data(self) -> KernelCokernel:
        try:
            return kernel_cokernel(self.tau, split=True)
        except ComplexError as exc:
            raise ResolutionError(f"no split surjectivity certificate: {exc}") from exc

    @property
    def kernel(self) -> ChainComplex:
        return self.kernel_data.kernel

    def section(self, n: int) -> Matrix:
        return self.kernel_data.section(n)

    def agreement(self) -> None:
        _, hi = self.tau.check_range()
        for n in range(self.g, hi + 1):
            c = self.tau.component(n)
            if c.shape[0] != c.shape[1] or (c.shape[0] and not is_invertible(c)):
                raise ResolutionError(f"tau is not an isomorphism in degree {n} >= g = {self.g}")

    @cached_property
    def acyclicity(self) -> TotalAcyclicity:
        if self.flavor == FLAT:
            return is_F_totally_acyclic(self.T)
        return is_totally_acyclic(self.T)

    def validate(self) -> "CompleteResolution":
        try:
            self.tau.validate()
        except ComplexError as exc:
            raise ResolutionError(f"tau is not a chain map: {exc}") from exc
        self.agreement()
        _ = self.kernel_data
        if not self.acyclicity:
            raise ResolutionError(
                f"T is not {'F-' if self.flavor == FLAT else ''}totally acyclic "
                f"(degree {self.acyclicity.degree})"
            )
        sup_k = self.kernel.sup
        if sup_k > self.g - 1:
            raise ResolutionError(f"Ker tau reaches degree {sup_k} >= g = {self.g}")
        logger.info(f"validated complete resolution of {self.subject.name or 'M'} ({self.method}, g = {self.g})")
        return self

    def as_tate_flat(self) -> TateFlatResolution:
        return TateFlatResolution(self.T, self.approx, self.g, self.tau)

    def to_json(self) -> dict:
        return {
            "subject": self.subject.name,
            "method": self.method,
            "flavor": self.flavor,
            "g": self.g,
            "T": self.T.to_json(),
            "approx": self.approx.to_json(),
            "tau": {str(n): self.tau.component(n).to_json() for n in range(self.tau.lo, self.tau.hi + 1)},
            "tau_periods": [self.tau.lower_period, self.tau.upper_period],
            "certificates": {
                "split_surjective": True,
                "totally_acyclic": bool(self.acyclicity),
                "acyclicity_method": self.acyclicity.method,
            },
        }


def _identity_or_zero(
    source: ChainComplex, target: ChainComplex, degrees: Callable[[int], bool]
) -> Callable[[int], Matrix]:
    dom = source.domain

    def fn(n: int) -> Matrix:
        if degrees(n):
            return Matrix.identity(dom, source.dim(n))
        return Matrix.zeros(dom, target.dim(n), source.dim(n))

    return fn


def complete_resolution_of_projective(P: FinModule, validate: bool = True) -> CompleteResolution:
    """``T = S^-1 Cone(id_P)``, ``g = 0``."""
    if not is_projective(P):
        raise ResolutionError(f"{P} is not projective")
    P0 = _as_projective(P, P.name or "P")
    X = ChainComplex.concentrated(P0, 0, name=P.name)
    T = shift(cone(ChainMap.identity(X)), -1)
    T = replace(T, name=f"T({P.name or 'P'})")
    tau = ChainMap.from_function(T, X, _identity_or_zero(T, X, lambda n: n == 0))
    res = CompleteResolution(T, X, tau, 0, ChainComplex.concentrated(P, 0), PROJECTIVE, "projective")
    return res.validate() if validate else res


def complete_resolution_of_acyclic(M: ChainComplex) -> CompleteResolution:
    """An acyclic complex is resolved by zero with any agreement degree."""
    cert = is_acyclic(M)
    if not cert:
        raise ResolutionError(f"{M.name or 'complex'} is not acyclic (degree {cert.degree})")
    zero = ChainComplex.zero(M.algebra, M.side)
    g = int(M.inf) if not math.isinf(M.inf) else 0
    return CompleteResolution(zero, zero, ChainMap.zero(zero, zero), g, M, PROJECTIVE, "acyclic")


def shift_resolution(res: CompleteResolution, n: int) -> CompleteResolution:
    return CompleteResolution(
        shift(res.T, n),
        shift(res.approx, n),
        shift_map(res.tau, n),
        res.g + n,
        shift(res.subject, n),
        res.flavor,
        f"{res.method}, shifted by {n}",
    )


def complete_projective_resolution_frobenius(
    M: FinModule, horizon: int = 24, limit: int = 64, validate: bool = True
) -> CompleteResolution:
    """Splice the resolution of ``M`` with the dual of the resolution of ``D(M)``.

    ``T_n = P_n`` for ``n >= 0``, ``T_(-n-1) = D(Q_n)`` and
    ``d_0 = D(eps_Q) o eps_P``.
    """
    algebra = M.algebra
    if not algebra.is_frobenius:
        raise ResolutionError(f"{algebra} is not Frobenius")
    if not M.domain.is_field:
        raise ResolutionError("the Frobenius splice needs coefficients in a field")
    if is_projective(M):
        return complete_resolution_of_projective(M, validate)
    P = projective_resolution(M, 0, detect_period=True, horizon=horizon, limit=limit)
    DM = dual(M)
    Q = projective_resolution(DM, 0, detect_period=True, horizon=horizon, limit=limit)
    if P.kind != PERIODIC or Q.kind != PERIODIC:
        raise ResolutionError(f"{M} has finite projective dimension without being projective")
    Pc, Qc = P.complex, Q.complex
    dom = M.domain
    lo, hi = -Qc.hi - 1, Pc.hi
    d0 = Q.augmentation.T @ M.reduction.projection @ P.augmentation

    def module_fn(n: int) -> FinModule:
        if n >= 0:
            return Pc.module(n)
        return replace(dual(Qc.module(-n - 1)), name=f"D(Q{-n - 1})")

    def diff_fn(n: int) -> Matrix:
        if n > 0:
            return Pc.differential(n)
        if n == 0:
            return d0
        return Qc.differential(-n).T

    T = ChainComplex.from_functions(
        algebra, M.side, lo, hi, module_fn, diff_fn,
        lower=Tail.periodic(Q.period), upper=Tail.periodic(P.period),
        name=f"T({M.name or 'M'})",
    )
    tau = ChainMap(
        T, Pc, 0, Pc.hi,
        tuple(Matrix.identity(dom, Pc.dim(n)) for n in range(0, Pc.hi + 1)),
        0, P.period,
    )
    res = CompleteResolution(T, Pc, tau, 0, ChainComplex.concentrated(M, 0), PROJECTIVE, "Frobenius splice")
    if validate:
        co = cokernel_module(T, 0)
        if find_isomorphism(co, M, limit) is None:
            raise ResolutionError(f"Co_0(T) is not isomorphic to {M}")
        res.validate()
    return res


@dataclass(frozen=True)
class CyclicFixture:
    """Complete resolution of the trivial module over ``ZZ[C_n]`` and the coefficient module."""

    resolution: CompleteResolution
    coefficient: FinModule


def fixture_cyclic(n: int, coefficients: int = 0, side: str = RIGHT, validate: bool = True) -> CyclicFixture:
    """``... -> R --(t-1)--> R --N--> R --(t-1)--> R -> ...`` over ``ZZ[C_n]``, period 2."""
    if n < 2:
        raise ResolutionError(f"cyclic fixture needs n >= 2, got {n}")
    dom = Domain.integer()
    algebra = cyclic_group_algebra(dom, n)
    R = regular(algebra, side)
    mats = algebra.regular(side)
    t_minus_1 = sum_action(mats, [-1, 1] + [0] * (n - 2), dom)
    norm = sum_action(mats, [1] * n, dom)
    T = ChainComplex(
        algebra, side, 0, 1, (R, R), (norm, t_minus_1),
        Tail.periodic(2), Tail.periodic(2), name=f"T(Z) over {algebra.name}",
    )
    F = ChainComplex(
        algebra, side, 0, 2, (R, R, R), (Matrix.zeros(dom, 0, n), t_minus_1, norm),
        ZERO_TAIL, Tail.periodic(2), name=f"P(Z) over {algebra.name}",
    )
    tau = ChainMap(T, F, 0, 1, (Matrix.identity(dom, n),) * 2, 0, 2)
    subject = ChainComplex.concentrated(trivial_module(algebra, side), 0)
    res = CompleteResolution(T, F, tau, 0, subject, PROJECTIVE, f"fixture {algebra.name}")
    if validate:
        T.validate()
        F.validate()
        res.validate()
    coefficient = trivial_module(algebra, other_side(side), coefficients)
    return CyclicFixture(res, coefficient)


def pad_split_surjective(res: CompleteResolution, g: Optional[int] = None) -> CompleteResolution:
    """Add ``S^-1 Cone(id)`` of ``F_(<=g-1)`` to ``T`` so that ``tau`` splits in every degree."""
    g = res.g if g is None else g
    if g < res.g:
        raise ResolutionError(f"cannot pad below the certified agreement degree {res.g}")
    try:
        res.agreement()
    except ResolutionError as exc:
        raise ResolutionError(f"agreement certificate missing: {exc}") from exc
    F = res.approx
    dom = F.domain
    low = truncate_hard(F, g - 1, BELOW)
    if low.inf > low.sup:
        logger.debug("padding adds nothing: approximation vanishes below g")
        return replace(res, g=g, method=f"{res.method}, padded")
    extra = shift(cone(ChainMap.identity(low)), -1)
    T = direct_sum_complex([res.T, extra], name=f"{res.T.name} + S^-1 Cone(id)")

    def component(n: int) -> Matrix:
        pi = Matrix.identity(dom, low.dim(n)).hstack(Matrix.zeros(dom, low.dim(n), low.dim(n + 1)))
        if low.dim(n) != F.dim(n):
            pi = Matrix.zeros(dom, F.dim(n), extra.dim(n))
        return res.tau.component(n).hstack(pi)

    tau = ChainMap.from_function(T, F, component)
    padded = CompleteResolution(T, F, tau, g, res.subject, res.flavor, f"{res.method}, padded")
    return padded.validate()


def complete_resolution_of_cokernel(T: ChainComplex, n: int, validate: bool = True) -> CompleteResolution:
    """``Co_n(T)`` of a totally acyclic ``T`` is resolved by ``S^-n T`` over ``S^-n T_(>=n)``, ``g = 0``."""
    Tn = replace(shift(T, -n), name=f"S^{-n} {T.name or 'T'}")
    F = shift(truncate_hard(T, n, ABOVE), -n)
    F = replace(F, name=f"P(Co_{n})")
    tau = ChainMap.from_function(Tn, F, _identity_or_zero(Tn, F, lambda m: m >= 0))
    subject = ChainComplex.concentrated(cokernel_module(T, n), 0)
    res = CompleteResolution(Tn, F, tau, 0, subject, PROJECTIVE, f"cosyzygy {n}")
    return res.validate() if validate else res


def complete_resolution_of_finite(M: FinModule, horizon: int = 24, validate: bool = True) -> CompleteResolution:
    """A module of finite projective dimension ``d >= 1``: ``T`` is the contractible
    ``P_d --id--> P_d`` in degrees ``d, d-1``, split surjectivity comes from padding."""
    P = projective_resolution(M, horizon)
    if P.kind != FINITE:
        raise ResolutionError(f"{M} has no finite projective resolution within {horizon} steps")
    F = P.complex
    d = F.hi
    if d == 0:
        return complete_resolution_of_projective(M, validate)
    Pd = F.module(d)
    dom = M.domain
    ident = Matrix.identity(dom, Pd.dim)
    T = ChainComplex(
        M.algebra, M.side, d - 1, d, (Pd, Pd), (Matrix.zeros(dom, 0, Pd.dim), ident),
        name=f"T({M.name or 'M'})",
    )

    def comp(n: int) -> Matrix:
        if n == d:
            return ident
        if n == d - 1:
            return F.differential(d)
        return Matrix.zeros(dom, F.dim(n), T.dim(n))

    tau = ChainMap.from_function(T, F, comp)
    res = CompleteResolution(T, F, tau, d, ChainComplex.concentrated(M, 0), PROJECTIVE, "finite projective dimension")
    return pad_split_surjective(res) if validate else res


@dataclass(frozen=True)
class ProperResolution:
    """``G -> M`` with Gorenstein projective terms, exact under ``Hom(Q, -)`` for Gorenstein projective ``Q``."""

    module: FinModule
    complex: ChainComplex
    augmentation: Matrix
    method: str


def proper_gorenstein_resolution(M: FinModule, horizon: int = 24) -> ProperResolution:
    """Over a Frobenius algebra every lattice is Gorenstein projective, so ``G = M``.

    Elsewhere the finite projective resolution is used; it is proper when
    Gorenstein projectives are projective, as over algebras of finite global
    dimension.
    """
    if M.algebra.is_frobenius:
        ap = frobenius_resolver(M)
        return ProperResolution(M, ap.complex, ap.map, "module itself")
    P = projective_resolution(M, horizon)
    if P.kind != FINITE:
        raise ResolutionError(f"no proper Gorenstein projective resolution of {M} within {horizon} steps")
    return ProperResolution(M, P.complex, P.augmentation, "projective resolution")


# ---------------------------------------------------------------------------
# Gorenstein approximations of bounded complexes


@dataclass(frozen=True)
class ModuleApproximation:
    """A bounded complex ``G`` with ``H(G) = X`` in degree 0, ``G_0`` Gorenstein
    projective and ``G_n`` projective for ``n > 0``."""

    complex: ChainComplex
    map: Matrix
    dimension: int


Resolver = Callable[[FinModule], ModuleApproximation]


def frobenius_resolver(X: FinModule) -> ModuleApproximation:
    """Every module over a Frobenius algebra is Gorenstein projective."""
    red = X.reduction
    if not red.module.is_relation_free:
        raise ResolutionError(f"{X} has torsion and is not Gorenstein projective")
    G = ChainComplex.concentrated(red.module, 0, name=X.name)
    return ModuleApproximation(G, red.section, 0)


def projective_resolver(horizon: int = 24) -> Resolver:
    def resolve(X: FinModule) -> ModuleApproximation:
        if is_projective(X):
            return frobenius_resolver(X)
        P = projective_resolution(X, horizon)
        if P.kind != FINITE:
            raise ResolutionError(f"{X} has no finite projective resolution within {horizon} steps")
        return ModuleApproximation(P.complex, P.augmentation, P.complex.hi)

    return resolve


def default_resolver(algebra: Algebra, horizon: int = 24) -> Resolver:
    if algebra.is_frobenius:
        return frobenius_resolver
    return projective_resolver(horizon)


class _LinearSystem:
    """Block linear system in matrix unknowns, solved over the ground domain."""

    def __init__(self, domain: Domain) -> None:
        self.domain = domain
        self.shapes: List[Tuple[int, int]] = []
        self.equations: List[Tuple[int, Dict[int, Matrix], List]] = []

    def unknown(self, nrows: int, ncols: int) -> int:
        self.shapes.append((nrows, ncols))
        return len(self.shapes) - 1

    def congruence(self, terms: Sequence[Tuple[Matrix, int, Matrix]], const: Matrix, relations: Matrix) -> None:
        """``sum A X B == const`` modulo the columns of ``relations``."""
        rows, cols = const.shape
        if rows == 0 or cols == 0:
            return
        blocks: Dict[int, Matrix] = {}
        for A, x, B in terms:
            blk = A.kron(B.T)
            blocks[x] = blocks[x] + blk if x in blocks else blk
        if relations.ncols:
            y = self.unknown(relations.ncols, cols)
            blocks[y] = relations.kron(Matrix.identity(self.domain, cols)).scale(-1)
        rhs = [v for row in const.rows for v in row]
        self.equations.append((rows * cols, blocks, rhs))

    def solve(self) -> Optional[List[Matrix]]:
        dom = self.domain
        sizes = [r * c for r, c in self.shapes]
        offsets = list(itertools.accumulate([0] + sizes))
        total = offsets[-1]
        row_blocks = []
        rhs: List = []
        for nrows, blocks, b in self.equations:
            parts = []
            for x, size in enumerate(sizes):
                parts.append(blocks.get(x, Matrix.zeros(dom, nrows, size)))
            row = Matrix.zeros(dom, nrows, 0).hstack(*parts) if parts else Matrix.zeros(dom, nrows, 0)
            row_blocks.append(row)
            rhs.extend(b)
        if not row_blocks:
            return [Matrix.zeros(dom, r, c) for r, c in self.shapes]
        A = vstack(dom, total, row_blocks)
        sol = LinearSolver(A).solve(rhs)
        if not sol.consistent:
            return None
        x = sol.x  # type: ignore[union-attr]
        out = []
        for (r, c), start in zip(self.shapes, offsets):
            vals = x[start:start + r * c]
            out.append(Matrix(dom, r, c, tuple(tuple(vals[i * c:(i + 1) * c]) for i in range(r))))
        return out


def lift_chain_map(alpha_src: ChainMap, alpha_tgt: ChainMap, f: ChainMap) -> ChainMap:
    """A chain map ``g`` with ``alpha_tgt o g == f o alpha_src``; the source of ``alpha_src`` is bounded."""
    G1, G2 = alpha_src.source, alpha_tgt.source
    if not G1.is_bounded:
        raise ResolutionError("lifting needs a bounded source")
    dom = G1.domain
    lo, hi = G1.lo, G1.hi
    system = _LinearSystem(dom)
    ids: Dict[int, int] = {}
    for n in range(lo, hi + 1):
        ids[n] = system.unknown(G2.dim(n), G1.dim(n))
    for n in range(lo, hi + 1):
        x = ids[n]
        src, tgt = G1.module(n), G2.module(n)
        ident_s = Matrix.identity(dom, src.dim)
        ident_t = Matrix.identity(dom, tgt.dim)
        for a, b in zip(src.action, tgt.action):
            system.congruence(
                [(b, x, ident_s), (ident_t.scale(-1), x, a)], Matrix.zeros(dom, tgt.dim, src.dim), tgt.relations
            )
        if src.relations.ncols:
            system.congruence(
                [(ident_t, x, src.relations)], Matrix.zeros(dom, tgt.dim, src.relations.ncols), tgt.relations
            )
        below = G2.module(n - 1)
        terms = [(G2.differential(n), x, ident_s)]
        if n - 1 in ids:
            terms.append((Matrix.identity(dom, below.dim).scale(-1), ids[n - 1], G1.differential(n)))
        system.congruence(terms, Matrix.zeros(dom, below.dim, src.dim), below.relations)
        M_n = alpha_tgt.target.module(n)
        system.congruence(
            [(alpha_tgt.component(n), x, ident_s)],
            f.component(n) @ alpha_src.component(n),
            M_n.relations,
        )
    sol = system.solve()
    if sol is None:
        raise ResolutionError("no chain map lifts the given map")
    comps = tuple(sol[ids[n]] for n in range(lo, hi + 1))
    g = ChainMap(G1, G2, lo, hi, comps)
    g.validate()
    return g


@dataclass(frozen=True)
class GorensteinApproximation:
    """``0 -> K -> G -> M -> 0`` with ``G`` bounded of Gorenstein projectives."""

    subject: ChainComplex
    G: ChainComplex
    projection: ChainMap
    kernel: ChainComplex
    inclusion: ChainMap
    dimensions: Dict[int, int]

    @property
    def bound(self) -> Union[int, float]:
        if not self.dimensions:
            return -math.inf
        return max(self.dimensions.values()) + self.subject.sup

    def verify(self) -> None:
        M, G = self.subject, self.G
        if not G.is_bounded:
            raise ResolutionError("approximation is not bounded")
        if G.inf != M.inf:
            raise ResolutionError(f"inf G = {G.inf} differs from inf M = {M.inf}")
        if G.sup > self.bound:
            raise ResolutionError(f"sup G = {G.sup} exceeds {self.bound}")
        if not math.isinf(M.sup):
            for n in range(int(M.sup) + 1, G.hi + 1):
                if not is_projective(G.module(n)):
                    raise ResolutionError(f"G_{n} is not projective above sup M")
        try:
            ShortExactSequence(self.inclusion, self.projection).verify()
        except ComplexError as exc:
            raise ResolutionError(f"0 -> K -> G -> M -> 0 is not exact: {exc}") from exc
        cert = is_acyclic(self.kernel)
        if not cert:
            raise ResolutionError(f"K is not acyclic (degree {cert.degree})")


def _assemble(M: ChainComplex, resolver: Resolver) -> Tuple[ChainComplex, ChainMap, Dict[int, int]]:
    dom = M.domain
    a, s = int(M.inf), int(M.sup)
    if a == s:
        ap = resolver(M.module(s))
        G = shift(ap.complex, s)

        def comp(n: int) -> Matrix:
            if n == s:
                return ap.map
            return Matrix.zeros(dom, M.dim(n), G.dim(n))

        return G, ChainMap.from_function(G, M, comp), {s: ap.dimension}
    top = ChainComplex.concentrated(M.module(s), s - 1, name=f"M_{s}")
    low = truncate_hard(M, s - 1, BELOW)

    def f_comp(n: int) -> Matrix:
        if n == s - 1:
            return M.differential(s)
        return Matrix.zeros(dom, low.dim(n), top.dim(n))

    f = ChainMap.from_function(top, low, f_comp)
    G1, a1, dims1 = _assemble(top, resolver)
    G2, a2, dims2 = _assemble(low, resolver)
    g = lift_chain_map(a1, a2, f)
    G = cone(g, name=f"G({M.name or 'M'})")

    def comp_cone(n: int) -> Matrix:
        return Matrix.block_diag(dom, [a1.component(n - 1), a2.component(n)])

    alpha = ChainMap.from_function(G, M, comp_cone)
    dims = dict(dims2)
    dims[s] = dims1[s - 1]
    return G, alpha, dims


def assemble_complex_resolution(M: ChainComplex, resolver: Optional[Resolver] = None) -> GorensteinApproximation:
    """Resolve a bounded complex degreewise by Gorenstein projectives, inducting on its length."""
    if not M.is_bounded:
        raise ResolutionError("assembly needs a bounded complex")
    if M.inf > M.sup:
        zero = ChainComplex.zero(M.algebra, M.side)
        z = ChainMap.zero(zero, M)
        return GorensteinApproximation(M, zero, z, zero, ChainMap.zero(zero, zero), {})
    resolver = resolver or default_resolver(M.algebra)
    try:
        G, alpha, dims = _assemble(M, resolver)
    except (ComplexError, DomainError) as exc:
        raise ResolutionError(f"resolver failure: {exc}") from exc
    kc = kernel_cokernel(alpha, require_surjective=True)
    approx = GorensteinApproximation(M, G, alpha, kc.kernel, kc.inclusion, dims)
    approx.verify()
    logger.info(f"assembled approximation of {M.name or 'complex'}: sup G = {G.sup}, bound {approx.bound}")
    return approx
