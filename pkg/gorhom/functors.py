"""Tor, Tate Tor, unbounded and stable Tor, relative Tor and Ext.

``HomologyFunctors`` owns the resolutions it builds and memoizes every value
it computes, so one instance can be shared by the checks of a suite.
"""
import logging
import math
import threading
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, Hashable, Iterable, Optional, Tuple, Union

from gorhom.algebras import (
    LEFT,
    RIGHT,
    FinModule,
    cyclic_group_algebra,
    is_isomorphic,
    is_projective,
    trivial_module,
)
from gorhom.api import DegreeError, GorhomError, GorhomSettings, ModuleError, ResolutionError
from gorhom.complexes import (
    ChainComplex,
    LongExactSequence,
    ShortExactSequence,
    homology_at,
    hom_complex,
    is_acyclic,
    long_exact_sequence,
    opposite_complex,
)
from gorhom.linalg import HomologyGroup
from gorhom.resolutions import (
    FLAT,
    PROJECTIVE,
    TRUNCATED,
    CompleteResolution,
    ProjectiveResolution,
    ProperResolution,
    complete_projective_resolution_frobenius,
    complete_resolution_of_acyclic,
    complete_resolution_of_finite,
    complete_resolution_of_projective,
    fixture_cyclic,
    pad_split_surjective,
    projective_resolution,
    proper_gorenstein_resolution,
    shift_resolution,
)
from gorhom.tensor import (
    homology_window,
    stable_tensor_homology,
    tensor_homology,
    tensor_sequence_left,
    tensor_sequence_right,
    unbounded_tensor_homology,
)

logger = logging.getLogger(__name__)

Argument = Union[FinModule, ChainComplex]

DEFINITIONALLY_ZERO = "definitionally zero"
GF_NOTE = "computed as Tor^GP"

TOR = "tor"
TATE = "tate"
BTOR = "btor"
STOR = "stor"
GP_RELATIVE = "gp_relative"
GF_RELATIVE = "gf_relative"
EXT = "ext"
FUNCTOR_TAGS = (TOR, TATE, BTOR, STOR, GP_RELATIVE, GF_RELATIVE, EXT)


def oriented(X: Argument, side: str) -> ChainComplex:
    """``X`` as a complex of ``side`` modules, switching sides over commutative algebras."""
    c = X if isinstance(X, ChainComplex) else ChainComplex.concentrated(X, 0)
    if c.side == side:
        return c
    if not c.algebra.is_commutative:
        raise ModuleError(f"{c.name or 'argument'} is a {c.side} complex, a {side} one is needed")
    return opposite_complex(c)


def module_on(M: FinModule, side: str) -> FinModule:
    return M if M.side == side else M.opposite()


def _cyclic_order(M: FinModule) -> Optional[int]:
    """``n`` when ``M`` is over ``ZZ[C_n]`` and isomorphic to the trivial module."""
    algebra = M.algebra
    if algebra.domain.is_field or algebra.dim < 2:
        return None
    if algebra != cyclic_group_algebra(algebra.domain, algebra.dim):
        return None
    if not is_isomorphic(M, trivial_module(algebra, M.side)):
        return None
    return algebra.dim


class HomologyFunctors:
    """Derived functors of the tensor product with memoized resolutions.

    Values are cached by ``(functor, arguments, degree)``; the cache is
    guarded by a lock so one instance may serve concurrent checks.
    """

    def __init__(
        self,
        horizon: int = 24,
        limit: int = 64,
        supplied: Optional[Iterable[CompleteResolution]] = None,
    ) -> None:
        self.horizon = horizon
        self.limit = limit
        self._cache: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()
        self._supplied: Dict[ChainComplex, CompleteResolution] = {}
        for res in supplied or ():
            self.register(res)

    @classmethod
    def from_settings(
        cls, settings: GorhomSettings, supplied: Optional[Iterable[CompleteResolution]] = None
    ) -> "HomologyFunctors":
        return cls(settings.periodicity_horizon, settings.isomorphism_search_limit, supplied)

    def register(self, res: CompleteResolution) -> None:
        """Use ``res`` for its subject instead of a constructed resolution."""
        res.validate()
        with self._lock:
            self._supplied[res.subject] = res
        logger.info(f"registered complete resolution of {res.subject.name or 'complex'} ({res.method})")

    def _memo(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    # resolutions

    def resolution(self, M: FinModule, length: int) -> ProjectiveResolution:
        return self._memo(("resolution", M, length), lambda: projective_resolution(M, length))

    def proper_resolution(self, M: FinModule) -> ProperResolution:
        return self._memo(("proper", M), lambda: proper_gorenstein_resolution(M, self.horizon))

    def complete_resolution(self, X: Argument, flavor: str = PROJECTIVE) -> CompleteResolution:
        """A validated complete resolution of ``X``; the flat flavor also carries
        split surjectivity of ``tau``, padding it in when needed."""
        c = X if isinstance(X, ChainComplex) else ChainComplex.concentrated(X, 0)
        return self._memo(("complete", c, flavor), lambda: self._build_complete(c, flavor))

    def _build_complete(self, c: ChainComplex, flavor: str) -> CompleteResolution:
        if c in self._supplied:
            res = self._supplied[c]
        elif is_acyclic(c):
            res = complete_resolution_of_acyclic(c)
        elif c.is_bounded and c.inf == c.sup:
            s = int(c.inf)
            res = shift_resolution(self._module_resolution(c.module(s)), s)
        else:
            raise ResolutionError(
                f"no construction for a complete resolution of {c.name or 'complex'} "
                "with several nonzero degrees; supply one"
            )
        if flavor != FLAT:
            return res
        flat = replace(res, flavor=FLAT)
        try:
            _ = flat.kernel_data
        except ResolutionError:
            logger.info(f"padding the complete resolution of {c.name or 'complex'} to split tau")
            flat = pad_split_surjective(flat)
        return flat.validate()

    def _module_resolution(self, M: FinModule) -> CompleteResolution:
        if is_projective(M):
            return complete_resolution_of_projective(M)
        n = _cyclic_order(M)
        if n is not None:
            return fixture_cyclic(n, side=M.side).resolution
        if M.algebra.is_frobenius and M.domain.is_field:
            return complete_projective_resolution_frobenius(M, self.horizon, self.limit)
        return complete_resolution_of_finite(M, self.horizon)

    # absolute Tor and Ext

    def tor(self, M: Argument, N: Argument, i: int) -> HomologyGroup:
        """``Tor_i(M, N)``, resolving the left argument unless it is a complex."""
        self._check_degree(M, N, i)
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        if i < Mc.inf + Nc.inf:
            return HomologyGroup.zero(Mc.domain, DEFINITIONALLY_ZERO)
        if isinstance(M, FinModule):
            return self._memo(("tor", Mc, Nc, i), lambda: self._tor_left(Mc.module(0), Nc, i))
        if isinstance(N, FinModule):
            return self.tor_by_right(Mc, N, i)
        raise ResolutionError("Tor of two complexes needs one module argument")

    def tor_by_right(self, M: Argument, N: FinModule, i: int) -> HomologyGroup:
        """``Tor_i(M, N) = H_i(M (x) P)`` for a projective resolution ``P`` of ``N``."""
        self._check_degree(M, N, i)
        Mc, Nl = oriented(M, RIGHT), module_on(N, LEFT)
        if i < Mc.inf:
            return HomologyGroup.zero(Mc.domain, DEFINITIONALLY_ZERO)
        if not Mc.is_bounded:
            raise ResolutionError("resolving the right argument needs a bounded left complex")
        return self._memo(("tor_right", Mc, Nl, i), lambda: self._tor_right(Mc, Nl, i))

    def _tor_left(self, M: FinModule, Nc: ChainComplex, i: int) -> HomologyGroup:
        if math.isinf(Nc.inf):
            raise ResolutionError("resolving the left argument needs a right complex bounded below")
        length = max(i - int(Nc.inf), 0) + 2
        P = self.resolution(M, length)
        value = tensor_homology(P.complex, Nc, [i])[i]
        if P.kind == TRUNCATED:
            longer = tensor_homology(self.resolution(M, length + 1).complex, Nc, [i])[i]
            if longer != value:
                raise ResolutionError(f"Tor_{i} depends on the resolution length: {value} vs {longer}")
        return value

    def _tor_right(self, Mc: ChainComplex, N: FinModule, i: int) -> HomologyGroup:
        length = i - int(Mc.inf) + 2
        P = self.resolution(N, length)
        value = tensor_homology(Mc, P.complex, [i])[i]
        if P.kind == TRUNCATED:
            longer = tensor_homology(Mc, self.resolution(N, length + 1).complex, [i])[i]
            if longer != value:
                raise ResolutionError(f"Tor_{i} depends on the resolution length: {value} vs {longer}")
        return value

    def ext(self, M: FinModule, N: FinModule, i: int) -> HomologyGroup:
        """``Ext^i(M, N) = H_(-i) Hom(P, N)``."""
        if i < 0:
            raise DegreeError(f"Ext^{i} of modules requested; degrees are nonnegative")
        N = module_on(N, M.side)

        def compute() -> HomologyGroup:
            P = self.resolution(M, i + 2)
            value = homology_at(hom_complex(P.complex, N), -i)
            if P.kind == TRUNCATED:
                longer = homology_at(hom_complex(self.resolution(M, i + 3).complex, N), -i)
                if longer != value:
                    raise ResolutionError(f"Ext^{i} depends on the resolution length")
            return value

        return self._memo(("ext", M, N, i), compute)

    # Tate, unbounded and stable homology

    def tate_tor(self, M: Argument, N: Argument, i: int) -> HomologyGroup:
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        return self._memo(
            ("tate", Mc, Nc, i), lambda: homology_window(self.complete_resolution(Mc).T, Nc, i)
        )

    def unbounded_tor(self, M: Argument, N: Argument, i: int) -> HomologyGroup:
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        return self._memo(
            ("btor", Mc, Nc, i),
            lambda: unbounded_tensor_homology(self.complete_resolution(Mc, FLAT), Nc, i),
        )

    def stable_tor(self, M: Argument, N: Argument, i: int) -> HomologyGroup:
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        return self._memo(
            ("stor", Mc, Nc, i),
            lambda: stable_tensor_homology(self.complete_resolution(Mc, FLAT), Nc, i),
        )

    def comparison_sequence(self, M: Argument, N: Argument, lo: int, hi: int) -> LongExactSequence:
        """``... -> sTor_i -> Tor_i -> bTor_i -> sTor_(i-1) -> ...`` from ``0 -> K -> T -> F -> 0``.

        Terms ``A``, ``B``, ``C`` in degree ``n`` are ``bTor_(n+1)``,
        ``sTor_n`` and ``Tor_n``.
        """
        Mc, Nc = oriented(M, RIGHT), oriented(N, LEFT)
        res = self.complete_resolution(Mc, FLAT)
        ses = tensor_sequence_left(res.kernel_data.inclusion, res.tau, Nc, lo, hi)
        return long_exact_sequence(ses, lo, hi)

    def tor_long_exact_sequence(self, M: FinModule, ses: ShortExactSequence, lo: int, hi: int) -> LongExactSequence:
        """``Tor_n(M, A) -> Tor_n(M, B) -> Tor_n(M, C) -> Tor_(n-1)(M, A)`` for ``0 -> A -> B -> C -> 0``."""
        if lo < 0:
            raise DegreeError(f"Tor of modules starts in degree 0, got {lo}")
        M = module_on(M, RIGHT)
        P = self.resolution(M, hi + 2)
        return long_exact_sequence(tensor_sequence_right(P.complex, ses.inclusion, ses.projection, lo, hi), lo, hi)

    # relative homology

    def relative_tor_gp(self, M: FinModule, N: Argument, i: int) -> HomologyGroup:
        """``H_i(G (x) N)`` for a proper Gorenstein projective resolution ``G`` of ``M``."""
        if not isinstance(M, FinModule):
            raise ModuleError("relative Tor is defined for a module in the first argument")
        if i < 0:
            raise DegreeError(f"relative Tor_{i} of a module requested; degrees are nonnegative")
        Mr, Nc = module_on(M, RIGHT), oriented(N, LEFT)
        return self._memo(
            ("gp", Mr, Nc, i),
            lambda: tensor_homology(self.proper_resolution(Mr).complex, Nc, [i])[i],
        )

    def relative_tor_gf(self, M: FinModule, N: Argument, i: int) -> HomologyGroup:
        """Relative homology based on Gorenstein flats; on the supported algebras
        every finite Gorenstein flat is Gorenstein projective."""
        return replace(self.relative_tor_gp(M, N, i), note=GF_NOTE)

    def _check_degree(self, M: Argument, N: Argument, i: int) -> None:
        if i < 0 and isinstance(M, FinModule) and isinstance(N, FinModule):
            raise DegreeError(f"Tor_{i} of modules requested; degrees are nonnegative")

    # requests

    def evaluate(self, request: "FunctorRequest") -> Dict[int, HomologyGroup]:
        fn = {
            TOR: self.tor,
            TATE: self.tate_tor,
            BTOR: self.unbounded_tor,
            STOR: self.stable_tor,
            GP_RELATIVE: self.relative_tor_gp,
            GF_RELATIVE: self.relative_tor_gf,
            EXT: self.ext,
        }[request.functor]
        out = {}
        for i in request.degrees:
            out[i] = fn(request.left, request.right, i)  # type: ignore[operator]
            logger.debug(f"{request.functor}_{i}({request.label}) = {out[i]}")
        return out


@dataclass(frozen=True)
class FunctorRequest:
    functor: str
    left: Argument
    right: Argument
    degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.functor not in FUNCTOR_TAGS:
            raise GorhomError(f"unknown functor {self.functor!r}; expected one of {', '.join(FUNCTOR_TAGS)}")
        if any(math.isinf(d) for d in self.degrees):
            raise DegreeError("degree ranges must be finite")
        if self.functor == EXT:
            if not (isinstance(self.left, FinModule) and isinstance(self.right, FinModule)):
                raise ModuleError("Ext takes two modules")
        else:
            oriented(self.left, RIGHT)
            oriented(self.right, LEFT)

    @property
    def label(self) -> str:
        return f"{self.left.name or 'M'}, {self.right.name or 'N'}"
