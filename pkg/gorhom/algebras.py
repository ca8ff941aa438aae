"""Finite-dimensional algebras by structure constants and their one-sided modules.

A module is stored as action matrices acting on column vectors, together with
a (possibly empty) matrix of relations: the module is ``domain^dim`` modulo the
column span of ``relations``. Over a field relations can always be reduced
away; over ZZ they carry torsion.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from gorhom.api import AlgebraError, DomainError, ModuleError
from gorhom.linalg import (
    Domain,
    HomologyGroup,
    LinearSolver,
    Matrix,
    Scalar,
    Vector,
    column_echelon,
    hstack,
    image_basis,
    inverse,
    is_invertible,
    kernel_basis,
    presented_group,
    rank,
    smith_normal_form,
)

logger = logging.getLogger(__name__)

Constants = Tuple[Tuple[Tuple[Scalar, ...], ...], ...]

LEFT = "left"
RIGHT = "right"


def other_side(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


@dataclass(frozen=True)
class Algebra:
    """Associative unital algebra with basis ``e_1..e_n`` and
    ``e_i e_j = sum_k constants[i][j][k] e_k``."""

    domain: Domain
    dim: int
    constants: Constants
    unit: Vector
    frobenius_form: Optional[Matrix] = None
    idempotents: Optional[Tuple[Vector, ...]] = None
    labels: Tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        n = self.dim
        if n < 1:
            raise AlgebraError("an algebra needs a positive dimension")
        if len(self.constants) != n or any(
            len(row) != n or any(len(c) != n for c in row) for row in self.constants
        ):
            raise AlgebraError(f"structure constants must have shape {n}x{n}x{n}")
        if len(self.unit) != n:
            raise AlgebraError(f"unit must have {n} coordinates")
        if self.labels and len(self.labels) != n:
            raise AlgebraError(f"expected {n} basis labels")
        self._check_associative()
        self._check_unit()
        if self.frobenius_form is not None:
            self._check_frobenius(self.frobenius_form)

    def _check_associative(self) -> None:
        red = self.domain.reduce
        c = self.constants
        n = self.dim
        for i, j, l in itertools.product(range(n), repeat=3):
            lhs = [
                red(sum((c[i][j][k] * c[k][l][m] for k in range(n)), self.domain.zero))
                for m in range(n)
            ]
            rhs = [
                red(sum((c[j][l][k] * c[i][k][m] for k in range(n)), self.domain.zero))
                for m in range(n)
            ]
            if lhs != rhs:
                raise AlgebraError(f"associativity fails at ({i + 1},{j + 1},{l + 1})")

    def _check_unit(self) -> None:
        red = self.domain.reduce
        c, u, n = self.constants, self.unit, self.dim
        for j in range(n):
            left = [red(sum((u[k] * c[k][j][m] for k in range(n)), self.domain.zero)) for m in range(n)]
            right = [red(sum((u[k] * c[j][k][m] for k in range(n)), self.domain.zero)) for m in range(n)]
            target = [self.domain.one if m == j else self.domain.zero for m in range(n)]
            if left != target or right != target:
                raise AlgebraError(f"unit axiom fails on basis element {j + 1}")

    def _check_frobenius(self, B: Matrix) -> None:
        if B.shape != (self.dim, self.dim):
            raise AlgebraError(f"Frobenius form must be {self.dim}x{self.dim}")
        if not is_invertible(B):
            raise AlgebraError("Frobenius form is singular")
        red = self.domain.reduce
        c, n = self.constants, self.dim
        for i, j, l in itertools.product(range(n), repeat=3):
            lhs = red(sum((c[i][j][k] * B[k, l] for k in range(n)), self.domain.zero))
            rhs = red(sum((c[j][l][k] * B[i, k] for k in range(n)), self.domain.zero))
            if lhs != rhs:
                raise AlgebraError(
                    f"Frobenius form is not associative at ({i + 1},{j + 1},{l + 1})"
                )

    @property
    def is_frobenius(self) -> bool:
        return self.frobenius_form is not None

    @cached_property
    def is_commutative(self) -> bool:
        n = self.dim
        return all(
            self.constants[i][j] == self.constants[j][i] for i in range(n) for j in range(n)
        )

    @cached_property
    def left_regular(self) -> Tuple[Matrix, ...]:
        """Matrices of left multiplication by each basis element."""
        n = self.dim
        return tuple(
            Matrix(
                self.domain,
                n,
                n,
                tuple(tuple(self.constants[i][j][k] for j in range(n)) for k in range(n)),
            )
            for i in range(n)
        )

    @cached_property
    def right_regular(self) -> Tuple[Matrix, ...]:
        """Matrices of right multiplication by each basis element."""
        n = self.dim
        return tuple(
            Matrix(
                self.domain,
                n,
                n,
                tuple(tuple(self.constants[j][i][k] for j in range(n)) for k in range(n)),
            )
            for i in range(n)
        )

    def regular(self, side: str) -> Tuple[Matrix, ...]:
        return self.left_regular if side == LEFT else self.right_regular

    def multiply(self, a: Sequence[Scalar], b: Sequence[Scalar]) -> Vector:
        red = self.domain.reduce
        n = self.dim
        return tuple(
            red(
                sum(
                    (a[i] * b[j] * self.constants[i][j][k] for i in range(n) for j in range(n)),
                    self.domain.zero,
                )
            )
            for k in range(n)
        )

    def basis_vector(self, i: int) -> Vector:
        return tuple(self.domain.one if k == i else self.domain.zero for k in range(self.dim))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i + 1}"

    @cached_property
    def ground(self) -> "Algebra":
        return ground(self.domain)

    def __str__(self) -> str:
        return self.name or f"algebra of dimension {self.dim} over {self.domain}"


def _constants(domain: Domain, n: int, product: Any) -> Constants:
    """Build constants from a function ``(i, j) -> {k: coefficient}``."""
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = [domain.zero] * n
            for k, v in product(i, j).items():
                coeffs[k] = domain.reduce(coeffs[k] + domain.element(v))
            row.append(tuple(coeffs))
        out.append(tuple(row))
    return tuple(out)


def ground(domain: Domain) -> Algebra:
    return Algebra(
        domain,
        1,
        (((domain.one,),),),
        (domain.one,),
        frobenius_form=Matrix.identity(domain, 1),
        idempotents=((domain.one,),),
        labels=("1",),
        name=domain.name,
    )


def truncated_polynomial(domain: Domain, n: int) -> Algebra:
    """``k[x]/(x^n)`` with basis ``1, x, ..., x^(n-1)``."""
    if n < 1:
        raise AlgebraError("truncation degree must be positive")
    constants = _constants(domain, n, lambda i, j: {i + j: 1} if i + j < n else {})
    form = Matrix.from_rows(domain, [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])
    labels = tuple("1" if i == 0 else ("x" if i == 1 else f"x^{i}") for i in range(n))
    return Algebra(
        domain,
        n,
        constants,
        tuple(domain.element(1 if i == 0 else 0) for i in range(n)),
        frobenius_form=form,
        labels=labels,
        name=f"{domain.name}[x]/(x^{n})",
    )


def cyclic_group_algebra(domain: Domain, n: int) -> Algebra:
    """Group algebra of the cyclic group of order ``n`` with basis ``1, t, ..., t^(n-1)``."""
    if n < 1:
        raise AlgebraError("group order must be positive")
    constants = _constants(domain, n, lambda i, j: {(i + j) % n: 1})
    form = Matrix.from_rows(
        domain, [[1 if (i + j) % n == 0 else 0 for j in range(n)] for i in range(n)]
    )
    labels = tuple("1" if i == 0 else ("t" if i == 1 else f"t^{i}") for i in range(n))
    return Algebra(
        domain,
        n,
        constants,
        tuple(domain.element(1 if i == 0 else 0) for i in range(n)),
        frobenius_form=form,
        labels=labels,
        name=f"{domain.name}[C{n}]",
    )


def product_of_fields(domain: Domain, count: int) -> Algebra:
    constants = _constants(domain, count, lambda i, j: {i: 1} if i == j else {})
    basis = tuple(tuple(domain.element(1 if k == i else 0) for k in range(count)) for i in range(count))
    return Algebra(
        domain,
        count,
        constants,
        tuple(domain.element(1) for _ in range(count)),
        frobenius_form=Matrix.identity(domain, count),
        idempotents=basis,
        labels=tuple(f"e{i + 1}" for i in range(count)),
        name=" x ".join([domain.name] * count),
    )


def upper_triangular(domain: Domain) -> Algebra:
    """Upper triangular 2x2 matrices, basis ``e11, e12, e22``."""
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}
    constants = _constants(domain, 3, lambda i, j: table.get((i, j), {}))
    one, zero = domain.one, domain.zero
    return Algebra(
        domain,
        3,
        constants,
        (one, zero, one),
        idempotents=((one, zero, zero), (zero, zero, one)),
        labels=("e11", "e12", "e22"),
        name=f"T2({domain.name})",
    )


def load_algebra(description: Dict[str, Any]) -> Algebra:
    """Build and verify an algebra from its JSON description."""
    try:
        domain = Domain.parse(str(description["domain"]))
        n = int(description["dim"])
        raw = description["constants"]
        unit = tuple(domain.element(v) for v in description["unit"])
    except KeyError as e:
        raise AlgebraError(f"missing algebra field {e.args[0]!r}") from None
    if len(raw) != n or any(len(row) != n for row in raw):
        raise AlgebraError(f"structure constants must have shape {n}x{n}x{n}")
    constants = tuple(
        tuple(tuple(domain.element(v) for v in cell) for cell in row) for row in raw
    )
    form = description.get("frobenius_form")
    idempotents = description.get("idempotents")
    return Algebra(
        domain,
        n,
        constants,
        unit,
        frobenius_form=Matrix.from_json(domain, form, (n, n)) if form is not None else None,
        idempotents=tuple(tuple(domain.element(v) for v in e) for e in idempotents)
        if idempotents is not None
        else None,
        labels=tuple(description.get("labels", ())),
        name=str(description.get("name", "")),
    )


# ---------------------------------------------------------------------------
# Modules


@dataclass(frozen=True)
class FinModule:
    """One-sided module given by action matrices modulo relations.

    For a left module ``action[i] @ action[j] == sum_k c[i][j][k] action[k]``,
    for a right module the product order is swapped, both modulo relations.
    """

    algebra: Algebra
    side: str
    dim: int
    action: Tuple[Matrix, ...]
    relations: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.side not in (LEFT, RIGHT):
            raise ModuleError(f"unknown side {self.side!r}")
        if len(self.action) != self.algebra.dim:
            raise ModuleError(
                f"expected {self.algebra.dim} action matrices, got {len(self.action)}"
            )
        for i, a in enumerate(self.action):
            if a.shape != (self.dim, self.dim) or a.domain != self.algebra.domain:
                raise ModuleError(f"action matrix {i + 1} must be {self.dim}x{self.dim}")
        if self.relations.nrows != self.dim or self.relations.domain != self.algebra.domain:
            raise ModuleError(f"relations must have {self.dim} rows")

    @classmethod
    def create(
        cls,
        algebra: Algebra,
        side: str,
        action: Sequence[Matrix],
        relations: Optional[Matrix] = None,
        name: str = "",
    ) -> "FinModule":
        """Build a module and verify the module axioms."""
        if not action:
            raise ModuleError("no action matrices given")
        dim = action[0].nrows
        if relations is None:
            relations = Matrix.zeros(algebra.domain, dim, 0)
        module = cls(algebra, side, dim, tuple(action), relations, name)
        module.validate()
        return module

    @property
    def domain(self) -> Domain:
        return self.algebra.domain

    @cached_property
    def _relation_solver(self) -> LinearSolver:
        return LinearSolver(self.relations)

    def congruent_zero(self, X: Matrix) -> bool:
        """Whether every column of ``X`` vanishes in the module."""
        if self.relations.ncols == 0:
            return X.is_zero()
        solver = self._relation_solver
        return all(solver.contains(c) for c in X.columns())

    def act(self, a: Sequence[Scalar]) -> Matrix:
        """Action matrix of the algebra element with coordinates ``a``."""
        out = Matrix.zeros(self.domain, self.dim, self.dim)
        for coeff, m in zip(a, self.action):
            if coeff != 0:
                out = out + m.scale(coeff)
        return out

    def validate(self) -> None:
        R = self.algebra
        n = R.dim
        for i, a in enumerate(self.action):
            if not self.congruent_zero(a @ self.relations):
                raise ModuleError(f"relations are not stable under basis element {i + 1}")
        if not self.congruent_zero(self.act(R.unit) - Matrix.identity(self.domain, self.dim)):
            raise ModuleError("the unit does not act as the identity")
        for i, j in itertools.product(range(n), repeat=2):
            prod = self.action[i] @ self.action[j]
            coeffs = R.constants[i][j] if self.side == LEFT else R.constants[j][i]
            if not self.congruent_zero(prod - self.act(coeffs)):
                raise ModuleError(f"module axiom fails at ({i + 1},{j + 1})")

    @property
    def is_relation_free(self) -> bool:
        return self.relations.ncols == 0

    def group(self) -> HomologyGroup:
        """Isomorphism class of the underlying space (abelian group over ZZ)."""
        return presented_group(self.domain, self.dim, self.relations)

    def is_zero(self) -> bool:
        return self.group().is_zero

    def opposite(self) -> "FinModule":
        """The same module on the other side, for commutative algebras."""
        if not self.algebra.is_commutative:
            raise ModuleError("switching sides needs a commutative algebra")
        return FinModule(
            self.algebra, other_side(self.side), self.dim, self.action, self.relations, self.name
        )

    @cached_property
    def reduction(self) -> "Reduction":
        return _reduce(self)

    def reduced(self) -> "Reduction":
        return self.reduction

    def __str__(self) -> str:
        return self.name or f"{self.side} module of dimension {self.dim}"


def zero_module(algebra: Algebra, side: str) -> FinModule:
    empty = Matrix.zeros(algebra.domain, 0, 0)
    return FinModule(algebra, side, 0, (empty,) * algebra.dim, empty, "0")


def regular(algebra: Algebra, side: str) -> FinModule:
    return FinModule(
        algebra,
        side,
        algebra.dim,
        algebra.regular(side),
        Matrix.zeros(algebra.domain, algebra.dim, 0),
        "R",
    )


def direct_sum(modules: Sequence[FinModule], algebra: Optional[Algebra] = None, side: str = "") -> FinModule:
    if not modules:
        if algebra is None or not side:
            raise ModuleError("empty direct sum needs an algebra and a side")
        return zero_module(algebra, side)
    head = modules[0]
    for m in modules[1:]:
        if m.algebra != head.algebra or m.side != head.side:
            raise ModuleError("direct sum of modules over different algebras or sides")
    dom = head.domain
    action = tuple(
        Matrix.block_diag(dom, [m.action[i] for m in modules]) for i in range(head.algebra.dim)
    )
    return FinModule(
        head.algebra,
        head.side,
        sum(m.dim for m in modules),
        action,
        Matrix.block_diag(dom, [m.relations for m in modules]),
        " + ".join(m.name or "?" for m in modules),
    )


def free_module(algebra: Algebra, side: str, rank_: int) -> FinModule:
    if rank_ == 0:
        return zero_module(algebra, side)
    module = direct_sum([regular(algebra, side)] * rank_)
    return replace(module, name="R" if rank_ == 1 else f"R^{rank_}")


def character_module(
    algebra: Algebra, values: Sequence[Any], side: str = LEFT, modulus: int = 0, name: str = ""
) -> FinModule:
    """One-dimensional module where basis element ``i`` acts by ``values[i]``.

    ``modulus`` adds the relation ``modulus * v = 0`` (ZZ/m coefficients).
    """
    dom = algebra.domain
    action = [Matrix.from_rows(dom, [[v]]) for v in values]
    relations = (
        Matrix.from_rows(dom, [[modulus]]) if modulus else Matrix.zeros(dom, 1, 0)
    )
    return FinModule.create(algebra, side, action, relations, name)


def trivial_module(algebra: Algebra, side: str = LEFT, modulus: int = 0) -> FinModule:
    """Trivial module of a group algebra: every group element acts as 1."""
    name = "Z" if not modulus else f"Z/{modulus}"
    if algebra.domain.is_field:
        name = "k"
    return character_module(algebra, [1] * algebra.dim, side, modulus, name)


def simple_top(algebra: Algebra, side: str = LEFT) -> FinModule:
    """The simple module of a local algebra whose basis beyond the unit is nilpotent."""
    values = [1 if i == 0 else 0 for i in range(algebra.dim)]
    return character_module(algebra, values, side, name="k")


def submodule(module: FinModule, basis: Matrix, name: str = "") -> FinModule:
    """Submodule spanned by the columns of ``basis`` (assumed action-stable)."""
    dom = module.domain
    s = basis.ncols
    big = basis.hstack(module.relations)
    solver = LinearSolver(big)
    action = []
    for a in module.action:
        sol = solver.solve_matrix(a @ basis)
        action.append(sol.select_rows(range(s)))  # type: ignore[arg-type]
    rel = kernel_basis(big).select_rows(range(s))  # type: ignore[arg-type]
    rel = image_basis(rel) if rel.ncols else rel
    if rel.ncols == 0:
        rel = Matrix.zeros(dom, s, 0)
    return FinModule(module.algebra, module.side, s, tuple(action), rel, name)


@dataclass(frozen=True)
class Reduction:
    """Normal form of a presented module.

    ``projection`` maps original coordinates onto the reduced ones and
    ``section`` maps back; ``projection @ section`` is the identity.
    """

    original: FinModule
    module: FinModule
    projection: Matrix
    section: Matrix

    @property
    def is_identity(self) -> bool:
        return self.original.is_relation_free


def _reduce(module: FinModule) -> Reduction:
    dom = module.domain
    dim = module.dim
    if module.is_relation_free:
        ident = Matrix.identity(dom, dim)
        return Reduction(module, module, ident, ident)
    if dom.is_field:
        ech = column_echelon(module.relations)
        pivots = set(ech.pivots)
        keep = [j for j in range(dim) if j not in pivots]
        rows = []
        for j in keep:
            row = [dom.zero] * dim
            row[j] = dom.one
            for k, p in enumerate(ech.pivots):
                row[p] = dom.reduce(-ech.form[j, k])
            rows.append(tuple(row))
        projection = Matrix(dom, len(keep), dim, tuple(rows))
        section = Matrix.identity(dom, dim).select_columns(keep)
        relations = Matrix.zeros(dom, len(keep), 0)
    else:
        snf = smith_normal_form(module.relations)
        diag = snf.diagonal
        keep = [i for i in range(dim) if i >= len(diag) or diag[i] != 1]
        projection = snf.U.select_rows(keep)
        section = inverse(snf.U).select_columns(keep)
        torsion = [(pos, diag[i]) for pos, i in enumerate(keep) if i < len(diag) and diag[i] > 1]
        relations = Matrix.from_columns(
            dom,
            [[d if r == pos else 0 for r in range(len(keep))] for pos, d in torsion],
            len(keep),
        )
    action = tuple(projection @ a @ section for a in module.action)
    reduced = FinModule(module.algebra, module.side, len(keep), action, relations, module.name)
    return Reduction(module, reduced, projection, section)


# ---------------------------------------------------------------------------
# Tensor and Hom


def module_tensor(M: FinModule, N: FinModule) -> FinModule:
    """``M (x)_R N`` as a presented module over the ground domain.

    Generator ``a * N.dim + b`` is ``m_a (x) n_b``.
    """
    if M.algebra != N.algebra:
        raise ModuleError("tensor product of modules over different algebras")
    if M.side != RIGHT or N.side != LEFT:
        raise ModuleError("tensor product needs a right module and a left module")
    dom = M.domain
    IM = Matrix.identity(dom, M.dim)
    IN = Matrix.identity(dom, N.dim)
    blocks = [a.kron(IN) - IM.kron(b) for a, b in zip(M.action, N.action)]
    blocks.append(M.relations.kron(IN))
    blocks.append(IM.kron(N.relations))
    relations = hstack(dom, M.dim * N.dim, blocks)
    k = M.algebra.ground
    size = M.dim * N.dim
    return FinModule(
        k,
        LEFT,
        size,
        (Matrix.identity(dom, size),),
        relations,
        f"{M.name or 'M'} (x) {N.name or 'N'}",
    )


def _vec(phi: Matrix) -> Vector:
    return tuple(v for row in phi.rows for v in row)


def _unvec(domain: Domain, v: Sequence[Scalar], nrows: int, ncols: int) -> Matrix:
    return Matrix(domain, nrows, ncols, tuple(tuple(v[r * ncols:(r + 1) * ncols]) for r in range(nrows)))


@dataclass(frozen=True)
class HomSpace:
    """All module maps between two modules, as a space over the ground domain.

    ``kernel`` has the row-major vectorizations of a basis of maps between the
    reduced modules as its columns.
    """

    source: FinModule
    target: FinModule
    kernel: Matrix

    @property
    def dim(self) -> int:
        return self.kernel.ncols

    @property
    def _src(self) -> Reduction:
        return self.source.reduction

    @property
    def _tgt(self) -> Reduction:
        return self.target.reduction

    @cached_property
    def _solver(self) -> LinearSolver:
        return LinearSolver(self.kernel)

    def reduced_map(self, k: int) -> Matrix:
        return _unvec(self.source.domain, self.kernel.column(k), self._tgt.module.dim, self._src.module.dim)

    @cached_property
    def basis(self) -> Tuple[Matrix, ...]:
        """Basis maps in original coordinates."""
        return tuple(
            self._tgt.section @ self.reduced_map(k) @ self._src.projection for k in range(self.dim)
        )

    def coordinates(self, phi: Matrix) -> Vector:
        """Coordinates of a module map given in original coordinates."""
        reduced = self._tgt.projection @ phi @ self._src.section
        sol = self._solver.solve(_vec(reduced))
        if not sol.consistent:
            raise ModuleError("map is not a module homomorphism")
        return sol.x  # type: ignore[union-attr]

    def combine(self, coeffs: Sequence[Scalar]) -> Matrix:
        dom = self.source.domain
        out = Matrix.zeros(dom, self.target.dim, self.source.dim)
        for c, b in zip(coeffs, self.basis):
            if c != 0:
                out = out + b.scale(c)
        return out

    def as_module(
        self,
        side: str,
        post: Optional[Sequence[Matrix]] = None,
        pre: Optional[Sequence[Matrix]] = None,
        name: str = "",
    ) -> FinModule:
        """Residual module structure by post-composition (or pre-composition)
        with the given matrices, one per algebra basis element."""
        if (post is None) == (pre is None):
            raise ModuleError("give exactly one of post and pre")
        dom = self.source.domain
        algebra = self.source.algebra
        if self.dim == 0:
            return zero_module(algebra, side)
        src, tgt = self._src, self._tgt
        images = []
        if post is not None:
            for P in post:
                P_red = tgt.projection @ P @ tgt.section
                images.append(P_red.kron(Matrix.identity(dom, src.module.dim)) @ self.kernel)
        else:
            for Q in pre:  # type: ignore[union-attr]
                Q_red = src.projection @ Q @ src.section
                images.append(Matrix.identity(dom, tgt.module.dim).kron(Q_red.T) @ self.kernel)
        action = [self._solver.solve_matrix(img) for img in images]
        return FinModule.create(algebra, side, action, Matrix.zeros(dom, self.dim, 0), name)


def module_hom(M: FinModule, N: FinModule) -> HomSpace:
    """Space of module maps ``M -> N``."""
    if M.algebra != N.algebra:
        raise ModuleError("Hom between modules over different algebras")
    if M.side != N.side:
        raise ModuleError("Hom needs modules on the same side")
    Mr, Nr = M.reduction.module, N.reduction.module
    if not (Mr.is_relation_free and Nr.is_relation_free):
        raise DomainError("Hom of modules with torsion over ZZ is not supported")
    dom = M.domain
    m, n = Mr.dim, Nr.dim
    IM = Matrix.identity(dom, m)
    IN = Matrix.identity(dom, n)
    if m == 0 or n == 0:
        return HomSpace(M, N, Matrix.zeros(dom, m * n, 0))
    eqs = [IN.kron(a.T) - b.kron(IM) for a, b in zip(Mr.action, Nr.action)]
    head, *rest = eqs
    system = head.vstack(*rest)
    return HomSpace(M, N, kernel_basis(system))


def ring_dual(M: FinModule) -> FinModule:
    """``Hom_R(M, R)`` with the residual module structure of the other side."""
    R = M.algebra
    H = module_hom(M, regular(R, M.side))
    post = R.regular(other_side(M.side))
    return H.as_module(other_side(M.side), post=post, name=f"Hom({M.name or 'M'},R)")


def dual(M: FinModule) -> FinModule:
    """The ground-domain dual ``Hom(M, k)`` as a module of the other side."""
    red = M.reduction.module
    if not red.is_relation_free:
        raise DomainError("the dual of a module with torsion over ZZ is not supported")
    return FinModule(
        M.algebra,
        other_side(M.side),
        red.dim,
        tuple(a.T for a in red.action),
        Matrix.zeros(M.domain, red.dim, 0),
        f"D({M.name or 'M'})",
    )


_EXHAUSTIVE_LIMIT = 1 << 18
_GENERIC_BOUND = 1 << 31


def _generic_coefficients(domain: Domain, rng: random.Random, count: int) -> List[int]:
    if domain.kind == "prime":
        return [rng.randrange(domain.modulus) for _ in range(count)]
    if domain.kind == "rational":
        return [rng.randint(-_GENERIC_BOUND, _GENERIC_BOUND) for _ in range(count)]
    return [rng.randint(-2, 2) for _ in range(count)]


def _all_combinations(domain: Domain, basis: Sequence[Matrix], zero: Matrix) -> Iterator[Matrix]:
    """Every linear combination of ``basis``; partial sums are shared along the walk."""
    coeffs = list(range(1, domain.modulus)) if domain.kind == "prime" else [1, -1, 2, -2]
    scaled = [[h.scale(c) for c in coeffs] for h in basis]

    def walk(k: int, acc: Matrix) -> Iterator[Matrix]:
        if k == len(basis):
            yield acc
            return
        yield from walk(k + 1, acc)
        for s in scaled[k]:
            yield from walk(k + 1, acc + s)

    yield from walk(0, zero)


def find_isomorphism(M: FinModule, N: FinModule, limit: int = 64) -> Optional[Matrix]:
    """An invertible module map ``M -> N`` (original coordinates), or None.

    After cheap invariants (groups, ranks of the action, the four Hom
    dimensions) the basis maps of Hom(M, N) are tried, then ``limit``
    combinations with seeded random coefficients. Over QQ a random
    combination with coefficients of size ``2**31`` is invertible whenever
    any map is, except with probability ``dim M / 2**31`` per draw. Over
    GF(p) the whole of Hom(M, N) is walked afterwards, so None is a proof
    that no isomorphism exists; a Hom space with more than ``2**18``
    elements raises ModuleError instead. Over ZZ the walk covers
    coefficients in ``-2..2`` only.
    """
    if M.algebra != N.algebra or M.side != N.side:
        return None
    Mr, Nr = M.reduction.module, N.reduction.module
    if Mr.group() != Nr.group():
        return None
    if not (Mr.is_relation_free and Nr.is_relation_free):
        if Mr.dim == 0 and Nr.dim == 0:
            return Matrix.zeros(M.domain, N.dim, M.dim)
        return None
    if M.domain.is_field and any(rank(a) != rank(b) for a, b in zip(Mr.action, Nr.action)):
        return None
    if Mr.dim == 0:
        return Matrix.zeros(M.domain, N.dim, M.dim)
    H = module_hom(M, N)
    if H.dim == 0:
        return None
    if len({H.dim, module_hom(N, M).dim, module_hom(M, M).dim, module_hom(N, N).dim}) > 1:
        return None

    def lift(phi: Matrix) -> Matrix:
        return N.reduction.section @ phi @ M.reduction.projection

    basis = [H.reduced_map(k) for k in range(H.dim)]
    for phi in basis:
        if is_invertible(phi):
            return lift(phi)
    zero = Matrix.zeros(M.domain, Nr.dim, Mr.dim)
    rng = random.Random(0)
    for _ in range(limit):
        phi = zero
        for h, c in zip(basis, _generic_coefficients(M.domain, rng, H.dim)):
            if c != 0:
                phi = phi + h.scale(c)
        if is_invertible(phi):
            return lift(phi)
    if M.domain.kind == "rational":
        return None
    size = (M.domain.modulus if M.domain.kind == "prime" else 5) ** H.dim
    if size > _EXHAUSTIVE_LIMIT:
        if M.domain.kind == "prime":
            raise ModuleError(
                f"isomorphism search {M} -> {N}: Hom has {size} elements, above the exhaustive limit"
            )
        logger.warning(f"isomorphism search {M} -> {N} gave up after {limit} integral combinations")
        return None
    for phi in _all_combinations(M.domain, basis, zero):
        if is_invertible(phi):
            return lift(phi)
    return None


def is_isomorphic(M: FinModule, N: FinModule, limit: int = 64) -> bool:
    return find_isomorphism(M, N, limit) is not None


# ---------------------------------------------------------------------------
# Generators, covers, projectivity


def generated_span(module: FinModule, vectors: Matrix) -> Matrix:
    """Columns spanning the submodule generated by ``vectors`` together with the relations."""
    parts = [a @ vectors for a in module.action] + [module.relations]
    return hstack(module.domain, module.dim, parts)


def minimal_generators(module: FinModule) -> Matrix:
    """Irredundant generating set, chosen greedily along the standard basis."""
    dom = module.domain
    ident = Matrix.identity(dom, module.dim)
    chosen: List[int] = []

    def generates(cols: List[int], probe: Sequence[int]) -> bool:
        span = generated_span(module, ident.select_columns(cols))
        solver = LinearSolver(span)
        return all(solver.contains(ident.column(c)) for c in probe)

    for c in range(module.dim):
        if not generates(chosen, [c]):
            chosen.append(c)
    everything = list(range(module.dim))
    for c in list(chosen):
        trial = [x for x in chosen if x != c]
        if generates(trial, everything):
            chosen = trial
    return ident.select_columns(chosen)


@dataclass(frozen=True)
class Cover:
    """Surjection ``free -> module``; column ``s * dim R + j`` is ``e_j`` acting on generator ``s``."""

    free: FinModule
    map: Matrix
    generators: Matrix


def covering_map(module: FinModule, generators: Matrix) -> Matrix:
    dom = module.domain
    cols: List[Vector] = []
    for x in generators.columns():
        for a in module.action:
            cols.append(a.apply(x))
    return Matrix.from_columns(dom, cols, module.dim) if cols else Matrix.zeros(dom, module.dim, 0)


def projective_cover(module: FinModule) -> Cover:
    gens = minimal_generators(module)
    free = free_module(module.algebra, module.side, gens.ncols)
    return Cover(free, covering_map(module, gens), gens)


def split_cover(module: FinModule) -> Optional[Matrix]:
    """A module map ``s`` with ``cover.map @ s`` the identity on the module, if one exists."""
    red = module.reduction.module
    if not red.is_relation_free:
        return None
    cover = projective_cover(red)
    if cover.free.dim == 0:
        return Matrix.zeros(module.domain, 0, module.dim)
    H = module_hom(red, cover.free)
    dom = module.domain
    if H.dim == 0:
        return None
    system = Matrix.from_columns(
        dom, [_vec(cover.map @ b) for b in H.basis], red.dim * red.dim
    )
    sol = LinearSolver(system).solve(_vec(Matrix.identity(dom, red.dim)))
    if not sol.consistent:
        return None
    return H.combine(sol.x) @ module.reduction.projection  # type: ignore[union-attr]


def is_projective(module: FinModule) -> bool:
    if module.reduction.module.dim == 0:
        return True
    return split_cover(module) is not None


# ---------------------------------------------------------------------------
# Idempotents and injectives


def default_idempotents(algebra: Algebra) -> Tuple[Vector, ...]:
    """Supplied idempotents, or the idempotent basis elements carrying unit coefficients."""
    if algebra.idempotents is not None:
        return algebra.idempotents
    dom = algebra.domain
    picks = []
    for i in range(algebra.dim):
        e = algebra.basis_vector(i)
        if algebra.unit[i] != 0 and algebra.multiply(e, e) == e:
            picks.append(e)
    total = tuple(dom.reduce(sum((p[k] for p in picks), dom.zero)) for k in range(algebra.dim))
    zero = tuple(dom.zero for _ in range(algebra.dim))
    orthogonal = all(
        algebra.multiply(a, b) == zero for a, b in itertools.permutations(picks, 2)
    )
    if not picks or total != algebra.unit or not orthogonal:
        raise ModuleError(
            f"no default idempotent decomposition for {algebra}; supply idempotents"
        )
    return tuple(picks)


def indecomposable_injectives(algebra: Algebra, side: str = LEFT) -> List[FinModule]:
    """``D(e R)`` for left injectives, ``D(R e)`` for right injectives."""
    if not algebra.domain.is_field:
        raise DomainError("indecomposable injectives need an algebra over a field")
    out = []
    for n, e in enumerate(default_idempotents(algebra), start=1):
        if side == LEFT:
            # e R inside the right regular module
            ambient = regular(algebra, RIGHT)
            mult = sum_action(algebra.left_regular, e, algebra.domain)
        else:
            ambient = regular(algebra, LEFT)
            mult = sum_action(algebra.right_regular, e, algebra.domain)
        projective = submodule(ambient, image_basis(mult), name=f"P{n}")
        out.append(replace(dual(projective), name=f"E{n}"))
    return out


def sum_action(mats: Sequence[Matrix], coeffs: Sequence[Scalar], domain: Domain) -> Matrix:
    n = mats[0].nrows
    out = Matrix.zeros(domain, n, n)
    for c, m in zip(coeffs, mats):
        if c != 0:
            out = out + m.scale(c)
    return out


@dataclass(frozen=True)
class ZModule:
    """Finitely generated abelian group ``ZZ^ngens`` modulo the columns of ``relations``."""

    ngens: int
    relations: Matrix

    @cached_property
    def group(self) -> HomologyGroup:
        return presented_group(Domain.integer(), self.ngens, self.relations)

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def torsion(self) -> Tuple[int, ...]:
        return self.group.torsion
