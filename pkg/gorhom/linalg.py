"""Exact dense linear algebra over prime fields, the rationals and the integers.

Every matrix is an immutable value. Field computations go through a reduced
column echelon form, integer computations through Hermite-style column
reduction and the Smith normal form. Pivot choices are fixed so that repeated
runs produce identical decompositions.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, List, Sequence, Tuple, Union

from sympy import isprime

from gorhom.api import DomainError, GorhomError, ShapeError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Vector = Tuple[Scalar, ...]

_KINDS = ("prime", "rational", "integer")


@dataclass(frozen=True)
class Domain:
    """Coefficient domain: GF(p), QQ or ZZ."""

    kind: str
    modulus: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "prime":
            if not isprime(self.modulus):
                raise DomainError(f"GF({self.modulus}) requires a prime modulus")
        elif self.modulus != 0:
            raise DomainError(f"{self.kind} domain takes no modulus")

    @classmethod
    def prime(cls, p: int) -> "Domain":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "Domain":
        return cls("rational")

    @classmethod
    def integer(cls) -> "Domain":
        return cls("integer")

    @classmethod
    def parse(cls, text: str) -> "Domain":
        """Parse ``GF(p)``, ``QQ`` or ``ZZ``."""
        label = text.strip().upper().replace(" ", "")
        if label in ("QQ", "Q"):
            return cls.rational()
        if label in ("ZZ", "Z"):
            return cls.integer()
        if label.startswith("GF(") and label.endswith(")"):
            try:
                p = int(label[3:-1])
            except ValueError:
                raise DomainError(f"cannot parse domain {text!r}") from None
            return cls.prime(p)
        if label.startswith("F") and label[1:].isdigit():
            return cls.prime(int(label[1:]))
        raise DomainError(f"cannot parse domain {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "integer"

    @property
    def name(self) -> str:
        if self.kind == "prime":
            return f"GF({self.modulus})"
        return "QQ" if self.kind == "rational" else "ZZ"

    def __str__(self) -> str:
        return self.name

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.kind == "rational" else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.kind == "rational" else 1

    def reduce(self, value: Scalar) -> Scalar:
        """Canonical form of an already valid element."""
        if self.kind == "prime":
            return int(value) % self.modulus
        if self.kind == "rational":
            return Fraction(value)
        return int(value)

    def element(self, value: Any) -> Scalar:
        """Coerce ints, fractions and strings such as ``"-1/2"``."""
        if isinstance(value, bool):
            raise DomainError(f"{value!r} is not a scalar")
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise DomainError(f"cannot parse scalar {value!r}") from None
        if isinstance(value, int):
            return self.reduce(value)
        if isinstance(value, Fraction):
            if self.kind == "rational":
                return value
            if value.denominator == 1:
                return self.reduce(value.numerator)
            if self.kind == "integer":
                raise DomainError(f"{value} is not an integer")
            if value.denominator % self.modulus == 0:
                raise DomainError(f"{value} has no image in {self.name}")
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        raise DomainError(f"{value!r} is not a scalar")

    def inverse(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.kind == "prime":
            return pow(int(value), -1, self.modulus)
        if self.kind == "rational":
            return 1 / Fraction(value)
        if value in (1, -1):
            return int(value)
        raise DomainError(f"{value} is not a unit of ZZ")

    def format(self, value: Scalar) -> str:
        return str(value)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix with canonical entries, stored row-major."""

    domain: Domain
    nrows: int
    ncols: int
    rows: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ShapeError("negative matrix shape")
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ShapeError(f"entries do not form a {self.nrows}x{self.ncols} matrix")

    # construction

    @classmethod
    def zeros(cls, domain: Domain, nrows: int, ncols: int) -> "Matrix":
        z = domain.zero
        return cls(domain, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, domain: Domain, n: int) -> "Matrix":
        z, o = domain.zero, domain.one
        return cls(
            domain, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        )

    @classmethod
    def from_rows(
        cls, domain: Domain, rows: Iterable[Iterable[Any]], ncols: int = -1
    ) -> "Matrix":
        data = tuple(tuple(domain.element(v) for v in row) for row in rows)
        if ncols < 0:
            ncols = len(data[0]) if data else 0
        return cls(domain, len(data), ncols, data)

    @classmethod
    def from_columns(
        cls, domain: Domain, columns: Iterable[Iterable[Any]], nrows: int
    ) -> "Matrix":
        cols = [tuple(domain.element(v) for v in c) for c in columns]
        if any(len(c) != nrows for c in cols):
            raise ShapeError(f"columns must have length {nrows}")
        return cls(
            domain, nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows))
        )

    @classmethod
    def column_vector(cls, domain: Domain, values: Iterable[Any]) -> "Matrix":
        return cls.from_rows(domain, [[v] for v in values], ncols=1)

    @classmethod
    def from_json(cls, domain: Domain, data: Sequence[Sequence[Any]], shape: Tuple[int, int]) -> "Matrix":
        nrows, ncols = shape
        if nrows == 0 or ncols == 0:
            if any(len(r) for r in data) or len(data) not in (0, nrows):
                raise ShapeError(f"expected an empty {nrows}x{ncols} matrix")
            return cls.zeros(domain, nrows, ncols)
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise ShapeError(
                f"expected a {nrows}x{ncols} matrix, got {len(data)} rows"
            )
        return cls.from_rows(domain, data, ncols)

    def to_json(self) -> List[List[str]]:
        return [[self.domain.format(v) for v in row] for row in self.rows]

    # access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @cached_property
    def T(self) -> "Matrix":
        return Matrix(
            self.domain,
            self.ncols,
            self.nrows,
            tuple(tuple(row[j] for row in self.rows) for j in range(self.ncols)),
        )

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # arithmetic

    def _check_same(self, other: "Matrix") -> None:
        if self.domain != other.domain:
            raise DomainError(f"cannot combine {self.domain} and {other.domain} matrices")
        if self.shape != other.shape:
            raise ShapeError(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.domain.reduce
        return Matrix(
            self.domain,
            self.nrows,
            self.ncols,
            tuple(
                tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
            ),
        )

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.domain.reduce
        return Matrix(
            self.domain,
            self.nrows,
            self.ncols,
            tuple(
                tuple(red(a - b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
            ),
        )

    def scale(self, c: Any) -> "Matrix":
        c = self.domain.element(c)
        red = self.domain.reduce
        return Matrix(
            self.domain,
            self.nrows,
            self.ncols,
            tuple(tuple(red(c * a) for a in r) for r in self.rows),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.domain != other.domain:
            raise DomainError(f"cannot multiply {self.domain} and {other.domain} matrices")
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        red = self.domain.reduce
        zero = self.domain.zero
        cols = other.columns()
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            out.append(tuple(red(sum((a * c[k] for k, a in nz), zero)) for c in cols))
        return Matrix(self.domain, self.nrows, other.ncols, tuple(out))

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        if len(vector) != self.ncols:
            raise ShapeError(f"vector of length {len(vector)} for {self.shape} matrix")
        red = self.domain.reduce
        zero = self.domain.zero
        return tuple(red(sum((a * v for a, v in zip(r, vector)), zero)) for r in self.rows)

    def kron(self, other: "Matrix") -> "Matrix":
        red = self.domain.reduce
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append(tuple(red(a * b) for a in r for b in s))
        return Matrix(
            self.domain, self.nrows * other.nrows, self.ncols * other.ncols, tuple(rows)
        )

    def hstack(self, *others: "Matrix") -> "Matrix":
        for o in others:
            if o.nrows != self.nrows:
                raise ShapeError(f"hstack of {self.nrows} and {o.nrows} rows")
            if o.domain != self.domain:
                raise DomainError("hstack across domains")
        rows = tuple(
            sum((o.rows[i] for o in others), self.rows[i]) for i in range(self.nrows)
        )
        return Matrix(self.domain, self.nrows, self.ncols + sum(o.ncols for o in others), rows)

    def vstack(self, *others: "Matrix") -> "Matrix":
        for o in others:
            if o.ncols != self.ncols:
                raise ShapeError(f"vstack of {self.ncols} and {o.ncols} columns")
            if o.domain != self.domain:
                raise DomainError("vstack across domains")
        rows = self.rows + sum((o.rows for o in others), ())
        return Matrix(self.domain, len(rows), self.ncols, rows)

    @classmethod
    def block_diag(cls, domain: Domain, blocks: Sequence["Matrix"]) -> "Matrix":
        nrows = sum(b.nrows for b in blocks)
        ncols = sum(b.ncols for b in blocks)
        z = domain.zero
        rows: List[Vector] = []
        offset = 0
        for b in blocks:
            left = (z,) * offset
            right = (z,) * (ncols - offset - b.ncols)
            rows.extend(left + r + right for r in b.rows)
            offset += b.ncols
        return cls(domain, nrows, ncols, tuple(rows))

    @classmethod
    def blocks(cls, domain: Domain, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every row of blocks must agree in height."""
        if not grid:
            return cls.zeros(domain, 0, 0)
        bands = []
        for band in grid:
            head, *rest = band
            bands.append(head.hstack(*rest))
        head, *rest = bands
        return head.vstack(*rest)

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.domain, len(indices), self.ncols, tuple(self.rows[i] for i in indices))

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(
            self.domain,
            self.nrows,
            len(indices),
            tuple(tuple(r[j] for j in indices) for r in self.rows),
        )

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(v) for v in r) for r in self.rows) + "]"


def hstack(domain: Domain, nrows: int, mats: Sequence[Matrix]) -> Matrix:
    """Horizontal concatenation that tolerates an empty list."""
    if not mats:
        return Matrix.zeros(domain, nrows, 0)
    head, *rest = mats
    return head.hstack(*rest)


def vstack(domain: Domain, ncols: int, mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        return Matrix.zeros(domain, 0, ncols)
    head, *rest = mats
    return head.vstack(*rest)


# ---------------------------------------------------------------------------
# Column echelon form


@dataclass(frozen=True)
class ColumnEchelon:
    """``source @ transform == form`` with the first ``rank`` columns in echelon form.

    ``pivots[k]`` is the pivot row of column k. Over a field the form is reduced
    (pivot 1, zero elsewhere in the pivot row); over ZZ pivots are positive.
    """

    source: Matrix
    form: Matrix
    transform: Matrix
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def image(self) -> Matrix:
        return self.form.select_columns(range(self.rank))  # type: ignore[arg-type]

    @property
    def kernel(self) -> Matrix:
        return self.transform.select_columns(range(self.rank, self.source.ncols))  # type: ignore[arg-type]


def column_echelon(A: Matrix) -> ColumnEchelon:
    dom = A.domain
    red = dom.reduce
    m, n = A.shape
    cols = [list(c) for c in A.columns()]
    vcols = [[dom.one if i == j else dom.zero for i in range(n)] for j in range(n)]

    def axpy(dst: int, src: int, c: Scalar) -> None:
        # column dst += c * column src
        cd, cs = cols[dst], cols[src]
        for i in range(m):
            if cs[i] != 0:
                cd[i] = red(cd[i] + c * cs[i])
        vd, vs = vcols[dst], vcols[src]
        for i in range(n):
            if vs[i] != 0:
                vd[i] = red(vd[i] + c * vs[i])

    def swap(a: int, b: int) -> None:
        cols[a], cols[b] = cols[b], cols[a]
        vcols[a], vcols[b] = vcols[b], vcols[a]

    def scale(j: int, c: Scalar) -> None:
        cols[j] = [red(c * v) for v in cols[j]]
        vcols[j] = [red(c * v) for v in vcols[j]]

    pivots: List[int] = []
    r = 0
    for row in range(m):
        if r == n:
            break
        if dom.is_field:
            cand = next((j for j in range(r, n) if cols[j][row] != 0), None)
            if cand is None:
                continue
            swap(r, cand)
            scale(r, dom.inverse(cols[r][row]))
            for j in range(n):
                if j != r and cols[j][row] != 0:
                    axpy(j, r, -cols[j][row])
        else:
            while True:
                nonzero = [j for j in range(r, n) if cols[j][row] != 0]
                if not nonzero:
                    break
                best = min(nonzero, key=lambda j: (abs(cols[j][row]), j))
                swap(r, best)
                done = True
                for j in range(r + 1, n):
                    if cols[j][row] != 0:
                        axpy(j, r, -(cols[j][row] // cols[r][row]))
                        if cols[j][row] != 0:
                            done = False
                if done:
                    break
            if cols[r][row] == 0:
                continue
            if cols[r][row] < 0:
                scale(r, -1)
        pivots.append(row)
        r += 1

    form = Matrix(dom, m, n, tuple(tuple(c[i] for c in cols) for i in range(m)))
    transform = Matrix(dom, n, n, tuple(tuple(c[i] for c in vcols) for i in range(n)))
    return ColumnEchelon(A, form, transform, tuple(pivots))


def rank_kernel_image(A: Matrix) -> Tuple[int, Matrix, Matrix]:
    """Rank, kernel basis and image basis of a matrix over a field."""
    if not A.domain.is_field:
        raise DomainError("rank_kernel_image needs a field; use smith_normal_form over ZZ")
    ech = column_echelon(A)
    return ech.rank, ech.kernel, ech.image


def rank(A: Matrix) -> int:
    return column_echelon(A).rank


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning the kernel (a lattice basis over ZZ)."""
    return column_echelon(A).kernel


def image_basis(A: Matrix) -> Matrix:
    """Columns spanning the column space (a lattice basis over ZZ)."""
    return column_echelon(A).image


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U`` and ``V`` unimodular."""

    U: Matrix
    D: Matrix
    V: Matrix

    @cached_property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(min(self.D.shape)))

    @property
    def invariants(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    if A.domain.kind != "integer":
        raise DomainError("smith_normal_form is defined over ZZ")
    dom = A.domain
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_add(dst: int, src: int, c: int) -> None:
        for M in (D, U):
            M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]

    def col_add(dst: int, src: int, c: int) -> None:
        for M in (D, V):
            for r in M:
                r[dst] += c * r[src]

    def row_swap(a: int, b: int) -> None:
        for M in (D, U):
            M[a], M[b] = M[b], M[a]

    def col_swap(a: int, b: int) -> None:
        for M in (D, V):
            for r in M:
                r[a], r[b] = r[b], r[a]

    for t in range(min(m, n)):
        while True:
            entries = [
                (abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0
            ]
            if not entries:
                break
            _, pi, pj = min(entries)
            row_swap(t, pi)
            col_swap(t, pj)
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    row_add(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    col_add(j, t, -(D[t][j] // p))
            if any(D[i][t] != 0 for i in range(t + 1, m)) or any(
                D[t][j] != 0 for j in range(t + 1, n)
            ):
                continue
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p != 0),
                None,
            )
            if offender is None:
                break
            row_add(t, offender, 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]

    def mk(rows: List[List[int]], r: int, c: int) -> Matrix:
        return Matrix(dom, r, c, tuple(tuple(row) for row in rows))

    return SmithDecomposition(mk(U, m, m), mk(D, m, n), mk(V, n, n))


# ---------------------------------------------------------------------------
# Solving


class InconsistentSystem(GorhomError):
    """A linear system has no solution; carries the certificate."""

    def __init__(self, certificate: "Inconsistency") -> None:
        super().__init__(
            f"inconsistent linear system (witness residue {certificate.residue}"
            + (f" mod {certificate.modulus})" if certificate.modulus else ")")
        )
        self.certificate = certificate


@dataclass(frozen=True)
class Solution:
    x: Vector
    consistent: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Inconsistency:
    """Left witness ``y`` with ``y.A == 0`` (mod ``modulus``) and ``y.b`` nonzero (mod ``modulus``).

    ``modulus`` is 0 for a genuine left-kernel witness.
    """

    witness: Vector
    modulus: int
    residue: Scalar
    consistent: bool = field(default=False, init=False)

    def certifies(self, A: Matrix, b: Sequence[Scalar]) -> bool:
        yA = A.T.apply(self.witness)
        yb = sum((w * v for w, v in zip(self.witness, b)), A.domain.zero)
        if self.modulus:
            return all(v % self.modulus == 0 for v in yA) and yb % self.modulus != 0
        return all(v == 0 for v in yA) and A.domain.reduce(yb) != 0


class LinearSolver:
    """Factor ``A`` once and solve ``A x = b`` for many right-hand sides."""

    def __init__(self, A: Matrix) -> None:
        self.A = A
        self.domain = A.domain
        if self.domain.is_field:
            self._echelon = column_echelon(A)
        else:
            self._smith = smith_normal_form(A)

    @cached_property
    def _left_kernel(self) -> Matrix:
        return kernel_basis(self.A.T)

    def solve(self, b: Sequence[Any]) -> Union[Solution, Inconsistency]:
        dom = self.domain
        b = tuple(dom.element(v) for v in b)
        if len(b) != self.A.nrows:
            raise ShapeError(f"right-hand side of length {len(b)} for {self.A.shape} system")
        n = self.A.ncols
        if dom.is_field:
            ech = self._echelon
            y = [dom.zero] * n
            for k, p in enumerate(ech.pivots):
                y[k] = b[p]
            x = ech.transform.apply(y)
            if self.A.apply(x) == b:
                return Solution(x)
            for w in self._left_kernel.columns():
                res = dom.reduce(sum((a * c for a, c in zip(w, b)), dom.zero))
                if res != 0:
                    return Inconsistency(w, 0, res)
            raise AssertionError("no left-kernel witness for an inconsistent system")
        snf = self._smith
        c = snf.U.apply(b)
        diag = snf.diagonal
        y = [0] * n
        for i, ci in enumerate(c):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if ci != 0:
                    return Inconsistency(snf.U.rows[i], 0, ci)
            elif ci % d != 0:
                return Inconsistency(snf.U.rows[i], d, ci)
            else:
                y[i] = ci // d
        return Solution(snf.V.apply(y))

    def solve_matrix(self, B: Matrix) -> Matrix:
        """Solve ``A X = B`` column by column; raise ``InconsistentSystem`` otherwise."""
        if B.nrows != self.A.nrows:
            raise ShapeError(f"cannot solve {self.A.shape} system against {B.shape}")
        cols = []
        for col in B.columns():
            sol = self.solve(col)
            if isinstance(sol, Inconsistency):
                raise InconsistentSystem(sol)
            cols.append(sol.x)
        return Matrix.from_columns(self.domain, cols, self.A.ncols)

    def contains(self, b: Sequence[Any]) -> bool:
        return self.solve(b).consistent


def solve_linear(A: Matrix, b: Sequence[Any]) -> Union[Solution, Inconsistency]:
    return LinearSolver(A).solve(b)


def solve_matrix(A: Matrix, B: Matrix) -> Matrix:
    return LinearSolver(A).solve_matrix(B)


def inverse(A: Matrix) -> Matrix:
    if not A.is_square():
        raise ShapeError(f"cannot invert a {A.nrows}x{A.ncols} matrix")
    return solve_matrix(A, Matrix.identity(A.domain, A.nrows))


def is_invertible(A: Matrix) -> bool:
    if not A.is_square():
        return False
    if A.domain.is_field:
        return rank(A) == A.nrows
    return smith_normal_form(A).diagonal.count(1) == A.nrows


def in_span(basis: Matrix, vectors: Matrix) -> bool:
    """Whether every column of ``vectors`` lies in the span (lattice) of ``basis``."""
    solver = LinearSolver(basis)
    return all(solver.contains(c) for c in vectors.columns())


def same_span(A: Matrix, B: Matrix) -> bool:
    return in_span(A, B) and in_span(B, A)


# ---------------------------------------------------------------------------
# Homology descriptors


@dataclass(frozen=True)
class HomologyGroup:
    """Isomorphism class of a finite-dimensional space or finitely generated abelian group."""

    domain: Domain
    rank: int
    torsion: Tuple[int, ...] = ()
    note: str = field(default="", compare=False)

    @classmethod
    def zero(cls, domain: Domain, note: str = "") -> "HomologyGroup":
        return cls(domain, 0, (), note)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def dimension(self) -> int:
        if not self.domain.is_field:
            raise DomainError("dimension is only defined over a field")
        return self.rank

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        base = "Z" if self.domain.kind == "integer" else self.domain.name
        parts = []
        if self.rank == 1:
            parts.append(base)
        elif self.rank > 1:
            parts.append(f"{base}^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.name,
            "rank": self.rank,
            "torsion": list(self.torsion),
            "text": str(self),
        }


def presented_group(domain: Domain, ngens: int, relations: Matrix) -> HomologyGroup:
    """Isomorphism class of ``domain^ngens`` modulo the column span of ``relations``."""
    if relations.nrows != ngens:
        raise ShapeError(f"relations with {relations.nrows} rows for {ngens} generators")
    if domain.is_field:
        return HomologyGroup(domain, ngens - rank(relations))
    invariants = smith_normal_form(relations).invariants
    return HomologyGroup(
        domain, ngens - len(invariants), tuple(d for d in invariants if d > 1)
    )
