"""
Exact integer linear algebra
Presented finitely generated abelian groups, homomorphisms, Smith normal form,
kernels, images and homology at a spot.

A group is Z^gens modulo the column span of its relation matrix; a
homomorphism matrix acts on column coordinates, so composition is a plain
matrix product.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    ChainComplexError, HomomorphismError, InfiniteGroupError, ParseError, ShapeError,
)
from .utils import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, ...]
SparseRow = Dict[int, int]


class IntMatrix:
    """Arbitrary-precision integer matrix stored as sparse rows.

    IntMatrix(rows, cols, entries) takes a row-major entry sequence;
    from_sparse takes one {column: value} map per row. Instances are
    treated as immutable.
    """

    def __init__(self, rows: int, cols: int, entries: Sequence[int] = ()):
        if rows < 0 or cols < 0:
            raise ShapeError(f"Negative matrix shape {rows}x{cols}")
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries cannot fill a {rows}x{cols} matrix")
        data = []
        for i in range(rows):
            start = i * cols
            data.append({j: int(v) for j, v in enumerate(entries[start:start + cols]) if v})
        self._set(rows, cols, data)

    def _set(self, rows: int, cols: int, data: Sequence[SparseRow]):
        self.rows = rows
        self.cols = cols
        self._data = tuple(data)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, data: Sequence[Dict[int, int]]) -> "IntMatrix":
        if len(data) != rows:
            raise ShapeError(f"{len(data)} sparse rows for a matrix with {rows} rows")
        clean = []
        for r in data:
            row = {j: int(v) for j, v in r.items() if v}
            if row and (min(row) < 0 or max(row) >= cols):
                raise ShapeError(f"Sparse entry outside {cols} columns")
            clean.append(row)
        m = cls.__new__(cls)
        m._set(rows, cols, clean)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError(f"Ragged row of length {len(r)}, expected {cols}")
        return cls.from_sparse(len(rows), cols, [dict(enumerate(r)) for r in rows])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        data = [{} for _ in range(rows)]
        for j, c in enumerate(columns):
            if len(c) != rows:
                raise ShapeError(f"Column of length {len(c)}, expected {rows}")
            for i, v in enumerate(c):
                if v:
                    data[i][j] = v
        return cls.from_sparse(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_sparse(rows, cols, [{} for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c: int) -> "IntMatrix":
        return cls.from_sparse(n, n, [{i: c} for i in range(n)])

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        data = []
        c0 = 0
        for b in blocks:
            for r in b._data:
                data.append({c0 + j: v for j, v in r.items()})
            c0 += b.cols
        return cls.from_sparse(len(data), c0, data)

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(v for i in range(self.rows) for v in self.row(i))

    def __getitem__(self, idx: Tuple[int, int]) -> int:
        i, j = idx
        return self._data[i].get(j, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {self.entries!r})"

    def sparse_rows(self) -> Tuple[SparseRow, ...]:
        return self._data

    @cached_property
    def _sparse_columns(self) -> Tuple[SparseRow, ...]:
        cols = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                cols[j][i] = v
        return tuple(cols)

    def sparse_columns(self) -> Tuple[SparseRow, ...]:
        return self._sparse_columns

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def row(self, i: int) -> Vector:
        r = self._data[i]
        return tuple(r.get(j, 0) for j in range(self.cols))

    def column(self, j: int) -> Vector:
        c = self._sparse_columns[j]
        return tuple(c.get(i, 0) for i in range(self.rows))

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        right = other._data
        out = []
        for srow in self._data:
            acc: SparseRow = {}
            for k, a in srow.items():
                for j, b in right[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append(acc)
        return IntMatrix.from_sparse(self.rows, other.cols, out)

    def apply(self, vector: Sequence[int]) -> Vector:
        if len(vector) != self.cols:
            raise ShapeError(f"Vector of length {len(vector)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * vector[j] for j, a in srow.items()) for srow in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("Cannot add matrices of different shapes")
        out = []
        for a, b in zip(self._data, other._data):
            row = dict(a)
            for j, v in b.items():
                row[j] = row.get(j, 0) + v
            out.append(row)
        return IntMatrix.from_sparse(self.rows, self.cols, out)

    def __neg__(self) -> "IntMatrix":
        return -1 * self

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __rmul__(self, c: int) -> "IntMatrix":
        return IntMatrix.from_sparse(
            self.rows, self.cols, [{j: c * v for j, v in r.items()} for r in self._data]
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_sparse(self.cols, self.rows, self._sparse_columns)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ShapeError("hstack needs equal row counts")
        shift = self.cols
        out = []
        for a, b in zip(self._data, other._data):
            row = dict(a)
            row.update((shift + j, v) for j, v in b.items())
            out.append(row)
        return IntMatrix.from_sparse(self.rows, self.cols + other.cols, out)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ShapeError("vstack needs equal column counts")
        return IntMatrix.from_sparse(self.rows + other.rows, self.cols, self._data + other._data)

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        indices = list(indices)
        return IntMatrix.from_sparse(len(indices), self.cols, [self._data[i] for i in indices])

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        indices = list(indices)
        where: Dict[int, List[int]] = {}
        for k, j in enumerate(indices):
            if not 0 <= j < self.cols:
                raise ShapeError(f"Column {j} outside a matrix with {self.cols} columns")
            where.setdefault(j, []).append(k)
        out = []
        for r in self._data:
            row = {}
            for j, v in r.items():
                for k in where.get(j, ()):
                    row[k] = v
            out.append(row)
        return IntMatrix.from_sparse(self.rows, len(indices), out)

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_diagonal(self) -> bool:
        return all(j == i for i, r in enumerate(self._data) for j in r)

    def is_monomial(self) -> bool:
        """At most one nonzero entry in every row and every column"""
        return all(len(r) <= 1 for r in self._data) and all(len(c) <= 1 for c in self._sparse_columns)

    def determinant(self) -> int:
        """Fraction-free (Bareiss) determinant of a square matrix"""
        if self.rows != self.cols:
            raise ShapeError("Determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithForm:
    """U·M·V = D with D diagonal, d_i >= 0 and d_i | d_(i+1)"""
    diagonal: Tuple[int, ...]
    shape: Tuple[int, int]
    u: Optional[IntMatrix] = None
    u_inv: Optional[IntMatrix] = None
    v: Optional[IntMatrix] = None
    v_inv: Optional[IntMatrix] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def d(self) -> IntMatrix:
        m, n = self.shape
        return IntMatrix.from_sparse(m, n, [{i: self.diagonal[i]} if i < self.rank else {} for i in range(m)])


class _SmithReduction:
    """In-place diagonalisation with optional tracking of both transforms and inverses"""

    def __init__(self, matrix: IntMatrix, transforms: bool):
        self.m, self.n = matrix.rows, matrix.cols
        self.a = matrix.to_rows()
        self.track = transforms
        if transforms:
            self.u = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.u_inv = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.v = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
            self.v_inv = [[int(i == j) for j in range(self.n)] for i in range(self.n)]

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        if self.track:
            self.u[i], self.u[j] = self.u[j], self.u[i]
            for r in self.u_inv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        if self.track:
            for r in self.v:
                r[i], r[j] = r[j], r[i]
            self.v_inv[i], self.v_inv[j] = self.v_inv[j], self.v_inv[i]

    def add_row(self, target: int, source: int, q: int):
        """row_target += q * row_source"""
        a = self.a
        src = a[source]
        a[target] = [x + q * y for x, y in zip(a[target], src)]
        if self.track:
            self.u[target] = [x + q * y for x, y in zip(self.u[target], self.u[source])]
            for r in self.u_inv:
                r[source] -= q * r[target]

    def add_col(self, target: int, source: int, q: int):
        """col_target += q * col_source"""
        for r in self.a:
            if r[source]:
                r[target] += q * r[source]
        if self.track:
            for r in self.v:
                r[target] += q * r[source]
            vi = self.v_inv
            vi[source] = [x - q * y for x, y in zip(vi[source], vi[target])]

    def negate_row(self, i: int):
        self.a[i] = [-x for x in self.a[i]]
        if self.track:
            self.u[i] = [-x for x in self.u[i]]
            for r in self.u_inv:
                r[i] = -r[i]

    def _smallest(self, t: int) -> Optional[Tuple[int, int]]:
        best, where = 0, None
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                v = row[j]
                if v and (where is None or abs(v) < best):
                    best, where = abs(v), (i, j)
                    if best == 1:
                        return where
        return where

    def _clear_cross(self, t: int) -> bool:
        """Reduce row t and column t modulo the pivot; True when both are clear"""
        a = self.a
        p = a[t][t]
        clear = True
        for i in range(t + 1, self.m):
            if a[i][t]:
                q = a[i][t] // p
                if q:
                    self.add_row(i, t, -q)
                if a[i][t]:
                    clear = False
        row_t = a[t]
        for j in range(t + 1, self.n):
            if row_t[j]:
                q = row_t[j] // p
                if q:
                    self.add_col(j, t, -q)
                if row_t[j]:
                    clear = False
        return clear

    def _repivot(self, t: int):
        a = self.a
        best, where = abs(a[t][t]), None
        for i in range(t + 1, self.m):
            if a[i][t] and abs(a[i][t]) < best:
                best, where = abs(a[i][t]), ("row", i)
        for j in range(t + 1, self.n):
            if a[t][j] and abs(a[t][j]) < best:
                best, where = abs(a[t][j]), ("col", j)
        if where is not None:
            kind, k = where
            if kind == "row":
                self.swap_rows(t, k)
            else:
                self.swap_cols(t, k)

    def _non_divisible(self, t: int) -> Optional[int]:
        p = self.a[t][t]
        if abs(p) == 1:
            return None
        for i in range(t + 1, self.m):
            row = self.a[i]
            for j in range(t + 1, self.n):
                if row[j] % p:
                    return i
        return None

    def run(self) -> SmithForm:
        t = 0
        while t < min(self.m, self.n):
            pivot = self._smallest(t)
            if pivot is None:
                break
            self.swap_rows(t, pivot[0])
            self.swap_cols(t, pivot[1])
            while True:
                if not self._clear_cross(t):
                    self._repivot(t)
                    continue
                bad = self._non_divisible(t)
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if self.a[t][t] < 0:
                self.negate_row(t)
            t += 1

        diagonal = tuple(self.a[i][i] for i in range(t))
        if not self.track:
            return SmithForm(diagonal, (self.m, self.n))
        return SmithForm(
            diagonal, (self.m, self.n),
            u=IntMatrix.from_rows(self.u, self.m),
            u_inv=IntMatrix.from_rows(self.u_inv, self.m),
            v=IntMatrix.from_rows(self.v, self.n),
            v_inv=IntMatrix.from_rows(self.v_inv, self.n),
        )


def _monomial_smith(matrix: IntMatrix, transforms: bool) -> Optional[SmithForm]:
    """Smith form of a monomial matrix whose sorted moduli already divide each other"""
    pivots = sorted(
        ((abs(v), i, j, v) for i, r in enumerate(matrix.sparse_rows()) for j, v in r.items()),
        key=lambda p: p[0],
    )
    diagonal = tuple(p[0] for p in pivots)
    if any(b % a for a, b in zip(diagonal, diagonal[1:])):
        return None
    m, n = matrix.rows, matrix.cols
    if not transforms:
        return SmithForm(diagonal, (m, n))
    used_rows = {p[1] for p in pivots}
    used_cols = {p[2] for p in pivots}
    row_order = [(p[1], 1 if p[3] > 0 else -1) for p in pivots]
    row_order += [(i, 1) for i in range(m) if i not in used_rows]
    col_order = [p[2] for p in pivots] + [j for j in range(n) if j not in used_cols]
    u = IntMatrix.from_sparse(m, m, [{i: s} for i, s in row_order])
    v_rows = [{} for _ in range(n)]
    for k, j in enumerate(col_order):
        v_rows[j][k] = 1
    v = IntMatrix.from_sparse(n, n, v_rows)
    return SmithForm(diagonal, (m, n), u=u, u_inv=u.transpose(), v=v, v_inv=v.transpose())


def smith_form(matrix: IntMatrix, transforms: bool = True) -> SmithForm:
    if matrix.is_monomial():
        form = _monomial_smith(matrix, transforms)
        if form is not None:
            return form
    return _SmithReduction(matrix, transforms).run()


def snf(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with U·M·V = D"""
    form = smith_form(matrix)
    return form.u, form.d, form.v


def _divide_out(form: SmithForm, w: Sequence[int]) -> Optional[Vector]:
    """Solve D·z = w, or None when w is not in the column span of D"""
    z = [0] * form.shape[1]
    for i, wi in enumerate(w):
        if i < form.rank:
            q, r = divmod(wi, form.diagonal[i])
            if r:
                return None
            z[i] = q
        elif wi:
            return None
    return tuple(z)


def solve_integer(form: SmithForm, vector: Sequence[int]) -> Optional[Vector]:
    """Some integer y with M·y = vector, given the Smith form of M, or None"""
    z = _divide_out(form, form.u.apply(vector))
    if z is None:
        return None
    return form.v.apply(z)


def integer_kernel(matrix: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : M·x = 0}"""
    form = smith_form(matrix)
    return form.v.select_columns(range(form.rank, matrix.cols))


def column_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the column span of M"""
    form = smith_form(matrix)
    cols = [
        tuple(form.diagonal[k] * x for x in form.u_inv.column(k))
        for k in range(form.rank)
    ]
    return IntMatrix.from_columns(cols, matrix.rows)


@dataclass(frozen=True)
class FgAbGroup:
    """Z^gens modulo the column span of rels (gens x r, columns are relators)"""
    gens: int
    rels: IntMatrix

    def __post_init__(self):
        if self.rels.rows != self.gens:
            raise ShapeError(f"Relation matrix has {self.rels.rows} rows for {self.gens} generators")

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls.free(0)

    @classmethod
    def cyclic(cls, order: int) -> "FgAbGroup":
        """Z/order, with Z for order 0"""
        if order == 0:
            return cls.free(1)
        return cls(1, IntMatrix(1, 1, (abs(order),)))

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FgAbGroup":
        """Direct sum of Z/d over the given orders (0 gives Z, 1 is dropped)"""
        orders = [abs(d) for d in orders if abs(d) != 1]
        n = len(orders)
        cols = [tuple(d if i == k else 0 for i in range(n)) for k, d in enumerate(orders) if d]
        return cls(n, IntMatrix.from_columns(cols, n))

    @classmethod
    def from_relator_columns(cls, gens: int, columns: Sequence[Sequence[int]]) -> "FgAbGroup":
        return cls(gens, IntMatrix.from_columns(columns, gens))

    @cached_property
    def smith(self) -> SmithForm:
        return smith_form(self.rels)

    @cached_property
    def invariants(self) -> Tuple[int, Tuple[int, ...]]:
        d = self.smith.diagonal
        return self.gens - len(d), tuple(x for x in d if x != 1)

    @property
    def free_rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> Tuple[int, ...]:
        return self.invariants[1]

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int:
        if not self.is_finite():
            raise InfiniteGroupError(f"{self} is infinite")
        return prod(self.torsion)

    def zero(self) -> Vector:
        return (0,) * self.gens

    def normal_form(self, vector: Sequence[int]) -> Vector:
        """Canonical coordinates: equal exactly when the elements are equal"""
        if len(vector) != self.gens:
            raise ShapeError(f"Element of length {len(vector)} in a group on {self.gens} generators")
        form = self.smith
        w = form.u.apply(vector)
        return tuple(
            wi % form.diagonal[i] if i < form.rank else wi
            for i, wi in enumerate(w)
        )

    def from_normal_form(self, coords: Sequence[int]) -> Vector:
        return self.smith.u_inv.apply(coords)

    def canonical(self, vector: Sequence[int]) -> Vector:
        """A fixed representative of the class of vector"""
        return self.from_normal_form(self.normal_form(vector))

    def contains_relation(self, vector: Sequence[int]) -> bool:
        """True when vector is zero in the group"""
        return not any(self.normal_form(vector))

    def solve_relation(self, vector: Sequence[int]) -> Optional[Vector]:
        """y with rels·y = vector, or None"""
        return solve_integer(self.smith, vector)

    def equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.contains_relation(tuple(x - y for x, y in zip(a, b)))

    def __str__(self) -> str:
        return format_group(self)


def invariant_factors(group: FgAbGroup) -> Tuple[int, List[int]]:
    free, torsion = group.invariants
    return free, list(torsion)


def format_invariants(free_rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


def format_group(group: FgAbGroup) -> str:
    return format_invariants(*group.invariants)


_SUMMAND = re.compile(r"^(?:\(?Z(?:/(\d+))?\)?)(?:\^(\d+))?$")


def parse_group(text: str) -> FgAbGroup:
    """Parse `0`, `Z`, `Z^2`, `Z/3`, `(Z/2)^3` and sums joined by `+`"""
    text = text.strip()
    if text in ("0", "trivial"):
        return FgAbGroup.trivial()
    orders: List[int] = []
    for summand in text.split("+"):
        match = _SUMMAND.match(summand.replace(" ", ""))
        if not match:
            raise ParseError(f"Couldn't parse group summand {summand.strip()!r}")
        order = int(match.group(1)) if match.group(1) else 0
        count = int(match.group(2)) if match.group(2) else 1
        if match.group(1) and order < 1:
            raise ParseError(f"Cyclic order must be positive in {summand.strip()!r}")
        orders.extend([order] * count)
    return FgAbGroup.from_cyclic_orders(orders)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism source -> target given by a target.gens x source.gens matrix"""
    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.gens, self.source.gens):
            raise ShapeError(
                f"Hom matrix is {self.matrix.rows}x{self.matrix.cols}, "
                f"expected {self.target.gens}x{self.source.gens}"
            )

    @classmethod
    def identity(cls, group: FgAbGroup) -> "GroupHom":
        return cls(group, group, IntMatrix.identity(group.gens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.gens, source.gens))

    @classmethod
    def scalar(cls, group: FgAbGroup, c: int) -> "GroupHom":
        return cls(group, group, IntMatrix.scalar(group.gens, c))

    def __call__(self, vector: Sequence[int]) -> Vector:
        return self.matrix.apply(vector)


@dataclass(frozen=True)
class HomCheck:
    """Outcome of check_hom"""
    ok: bool
    certificate: Optional[IntMatrix] = None
    failed_relator: Optional[int] = None


def check_hom(f: GroupHom) -> HomCheck:
    """Find U with matrix·source.rels = target.rels·U, or the first failing relator column"""
    images = f.matrix @ f.source.rels
    columns = []
    for k in range(images.cols):
        y = f.target.solve_relation(images.column(k))
        if y is None:
            logger.debug(f"Relator {k} of the source is not sent into the target relations")
            return HomCheck(False, failed_relator=k)
        columns.append(y)
    return HomCheck(True, certificate=IntMatrix.from_columns(columns, f.target.rels.cols))


def make_hom(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> GroupHom:
    """Build a hom and insist it is well defined"""
    f = GroupHom(source, target, matrix)
    result = check_hom(f)
    if not result.ok:
        raise HomomorphismError(
            f"Matrix does not respect source relator {result.failed_relator}",
            relator=result.failed_relator,
        )
    return f


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """g ∘ f"""
    if f.target != g.source:
        raise ShapeError("compose: target of the inner map differs from source of the outer map")
    return GroupHom(f.source, g.target, g.matrix @ f.matrix)


def add(f: GroupHom, g: GroupHom) -> GroupHom:
    if f.source != g.source or f.target != g.target:
        raise ShapeError("add: homomorphisms have different endpoints")
    return GroupHom(f.source, f.target, f.matrix + g.matrix)


def negate(f: GroupHom) -> GroupHom:
    return GroupHom(f.source, f.target, -f.matrix)


def is_zero_hom(f: GroupHom) -> bool:
    columns = f.matrix.sparse_columns()
    return all(not columns[j] or f.target.contains_relation(f.matrix.column(j)) for j in range(f.matrix.cols))


def homs_equal(f: GroupHom, g: GroupHom) -> bool:
    """Equality modulo target relations"""
    if f.source != g.source or f.target != g.target:
        return False
    return is_zero_hom(add(f, negate(g)))


def hom_key(f: GroupHom) -> Tuple[Vector, ...]:
    """Hashable canonical form of a hom (normal forms of the generator images)"""
    return tuple(f.target.normal_form(f.matrix.column(j)) for j in range(f.matrix.cols))


class DirectSum(NamedTuple):
    group: FgAbGroup
    injections: List[GroupHom]
    projections: List[GroupHom]


def direct_sum_group(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    """The sum group alone, with block-diagonal relations"""
    return FgAbGroup(
        sum(g.gens for g in groups),
        IntMatrix.block_diagonal([g.rels for g in groups]),
    )


def direct_sum(groups: Sequence[FgAbGroup]) -> DirectSum:
    total = direct_sum_group(groups)
    injections, projections = [], []
    offset = 0
    for g in groups:
        inj = [{} for _ in range(total.gens)]
        for j in range(g.gens):
            inj[offset + j][j] = 1
        injections.append(GroupHom(g, total, IntMatrix.from_sparse(total.gens, g.gens, inj)))
        proj = [{offset + i: 1} for i in range(g.gens)]
        projections.append(GroupHom(total, g, IntMatrix.from_sparse(g.gens, total.gens, proj)))
        offset += g.gens
    return DirectSum(total, injections, projections)


@dataclass(frozen=True)
class Subquotient:
    """L/K inside an ambient presented group, reduced to invariant-factor form.

    representatives[:, k] is an ambient vector for generator k of group;
    coordinates() maps ambient vectors lying in L to group coordinates.
    """
    group: FgAbGroup
    ambient: FgAbGroup
    representatives: IntMatrix
    lattice: IntMatrix
    lattice_form: SmithForm
    change: IntMatrix
    moduli: Tuple[int, ...]

    def coordinates(self, vector: Sequence[int]) -> Vector:
        y = solve_integer(self.lattice_form, vector)
        if y is None:
            raise HomomorphismError("Vector does not lie in the subquotient's lattice")
        w = self.change.apply(y)
        return tuple(wi % m if m else wi for wi, m in zip(w, self.moduli))


def subquotient(ambient: FgAbGroup, lattice_gens: IntMatrix, killed: IntMatrix) -> Subquotient:
    """L/K where L is spanned by lattice_gens and K ⊆ L by killed (both as columns)"""
    basis = column_basis(lattice_gens)
    basis_form = smith_form(basis)
    coords = []
    for k in range(killed.cols):
        y = solve_integer(basis_form, killed.column(k))
        if y is None:
            raise ChainComplexError(f"Killed column {k} does not lie in the lattice")
        coords.append(y)
    r = basis.cols
    y_matrix = IntMatrix.from_columns(coords, r)
    y_form = smith_form(y_matrix)
    keep = [i for i in range(r) if i >= y_form.rank or y_form.diagonal[i] != 1]
    moduli = tuple(y_form.diagonal[i] if i < y_form.rank else 0 for i in keep)
    group = FgAbGroup.from_cyclic_orders(moduli)
    change = y_form.u.select_rows(keep)
    reps = basis @ y_form.u_inv.select_columns(keep)
    return Subquotient(group, ambient, reps, basis, basis_form, change, moduli)


def preimage_lattice(f: GroupHom) -> IntMatrix:
    """Columns spanning {x : f(x) = 0 in target}"""
    b = f.source.gens
    stacked = f.matrix.hstack(f.target.rels)
    kernel = integer_kernel(stacked)
    return kernel.select_rows(range(b))


def _check_composable(f: GroupHom, g: GroupHom):
    if f.target != g.source:
        raise ShapeError("homology_at: f.target differs from g.source")
    if not is_zero_hom(compose(g, f)):
        raise ChainComplexError("homology_at: composite g∘f is not zero")


def homology_subquotient(f: GroupHom, g: GroupHom) -> Subquotient:
    _check_composable(f, g)
    b = f.target
    return subquotient(b, preimage_lattice(g), f.matrix.hstack(b.rels))


def homology_at(f: GroupHom, g: GroupHom) -> FgAbGroup:
    """ker g / im f for A --f--> B --g--> C"""
    return homology_subquotient(f, g).group


def kernel(f: GroupHom) -> Subquotient:
    return homology_subquotient(GroupHom.zero(FgAbGroup.trivial(), f.source), f)


def image(f: GroupHom) -> FgAbGroup:
    """im f, presented as source / ker f"""
    a = f.source.gens
    free = FgAbGroup.free(a)
    return subquotient(free, IntMatrix.identity(a), preimage_lattice(f)).group


def cokernel(f: GroupHom) -> Subquotient:
    b = f.target
    return subquotient(b, IntMatrix.identity(b.gens), f.matrix.hstack(b.rels))


def is_iso(f: GroupHom) -> bool:
    return kernel(f).group.is_trivial() and cokernel(f).group.is_trivial()


def invert_iso(f: GroupHom) -> GroupHom:
    """Inverse of an isomorphism, solving f(x) = e_j modulo target relations"""
    if not is_iso(f):
        raise HomomorphismError("invert_iso: map is not an isomorphism")
    a = f.source.gens
    form = smith_form(f.matrix.hstack(f.target.rels))
    columns = []
    for j in range(f.target.gens):
        e = tuple(int(i == j) for i in range(f.target.gens))
        sol = solve_integer(form, e)
        columns.append(f.source.canonical(sol[:a]))
    return GroupHom(f.target, f.source, IntMatrix.from_columns(columns, a))


def induced_hom(source: Subquotient, target: Subquotient, matrix: IntMatrix) -> GroupHom:
    """The map between subquotients induced by an ambient matrix"""
    columns = [
        target.coordinates(matrix.apply(source.representatives.column(k)))
        for k in range(source.group.gens)
    ]
    return GroupHom(source.group, target.group, IntMatrix.from_columns(columns, target.group.gens))


def enumerate_elements(group: FgAbGroup) -> List[Vector]:
    """All elements of a finite group, one representative each"""
    if not group.is_finite():
        raise InfiniteGroupError(f"Cannot enumerate the infinite group {group}")
    ranges = [range(d) for d in group.smith.diagonal]
    return [group.from_normal_form(c) for c in product(*ranges)]


def enumerate_homs(source: FgAbGroup, target: FgAbGroup) -> List[GroupHom]:
    """All homomorphisms source -> target (target finite), duplicate free"""
    if not target.is_finite():
        raise InfiniteGroupError(f"Cannot enumerate homs into the infinite group {target}")
    form = source.smith
    elements = enumerate_elements(target)
    choices = []
    for i in range(source.gens):
        d = form.diagonal[i] if i < form.rank else 0
        if d == 1:
            choices.append([target.zero()])
        elif d == 0:
            choices.append(elements)
        else:
            choices.append([e for e in elements if target.contains_relation(tuple(d * x for x in e))])
    homs = []
    u = form.u
    for images in product(*choices):
        cols = []
        for j in range(source.gens):
            v = [0] * target.gens
            for i, b in enumerate(images):
                c = u[i, j]
                if c:
                    for k in range(target.gens):
                        v[k] += c * b[k]
            cols.append(target.canonical(v))
        homs.append(GroupHom(source, target, IntMatrix.from_columns(cols, target.gens)))
    return homs


def hom_count(source: FgAbGroup, target: FgAbGroup) -> int:
    """|Hom(source, target)| from invariant factors, target finite"""
    t_free, t_torsion = target.invariants
    if t_free:
        raise InfiniteGroupError("hom_count needs a finite target")
    s_free, s_torsion = source.invariants
    count = prod(t_torsion) ** s_free
    for a in s_torsion:
        for b in t_torsion:
            count *= gcd(a, b)
    return count


def elementary_divisors(group: FgAbGroup) -> List[int]:
    """Prime-power decomposition of the torsion part"""
    from sympy import factorint

    result = []
    for d in group.torsion:
        result.extend(int(p) ** int(e) for p, e in factorint(d).items())
    return sorted(result)
