"""Exact scalars and dense matrices.

Every rank, kernel and base-change computation in the package goes through
this module.  Two fields are supported: arbitrary-precision rationals
(``fractions.Fraction``, the default) and prime fields ``F_p`` whose elements
are stored as Python ints in ``[0, p)``.  The active field is a process-wide
setting; matrices remember the field they were built in and refuse to mix.
"""
from __future__ import annotations

import contextlib
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence


class Field:
    """Abstract ground field.  Subclasses fix ``convert`` and ``inv``."""

    name = "abstract"

    def convert(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, x):
        return x

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)


class RationalField(Field):
    name = "rational"

    def convert(self, x):
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def to_json(self, x):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def from_json(self, x):
        return Fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"

    def convert(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return self.convert(Fraction(x))
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def to_json(self, x):
        return int(x)

    def from_json(self, x):
        return self.convert(x)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()
_active: Field = QQ


def get_field() -> Field:
    return _active


def set_field(field: Field | str) -> Field:
    """Select the active field; accepts a Field or 'rational' / 'fp:<p>'."""
    global _active
    _active = parse_field(field)
    return _active


def parse_field(name: Field | str) -> Field:
    if isinstance(name, Field):
        return name
    if name in ("rational", "QQ", "Q"):
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise ValueError(f"unknown field {name!r}; expected 'rational' or 'fp:<p>'")


@contextlib.contextmanager
def use_field(field: Field | str) -> Iterator[Field]:
    global _active
    old = _active
    _active = parse_field(field)
    try:
        yield _active
    finally:
        _active = old


class Matrix:
    """Immutable dense matrix over the field active at construction time."""

    __slots__ = ("rows", "cols", "_data", "field")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None, field: Field | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.field = field or _active
        self.rows = rows
        self.cols = cols
        conv = self.field.convert
        if data is None:
            z = self.field.zero
            self._data = tuple(tuple(z for _ in range(cols)) for _ in range(rows))
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entry grid does not match shape {rows}x{cols}")
            self._data = tuple(tuple(conv(v) for v in r) for r in data)

    @classmethod
    def _raw(cls, rows, cols, data, field):
        m = cls.__new__(cls)
        m.rows, m.cols, m._data, m.field = rows, cols, data, field
        return m

    # constructors
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = list(columns)
        return cls(rows, len(cols), [[c[i] for c in cols] for i in range(rows)])

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "Matrix":
        f = _active
        z = f.zero
        grid = [[z] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            grid[i][j] = f.convert(v)
        return cls._raw(rows, cols, tuple(tuple(r) for r in grid), f)

    # access
    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[[str(v) for v in r] for r in self._data]})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._data for v in r)

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    # arithmetic
    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        red = self.field.reduce
        data = tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return Matrix._raw(self.rows, self.cols, data, self.field)

    def __neg__(self) -> "Matrix":
        red = self.field.reduce
        data = tuple(tuple(red(-a) for a in r) for r in self._data)
        return Matrix._raw(self.rows, self.cols, data, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field.convert(c)
        red = self.field.reduce
        data = tuple(tuple(red(c * a) for a in r) for r in self._data)
        return Matrix._raw(self.rows, self.cols, data, self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        red = self.field.reduce
        z = self.field.zero
        ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            if not nz:
                out.append(tuple(z for _ in range(other.cols)))
                continue
            out.append(tuple(red(sum((a * c[k] for k, a in nz), z)) for c in ocols))
        return Matrix._raw(self.rows, other.cols, tuple(out), self.field)

    def transpose(self) -> "Matrix":
        data = tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols))
        return Matrix._raw(self.cols, self.rows, tuple(tuple(r) for r in data), self.field)

    T = property(transpose)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        data = tuple(a + b for a, b in zip(self._data, other._data))
        return Matrix._raw(self.rows, self.cols + other.cols, data, self.field)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return Matrix._raw(self.rows + other.rows, self.cols, self._data + other._data, self.field)

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix._raw(len(idx), self.cols, tuple(self._data[i] for i in idx), self.field)

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        data = tuple(tuple(r[j] for j in idx) for r in self._data)
        return Matrix._raw(self.rows, len(idx), data, self.field)

    def to_json(self) -> list:
        enc = self.field.to_json
        return [[enc(v) for v in r] for r in self._data]

    @classmethod
    def from_json(cls, rows: list, cols: Optional[int] = None) -> "Matrix":
        dec = _active.from_json
        return cls.from_rows([[dec(v) for v in r] for r in rows], cols)


def block_matrix(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix from a grid of compatible blocks."""
    out = None
    for brow in blocks:
        line = brow[0]
        for b in brow[1:]:
            line = line.hstack(b)
        out = line if out is None else out.vstack(line)
    return out


def direct_sum(*ms: Matrix) -> Matrix:
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    entries = {}
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                if m[i, j] != 0:
                    entries[(r0 + i, c0 + j)] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return Matrix.from_sparse(rows, cols, entries)


# ---------------------------------------------------------------------------
# elimination

def _sparse_rows(m: Matrix) -> list:
    return [{j: v for j, v in enumerate(r) if v != 0} for r in m._data]


def _eliminate(rows: list, ncols: int, field: Field, track: Optional[list] = None):
    """In-place Gauss-Jordan on sparse rows.

    Pivot search is deterministic: columns left to right, and within a column
    the first remaining row (top to bottom) with a nonzero entry.  When
    ``track`` is given it holds sparse rows of the transform and receives the
    same row operations.  Returns the pivot columns; rows are permuted so the
    pivot rows come first in order.
    """
    red = field.reduce
    inv = field.inv
    pivots = []
    r = 0
    nrows = len(rows)
    # column index -> set of row indices with a nonzero there, kept lazily
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i].get(c, 0) != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if track is not None:
                track[r], track[piv] = track[piv], track[r]
        prow = rows[r]
        s = inv(prow[c])
        if s != 1:
            for k in prow:
                prow[k] = red(prow[k] * s)
            if track is not None:
                trow = track[r]
                for k in trow:
                    trow[k] = red(trow[k] * s)
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            a = row.get(c, 0)
            if a == 0:
                continue
            for k, v in prow.items():
                nv = red(row.get(k, 0) - a * v)
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
            if track is not None:
                trow, tp = track[i], track[r]
                for k, v in tp.items():
                    nv = red(trow.get(k, 0) - a * v)
                    if nv == 0:
                        trow.pop(k, None)
                    else:
                        trow[k] = nv
        pivots.append(c)
        r += 1
    return pivots


def _dense(rows: list, ncols: int, field: Field) -> Matrix:
    z = field.zero
    data = tuple(tuple(r.get(j, z) for j in range(ncols)) for r in rows)
    return Matrix._raw(len(rows), ncols, data, field)


def rref(m: Matrix) -> tuple:
    """Reduced row-echelon form.

    Returns ``(reduced, pivot_columns, transform)`` with
    ``transform @ m == reduced``.
    """
    rows = _sparse_rows(m)
    one = m.field.one
    track = [{i: one} for i in range(m.rows)]
    piv = _eliminate(rows, m.cols, m.field, track)
    return _dense(rows, m.cols, m.field), piv, _dense(track, m.rows, m.field)


def pivot_columns(m: Matrix) -> list:
    return _eliminate(_sparse_rows(m), m.cols, m.field)


def rank(m: Matrix) -> int:
    return len(pivot_columns(m))


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of the null space of ``m``."""
    rows = _sparse_rows(m)
    piv = _eliminate(rows, m.cols, m.field)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    f = m.field
    cols = []
    for fj in free:
        vec = {fj: f.one}
        for r, pc in enumerate(piv):
            a = rows[r].get(fj, 0)
            if a != 0:
                vec[pc] = f.reduce(-a)
        cols.append(vec)
    z = f.zero
    data = tuple(tuple(c.get(i, z) for c in cols) for i in range(m.cols))
    return Matrix._raw(m.cols, len(cols), data, f)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """A particular solution ``x`` of ``a @ x == b``, or None if inconsistent."""
    if a.rows != b.rows:
        raise ValueError(f"solve: row mismatch {a.shape} vs {b.shape}")
    a._check(b)
    aug = a.hstack(b)
    rows = _sparse_rows(aug)
    piv = _eliminate(rows, aug.cols, a.field)
    if any(p >= a.cols for p in piv):
        return None
    f = a.field
    z = f.zero
    sol = [[z] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(piv):
        row = rows[r]
        for j in range(b.cols):
            sol[pc][j] = row.get(a.cols + j, z)
    return Matrix._raw(a.cols, b.cols, tuple(tuple(s) for s in sol), f)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, Matrix.identity(m.rows))
    if x is None or rank(m) != m.rows:
        raise ZeroDivisionError("matrix is singular")
    return x


def column_space(m: Matrix) -> Matrix:
    """Basis (as columns) of the image, taken from the pivot columns of m."""
    return m.select_columns(pivot_columns(m))


def complement_columns(basis: Matrix) -> Matrix:
    """Standard unit vectors completing the columns of ``basis`` to a basis."""
    n = basis.rows
    # pivot columns of basis^T are the coordinates the span already controls
    piv = set(pivot_columns(basis.transpose())) if basis.cols else set()
    extra = [i for i in range(n) if i not in piv]
    f = basis.field
    z, one = f.zero, f.one
    data = tuple(tuple(one if i == e else z for e in extra) for i in range(n))
    return Matrix._raw(n, len(extra), data, f)


def coordinates(basis: Matrix, vectors: Matrix) -> Matrix:
    """Coordinates of ``vectors`` (columns) in the column basis ``basis``."""
    x = solve(basis, vectors)
    if x is None:
        raise ValueError("vectors are not in the span of the basis")
    return x
