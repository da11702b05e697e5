"""Exact sparse linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Vectors and matrices are stored as coordinate maps
with no zero entries, which suits chain-complex differentials: a column of
a Chevalley-Eilenberg differential has only a handful of nonzeros.

Elimination is plain Gaussian elimination; the pivot in each column is the
candidate entry with the smallest combined numerator/denominator bit length,
ties broken by row order, so results are deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Rat = Fraction


def as_rat(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or a ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _bitlen(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


class QVector:
    """Sparse rational vector, a map ``index -> nonzero Fraction``."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict[int, Fraction] = {}
        for i, c in items:
            if i < 0:
                raise IndexError(f"negative coordinate {i}")
            c = as_rat(c)
            if c:
                clean[i] = clean.get(i, Fraction(0)) + c
                if not clean[i]:
                    del clean[i]
        self._entries = clean

    @classmethod
    def _trusted(cls, entries: dict[int, Fraction]) -> "QVector":
        v = cls.__new__(cls)
        v._entries = entries
        return v

    @classmethod
    def unit(cls, i: int, c=1) -> "QVector":
        return cls({i: c})

    @classmethod
    def from_dense(cls, values: Iterable[object]) -> "QVector":
        return cls(enumerate(values))

    @property
    def entries(self) -> dict[int, Fraction]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def support(self) -> list[int]:
        return sorted(self._entries)

    def __getitem__(self, i: int) -> Fraction:
        return self._entries.get(i, Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, QVector):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __add__(self, other: "QVector") -> "QVector":
        out = dict(self._entries)
        for i, c in other._entries.items():
            s = out.get(i, 0) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return QVector._trusted(out)

    def __neg__(self) -> "QVector":
        return QVector._trusted({i: -c for i, c in self._entries.items()})

    def __sub__(self, other: "QVector") -> "QVector":
        return self + (-other)

    def scale(self, c) -> "QVector":
        c = as_rat(c)
        if not c:
            return QVector()
        return QVector._trusted({i: c * x for i, x in self._entries.items()})

    __rmul__ = scale

    def dense(self, n: int) -> list[Fraction]:
        if self._entries and max(self._entries) >= n:
            raise IndexError(f"vector has coordinate {max(self._entries)} beyond length {n}")
        return [self[i] for i in range(n)]

    def __repr__(self):
        body = ", ".join(f"{i}: {format_rat(c)}" for i, c in self)
        return f"QVector({{{body}}})"


class QMatrix:
    """Sparse ``rows x cols`` rational matrix keyed by ``(row, col)``."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            c = as_rat(c)
            if c:
                clean[i, j] = c
        self._entries = clean

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[QVector]) -> "QMatrix":
        entries = {}
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            for i, c in col.items():
                entries[i, j] = c
        return cls(rows, ncols, entries)

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable[object]], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        entries = {(i, j): c for i, r in enumerate(rows) for j, c in enumerate(r)}
        return cls(len(rows), ncols, entries)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, QMatrix):
            return self.shape == other.shape and self._entries == other._entries
        return NotImplemented

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), c in self._entries.items():
            out[i][j] = c
        return out

    def column(self, j: int) -> QVector:
        return QVector._trusted({i: c for (i, jj), c in self._entries.items() if jj == j})

    def columns(self) -> list[QVector]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (i, j), c in self._entries.items():
            cols[j][i] = c
        return [QVector._trusted(c) for c in cols]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, {(j, i): c for (i, j), c in self._entries.items()})

    T = property(transpose)

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), c in self._entries.items():
            out[i][j] = c
        return out

    def __matmul__(self, other):
        if isinstance(other, QVector):
            if other and max(other.support()) >= self.cols:
                raise IndexError("vector longer than matrix width")
            out: dict[int, Fraction] = {}
            for (i, j), c in self._entries.items():
                x = other[j]
                if x:
                    out[i] = out.get(i, 0) + c * x
            return QVector(out)
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            rhs_rows = other.row_dicts()
            out = {}
            for (i, k), c in self._entries.items():
                for j, x in rhs_rows[k].items():
                    out[i, j] = out.get((i, j), 0) + c * x
            return QMatrix(self.rows, other.cols, out)
        return NotImplemented

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self._entries)
        for k, c in other._entries.items():
            out[k] = out.get(k, 0) + c
        return QMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, {k: -c for k, c in self._entries.items()})

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = as_rat(c)
        return QMatrix(self.rows, self.cols, {k: c * x for k, x in self._entries.items()})

    def is_zero(self) -> bool:
        return not self._entries

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "QMatrix":
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        out = {}
        for (i, j), c in self._entries.items():
            if i in rmap and j in cmap:
                out[rmap[i], cmap[j]] = c
        return QMatrix(len(rmap), len(cmap), out)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        out = dict(self._entries)
        for (i, j), c in other._entries.items():
            out[i, j + self.cols] = c
        return QMatrix(self.rows, self.cols + other.cols, out)

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def _eliminate(rows: list[dict[int, Fraction]], ncols: int, reduce: bool):
    """Row-reduce ``rows`` in place.

    Returns ``(pivots, pivot_rows)`` where ``pivot_rows[k]`` is a normalized
    row (pivot coefficient 1) whose pivot column is ``pivots[k]``; pivots are
    increasing.  With ``reduce=True`` the result is the reduced row echelon
    form (pivot columns cleared above as well as below).
    """
    # column -> ids of active rows with a nonzero there
    where: dict[int, set[int]] = {}
    for r, row in enumerate(rows):
        for c in row:
            where.setdefault(c, set()).add(r)
    active = set(range(len(rows)))
    pivots: list[int] = []
    pivot_rows: list[dict[int, Fraction]] = []

    for c in range(ncols):
        cands = where.get(c)
        if not cands:
            continue
        p = min(cands, key=lambda r: (_bitlen(rows[r][c]), r))
        prow = rows[p]
        inv = 1 / prow[c]
        if inv != 1:
            for k in prow:
                prow[k] *= inv
        active.discard(p)
        for k in prow:
            where[k].discard(p)
        for r in list(cands):
            row = rows[r]
            f = row[c]
            for k, x in prow.items():
                y = row.get(k, 0) - f * x
                if y:
                    if k not in row:
                        where.setdefault(k, set()).add(r)
                    row[k] = y
                else:
                    row.pop(k, None)
                    where[k].discard(r)
        pivots.append(c)
        pivot_rows.append(prow)

    if reduce:
        # back substitution, bottom pivot upward
        for a in range(len(pivots) - 1, -1, -1):
            c, prow = pivots[a], pivot_rows[a]
            for b in range(a):
                row = pivot_rows[b]
                f = row.get(c)
                if not f:
                    continue
                for k, x in prow.items():
                    y = row.get(k, 0) - f * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
    return pivots, pivot_rows


def mat_rank(M: QMatrix) -> int:
    """Exact rank of ``M`` over the rationals."""
    if M.nnz() == 0:
        return 0
    # eliminate along the shorter side
    A = M if M.rows >= M.cols else M.transpose()
    pivots, _ = _eliminate(A.transpose().row_dicts(), A.rows, reduce=False)
    return len(pivots)


def rref(M: QMatrix) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Reduced row echelon form of ``M``: ``(pivot_columns, nonzero_rows)``."""
    return _eliminate(M.row_dicts(), M.cols, reduce=True)


def kernel_basis(M: QMatrix) -> list[QVector]:
    """Basis of the right null space of ``M``.

    One vector per free column ``f`` (in increasing order), with a 1 at ``f``
    and the negated reduced-echelon entries at the pivot coordinates.
    """
    pivots, prows = rref(M)
    pivot_set = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        v = {f: Fraction(1)}
        for p, row in zip(pivots, prows):
            x = row.get(f)
            if x:
                v[p] = -x
        basis.append(QVector._trusted(v))
    return basis


def solve(M: QMatrix, v: QVector) -> QVector | None:
    """A particular solution ``x`` of ``M x = v``, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    if v and max(v.support()) >= M.rows:
        raise IndexError("right-hand side longer than the matrix height")
    rows = M.row_dicts()
    aug = M.cols
    for i, c in v.items():
        rows[i][aug] = c
    pivots, prows = _eliminate(rows, M.cols + 1, reduce=True)
    if pivots and pivots[-1] == aug:
        return None
    return QVector({p: row.get(aug, 0) for p, row in zip(pivots, prows)})


def in_image(M: QMatrix, v: QVector, witness: bool = False):
    """Whether ``v`` lies in the column space of ``M``.

    With ``witness=True`` returns ``(flag, x)`` where ``M @ x == v`` when the
    flag is true and ``x`` is ``None`` otherwise.
    """
    x = solve(M, v)
    if witness:
        return x is not None, x
    return x is not None


class EchelonBasis:
    """Incrementally maintained row-echelon basis of a subspace.

    ``add`` reduces a vector against the stored pivots and keeps the
    remainder if it is nonzero, so the stored vectors always span the same
    space as everything added so far.
    """

    def __init__(self, vectors: Iterable[QVector] = ()):
        self._pivots: dict[int, dict[int, Fraction]] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._pivots)

    def _reduce(self, v: QVector) -> dict[int, Fraction]:
        row = dict(v.items())
        while row:
            hit = [c for c in row if c in self._pivots]
            if not hit:
                break
            c = min(hit)
            f = row[c]
            for k, x in self._pivots[c].items():
                y = row.get(k, 0) - f * x
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)
        return row

    def contains(self, v: QVector) -> bool:
        return not self._reduce(v)

    def add(self, v: QVector) -> bool:
        """Add ``v``; return True iff it enlarged the span."""
        row = self._reduce(v)
        if not row:
            return False
        c = min(row)
        inv = 1 / row[c]
        self._pivots[c] = {k: x * inv for k, x in row.items()}
        return True
