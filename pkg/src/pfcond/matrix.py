"""Exact rational matrices, skew-symmetric matrices, minors and masks.

All public indices are 1-based.  Entries are stored as
:class:`fractions.Fraction` and every operation is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Scalar = Fraction


def to_scalar(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or a ``"p/q"`` string) to an exact rational."""
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted; use int, Fraction or 'p/q'")
    return Fraction(x)


def format_scalar(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class MatrixError(ValueError):
    pass


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("_rows", "n_rows", "n_cols")

    def __init__(self, rows: Iterable[Sequence], n_cols: int | None = None):
        grid = tuple(tuple(to_scalar(x) for x in row) for row in rows)
        if n_cols is None:
            n_cols = len(grid[0]) if grid else 0
        for row in grid:
            if len(row) != n_cols:
                raise MatrixError("ragged rows")
        object.__setattr__(self, "_rows", grid)
        object.__setattr__(self, "n_rows", len(grid))
        object.__setattr__(self, "n_cols", n_cols)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @classmethod
    def _trusted(cls, grid, n_cols):
        # grid must already be a tuple of tuples of Fractions
        obj = object.__new__(cls)
        object.__setattr__(obj, "_rows", grid)
        object.__setattr__(obj, "n_rows", len(grid))
        object.__setattr__(obj, "n_cols", n_cols)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> "Matrix":
        n_cols = n_rows if n_cols is None else n_cols
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * n_cols for _ in range(n_rows)), n_cols)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def _check(self, i: int, j: int) -> None:
        if not (1 <= i <= self.n_rows and 1 <= j <= self.n_cols):
            raise IndexError(f"entry ({i},{j}) outside a {self.n_rows}x{self.n_cols} matrix")

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        self._check(i, j)
        return self._rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.n_cols == other.n_cols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n_cols, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(x) for x in row) for row in self._rows)
        return f"{type(self).__name__}([{body}])"

    def transpose(self) -> "Matrix":
        return Matrix._trusted(tuple(zip(*self._rows)) if self._rows else (), self.n_rows)

    def __neg__(self) -> "Matrix":
        return type(self)._trusted(tuple(tuple(-x for x in r) for r in self._rows), self.n_cols)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return type(self)._trusted(tuple(tuple(c * x for x in r) for r in self._rows), self.n_cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n_cols != other.n_rows:
            raise MatrixError("shape mismatch")
        cols = list(zip(*other._rows)) if other._rows else [()] * other.n_cols
        grid = tuple(
            tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
            for r in self._rows
        )
        return Matrix._trusted(grid, other.n_cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        """Rows and columns kept, 1-based, in the given order."""
        for i in rows:
            if not 1 <= i <= self.n_rows:
                raise IndexError(f"row {i} out of range")
        for j in cols:
            if not 1 <= j <= self.n_cols:
                raise IndexError(f"column {j} out of range")
        grid = tuple(tuple(self._rows[i - 1][j - 1] for j in cols) for i in rows)
        return Matrix._trusted(grid, len(cols))


class SkewMatrix(Matrix):
    """Skew-symmetric matrix; ``a_ij = -a_ji`` and a zero diagonal are checked."""

    __slots__ = ()

    def __init__(self, rows: Iterable[Sequence]):
        super().__init__(rows)
        if not self.is_square:
            raise MatrixError("a skew-symmetric matrix must be square")
        r = self._rows
        for i in range(self.n_rows):
            if r[i][i] != 0:
                raise MatrixError(f"nonzero diagonal entry at ({i + 1},{i + 1})")
            for j in range(i + 1, self.n_rows):
                if r[i][j] != -r[j][i]:
                    raise MatrixError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")

    @property
    def n(self) -> int:
        return self.n_rows

    def transpose(self) -> "SkewMatrix":
        return -self

    def upper_entries(self) -> list[tuple[int, int, Fraction]]:
        n = self.n
        return [(i + 1, j + 1, self._rows[i][j]) for i in range(n) for j in range(i + 1, n)]


def new_skew(n: int, upper_entries: Iterable[tuple[int, int, object]] = ()) -> SkewMatrix:
    """Build an order-``n`` skew matrix from ``(i, j, a_ij)`` triples with ``i < j``."""
    if n < 0:
        raise MatrixError("order must be nonnegative")
    grid = [[Fraction(0)] * n for _ in range(n)]
    seen = set()
    for i, j, a in upper_entries:
        if not (1 <= i < j <= n):
            raise MatrixError(f"pair ({i},{j}) must satisfy 1 <= i < j <= {n}")
        if (i, j) in seen:
            raise MatrixError(f"duplicate entry ({i},{j})")
        seen.add((i, j))
        a = to_scalar(a)
        grid[i - 1][j - 1] = a
        grid[j - 1][i - 1] = -a
    return SkewMatrix._trusted(tuple(map(tuple, grid)), n)


def as_skew(M: Matrix) -> SkewMatrix:
    if isinstance(M, SkewMatrix):
        return M
    return SkewMatrix(M.rows)


# --- index sets and pair sets -------------------------------------------------


def index_set(indices: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Validate a strictly increasing tuple of 1-based indices."""
    out = tuple(indices)
    for a, b in zip(out, out[1:]):
        if a >= b:
            raise MatrixError(f"index set {out} is not strictly increasing")
    if out and out[0] < 1:
        raise MatrixError(f"index {out[0]} out of range")
    if n is not None and out and out[-1] > n:
        raise MatrixError(f"index {out[-1]} exceeds order {n}")
    return out


class PairSet:
    """Ordered list of index pairs ``(i_l, j_l)`` sorted so that ``i_1 <= i_2 <= ...``.

    With ``skew=True`` every pair must satisfy ``i < j`` (the masking set of
    a skew matrix).  General pair sets accept diagonal and lower pairs.
    """

    __slots__ = ("pairs", "skew")

    def __init__(self, pairs: Iterable[tuple[int, int]], skew: bool = True):
        ps = [(int(i), int(j)) for i, j in pairs]
        for i, j in ps:
            if i < 1 or j < 1:
                raise MatrixError(f"pair ({i},{j}) has a nonpositive index")
            if skew and not i < j:
                raise MatrixError(f"pair ({i},{j}) violates i < j")
        if len(set(ps)) != len(ps):
            raise MatrixError("duplicate pairs")
        if skew and len({frozenset(p) for p in ps}) != len(ps):
            raise MatrixError("duplicate pairs")
        object.__setattr__(self, "pairs", tuple(sorted(ps)))
        object.__setattr__(self, "skew", skew)

    def __setattr__(self, name, value):
        raise AttributeError("pair sets are immutable")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, l: int) -> tuple[int, int]:
        """1-based access to ``(i_l, j_l)``."""
        if not 1 <= l <= len(self.pairs):
            raise IndexError(f"pair index {l} not in [1, {len(self.pairs)}]")
        return self.pairs[l - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, PairSet) and self.pairs == other.pairs and self.skew == other.skew

    def __hash__(self) -> int:
        return hash((self.pairs, self.skew))

    def __repr__(self) -> str:
        return f"PairSet({list(self.pairs)!r}, skew={self.skew})"

    def without(self, l: int) -> "PairSet":
        """``E_p``: drop the ``l``-th pair."""
        self[l]
        return PairSet(self.pairs[: l - 1] + self.pairs[l:], skew=self.skew)

    def only(self, l: int) -> "PairSet":
        """``E-bar_p``: keep only the ``l``-th pair."""
        return PairSet([self[l]], skew=self.skew)

    def max_index(self) -> int:
        return max((max(p) for p in self.pairs), default=0)


# --- minors, masks, embeddings ------------------------------------------------


def minor_delete(A: SkewMatrix, I: Iterable[int]) -> SkewMatrix:
    """Delete the rows and columns indexed by ``I``; the result stays skew."""
    drop = set(I)
    for i in drop:
        if not 1 <= i <= A.n_rows:
            raise IndexError(f"index {i} out of range for order {A.n_rows}")
    keep = [i for i in range(A.n_rows) if i + 1 not in drop]
    r = A.rows
    grid = tuple(tuple(r[i][j] for j in keep) for i in keep)
    cls = SkewMatrix if isinstance(A, SkewMatrix) else Matrix
    return cls._trusted(grid, len(keep))


def keep_indices(A: SkewMatrix, I: Iterable[int]) -> SkewMatrix:
    """Principal submatrix on the (sorted) index set ``I``."""
    keep = sorted(set(I))
    for i in keep:
        if not 1 <= i <= A.n_rows:
            raise IndexError(f"index {i} out of range for order {A.n_rows}")
    r = A.rows
    grid = tuple(tuple(r[i - 1][j - 1] for j in keep) for i in keep)
    cls = SkewMatrix if isinstance(A, SkewMatrix) else Matrix
    return cls._trusted(grid, len(keep))


def minor_delete_rc(A: Matrix, i: int, j: int) -> Matrix:
    """Delete row ``i`` and column ``j``."""
    if not (1 <= i <= A.n_rows and 1 <= j <= A.n_cols):
        raise IndexError(f"({i},{j}) out of range for a {A.n_rows}x{A.n_cols} matrix")
    grid = tuple(
        row[: j - 1] + row[j:] for k, row in enumerate(A.rows) if k != i - 1
    )
    return Matrix._trusted(grid, A.n_cols - 1)


def mask_skew(A: SkewMatrix, E: PairSet) -> SkewMatrix:
    """``E(A)``: zero both ``(i_l, j_l)`` and ``(j_l, i_l)`` for every pair."""
    if not E.skew:
        raise MatrixError("mask_skew needs a skew pair set (i < j)")
    if E.max_index() > A.n:
        raise MatrixError("pair index exceeds matrix order")
    grid = [list(r) for r in A.rows]
    zero = Fraction(0)
    for i, j in E:
        grid[i - 1][j - 1] = zero
        grid[j - 1][i - 1] = zero
    return SkewMatrix._trusted(tuple(map(tuple, grid)), A.n)


def mask_general(A: Matrix, E: PairSet) -> Matrix:
    """``E[A]``: zero only the listed positions; transposed positions are kept."""
    grid = [list(r) for r in A.rows]
    zero = Fraction(0)
    for i, j in E:
        if not (1 <= i <= A.n_rows and 1 <= j <= A.n_cols):
            raise IndexError(f"pair ({i},{j}) out of range")
        grid[i - 1][j - 1] = zero
    return Matrix._trusted(tuple(map(tuple, grid)), A.n_cols)


def block_embed(A: Matrix) -> SkewMatrix:
    """``A* = [[0, A], [-A^T, 0]]`` of order ``2n``."""
    if not A.is_square:
        raise MatrixError("block_embed needs a square matrix")
    n = A.n_rows
    zero = Fraction(0)
    top = tuple((zero,) * n + row for row in A.rows)
    bottom = tuple(tuple(-A.rows[i][j] for i in range(n)) + (zero,) * n for j in range(n))
    return SkewMatrix._trusted(top + bottom, 2 * n)


# --- determinant ----------------------------------------------------------------


def _integer_rows(A: Matrix) -> tuple[list[list[int]], int]:
    """Scale each row to integers; return the rows and the product of the scale factors."""
    rows = []
    scale = 1
    for row in A.rows:
        d = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([x.numerator * (d // x.denominator) for x in row])
        scale *= d
    return rows, scale


def bareiss_det(M: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (destroys ``M``)."""
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (piv * rowi[j] - mik * rowk[j]) // prev
        prev = piv
    return sign * M[n - 1][n - 1] if n else 1


def det_exact(A: Matrix) -> Fraction:
    """Exact determinant; the empty matrix has determinant 1."""
    if not A.is_square:
        raise MatrixError("determinant of a non-square matrix")
    rows, scale = _integer_rows(A)
    return Fraction(bareiss_det(rows), scale)


# --- text formats -----------------------------------------------------------------


def parse_matrix(text: str, skew: bool = False) -> Matrix:
    """Read ``n`` followed by ``n`` rows of ``n`` rationals."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixError(f"first line must be the order, got {lines[0]!r}") from None
    if n < 0 or len(lines) - 1 != n:
        raise MatrixError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise MatrixError(f"row {ln!r} does not have {n} entries")
        try:
            rows.append([Fraction(t) for t in toks])
        except (ValueError, ZeroDivisionError):
            raise MatrixError(f"bad rational in row {ln!r}") from None
    if skew:
        return SkewMatrix(rows) if n else SkewMatrix._trusted((), 0)
    return Matrix(rows, n_cols=n)


def format_matrix(A: Matrix) -> str:
    if not A.is_square:
        raise MatrixError("only square matrices have a text format")
    out = [str(A.n_rows)]
    out += [" ".join(format_scalar(x) for x in row) for row in A.rows]
    return "\n".join(out) + "\n"


def parse_pairs(text: str, skew: bool = True) -> PairSet:
    pairs = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        toks = ln.split()
        if len(toks) != 2:
            raise MatrixError(f"pair line {ln!r} must hold two indices")
        pairs.append((int(toks[0]), int(toks[1])))
    return PairSet(pairs, skew=skew)


def format_pairs(E: PairSet) -> str:
    return "".join(f"{i} {j}\n" for i, j in E)
