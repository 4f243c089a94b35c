"""Exact scalars, vectors and dense matrices over Q and Q(i).

Every value in the library flows through this module: plain rationals are
``fractions.Fraction`` (arbitrary precision, always in lowest terms), complex
entries are :class:`GaussianRational`, and :class:`Matrix` / :class:`Vector`
are immutable dense containers over either scalar type.  There is no floating
point anywhere and no rounding, ever.

Conventions: vectors are context-free entry tuples; matrix * vector treats the
vector as a column.  ``char_poly`` returns monic coefficients in descending
degree order, computed by the Faddeev-LeVerrier recurrence (divisions are by
integers only, hence exact over the rationals).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, "GaussianRational"]


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def as_scalar(value) -> Scalar:
    """Coerce ints/Fractions/GaussianRationals to a library scalar."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def scalar_conj(value: Scalar) -> Scalar:
    if isinstance(value, GaussianRational):
        return value.conjugate()
    return value


def real_part(value: Scalar) -> Fraction:
    return value.re if isinstance(value, GaussianRational) else value


def imag_part(value: Scalar) -> Fraction:
    return value.im if isinstance(value, GaussianRational) else Fraction(0)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


class GaussianRational:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other) -> "GaussianRational | None":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2 = re^2 + im^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # Real values must hash like their Fraction counterpart.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I_UNIT = GaussianRational(0, 1)


class Vector:
    """Immutable exact vector; used both for columns and for row functionals."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", tuple(as_scalar(e) for e in entries))
        if not self.entries:
            raise DimensionError("empty vector")

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def unit(cls, dim: int, index: int) -> "Vector":
        return cls(Fraction(1) if i == index else Fraction(0) for i in range(dim))

    @classmethod
    def zero(cls, dim: int) -> "Vector":
        return cls(Fraction(0) for _ in range(dim))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other: "Vector") -> "Vector":
        if self.dim != other.dim:
            raise DimensionError("vector dimension mismatch")
        return Vector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "Vector") -> "Vector":
        if self.dim != other.dim:
            raise DimensionError("vector dimension mismatch")
        return Vector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self):
        return Vector(-a for a in self.entries)

    def scale(self, c) -> "Vector":
        c = as_scalar(c)
        return Vector(c * a for a in self.entries)

    def dot(self, other: "Vector") -> Scalar:
        """Bilinear dot product (no conjugation)."""
        if self.dim != other.dim:
            raise DimensionError("vector dimension mismatch")
        total: Scalar = Fraction(0)
        for a, b in zip(self.entries, other.entries):
            total = total + a * b
        return total

    def tensor(self, other: "Vector") -> "Vector":
        return Vector(a * b for a in self.entries for b in other.entries)

    def concat(self, other: "Vector") -> "Vector":
        return Vector(self.entries + other.entries)

    def total(self) -> Scalar:
        s: Scalar = Fraction(0)
        for a in self.entries:
            s = s + a
        return s

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Vector({list(self.entries)!r})"

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(as_scalar(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise DimensionError("empty matrix")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(
            [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls([[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def from_rows(cls, *rows) -> "Matrix":
        return cls(rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return Vector(self.entries[i])

    def col(self, j: int) -> Vector:
        return Vector(row[j] for row in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("matrix shape mismatch")
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("matrix shape mismatch")
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self):
        return Matrix([[-a for a in row] for row in self.entries])

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix([[c * a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            cols = [other.col(j).entries for j in range(other.cols)]
            return Matrix(
                [
                    [
                        sum((a * b for a, b in zip(row, col)), start=Fraction(0))
                        for col in cols
                    ]
                    for row in self.entries
                ]
            )
        if isinstance(other, Vector):
            if self.cols != other.dim:
                raise DimensionError(
                    f"cannot apply {self.rows}x{self.cols} to vector of dim {other.dim}"
                )
            return Vector(
                sum((a * b for a, b in zip(row, other.entries)), start=Fraction(0))
                for row in self.entries
            )
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    __matmul__ = __mul__

    def __pow__(self, n: int) -> "Matrix":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        if n < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def left_mul(self, row: Vector) -> Vector:
        """Row-vector times matrix (used for final functionals)."""
        if row.dim != self.rows:
            raise DimensionError("row functional dimension mismatch")
        return Vector(
            sum((row[i] * self.entries[i][j] for i in range(self.rows)), start=Fraction(0))
            for j in range(self.cols)
        )

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def conj_transpose(self) -> "Matrix":
        return Matrix(
            [
                [scalar_conj(self.entries[i][j]) for i in range(self.rows)]
                for j in range(self.cols)
            ]
        )

    def tensor(self, other: "Matrix") -> "Matrix":
        """Kronecker product; (a tensor b)(c tensor d) = ac tensor bd."""
        return Matrix(
            [
                [
                    self.entries[i][j] * other.entries[k][l]
                    for j in range(self.cols)
                    for l in range(other.cols)
                ]
                for i in range(self.rows)
                for k in range(other.rows)
            ]
        )

    def direct_sum(self, other: "Matrix") -> "Matrix":
        """Block-diagonal sum; (a + b)(c + d) = ac + bd blockwise."""
        top = [
            list(row) + [Fraction(0)] * other.cols for row in self.entries
        ]
        bottom = [
            [Fraction(0)] * self.cols + list(row) for row in other.entries
        ]
        return Matrix(top + bottom)

    def trace(self) -> Scalar:
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        t: Scalar = Fraction(0)
        for i in range(self.rows):
            t = t + self.entries[i][i]
        return t

    def char_poly(self) -> tuple[Fraction, ...]:
        """Monic characteristic polynomial det(xI - A), descending coefficients.

        Faddeev-LeVerrier: exact over the rationals since every division is by
        an integer step count.
        """
        if not self.is_square:
            raise DimensionError("characteristic polynomial of a non-square matrix")
        n = self.rows
        coeffs: list = [as_scalar(1)]
        aux = Matrix.identity(n)
        for k in range(1, n + 1):
            prod = self * aux
            ck = -(prod.trace() / k)
            coeffs.append(ck)
            if k < n:
                aux = prod + Matrix.identity(n).scale(ck)
        return tuple(coeffs)

    def det(self) -> Scalar:
        """Exact determinant by Gaussian elimination over the entry field."""
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        work = [list(row) for row in self.entries]
        det: Scalar = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det = det * work[col][col]
            inv_rowhead = work[col][col]
            for r in range(col + 1, n):
                if work[r][col] != 0:
                    factor = work[r][col] / inv_rowhead
                    for c in range(col, n):
                        work[r][c] = work[r][c] - factor * work[col][c]
        return det

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx]
        )

    def entrywise(self, fn) -> "Matrix":
        return Matrix([[fn(a) for a in row] for row in self.entries])

    def is_real(self) -> bool:
        return all(imag_part(a) == 0 for row in self.entries for a in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.entries]!r})"

    def __str__(self):
        return "\n".join("[" + "  ".join(str(e) for e in row) + "]" for row in self.entries)


def poly_eval_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Evaluate a polynomial (descending coefficients) at a square matrix."""
    if not m.is_square:
        raise DimensionError("polynomial of a non-square matrix")
    result = Matrix.zero(m.rows)
    for c in coeffs:
        result = result * m + Matrix.identity(m.rows).scale(as_scalar(c))
    return result


def solve_exact(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of a x = b, or None if the system is inconsistent.

    Free variables are set to zero; works for over- and under-determined
    systems (Gaussian elimination over the entry field).
    """
    if a.rows != b.dim:
        raise DimensionError("right-hand side dimension mismatch")
    m, n = a.rows, a.cols
    work = [list(row) + [b[i]] for i, row in enumerate(a.entries)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        head = work[r][c]
        work[r] = [v / head for v in work[r]]
        for i in range(m):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [vi - f * vr for vi, vr in zip(work[i], work[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if work[i][n] != 0:
            return None
    x = [as_scalar(0)] * n
    for (pr, pc) in pivots:
        x[pc] = work[pr][n]
    return Vector(x)
