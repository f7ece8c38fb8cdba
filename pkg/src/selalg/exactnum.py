"""Exact rational arithmetic, dense rational matrices, and combinatorics.

Every value produced here is an integer or a reduced fraction; floating
point never enters.  The conversion identities assembled elsewhere in the
package are checked by exact equality, which only works if the arithmetic
is bit-exact.  ``fractions.Fraction`` keeps values canonical (positive
denominator, lowest terms) automatically.

All objects are immutable after construction and all functions are pure,
so everything here can be shared freely between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "STIRLING_LIMIT",
    "binomial",
    "format_rational",
    "mat_mul",
    "mat_vec",
    "parse_rational",
    "power_sum",
    "stirling_first",
]

Rational = Fraction

# Tournament sizes beyond this are unrealistic; keeps the memo table small.
STIRLING_LIMIT = 64


def parse_rational(value) -> Fraction:
    """Convert text, ints, fractions, or floats to an exact ``Fraction``.

    Strings may be "p/q", an integer literal, or a decimal/scientific
    literal ("0.01", "2.5e-3"); all are converted without rounding.  Floats
    are reinterpreted through their shortest decimal representation, so
    ``0.01`` means exactly 1/100.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("cannot interpret bool as a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite rational: {value!r}")
        value = repr(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(value) -> str:
    """Render a rational as "p/q", or plain "p" when the denominator is 1."""
    return str(Fraction(value))


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k); returns 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial needs nonnegative arguments, got ({n}, {k})")
    return math.comb(n, k)


_stirling_rows: list[tuple[int, ...]] = [(1,)]


def stirling_first(s: int, l: int) -> int:
    """Signed Stirling number of the first kind.

    The coefficient of x**l in x(x-1)...(x-s+1), zero for l > s.  Computed
    by the recurrence S(s+1, l) = S(s, l-1) - s*S(s, l) with rows memoised
    up to s = ``STIRLING_LIMIT``.
    """
    if s < 0 or l < 0:
        raise ValueError(f"stirling_first needs nonnegative arguments, got ({s}, {l})")
    if s > STIRLING_LIMIT:
        raise ValueError(f"stirling_first is capped at s = {STIRLING_LIMIT}, got s = {s}")
    if l > s:
        return 0
    while len(_stirling_rows) <= s:
        prev = _stirling_rows[-1]
        m = len(_stirling_rows) - 1
        row = []
        for j in range(m + 2):
            above = prev[j] if j <= m else 0
            left = prev[j - 1] if 1 <= j <= m + 1 else 0
            row.append(left - m * above)
        _stirling_rows.append(tuple(row))
    return _stirling_rows[s][l]


def power_sum(n: int, l: int) -> int:
    """Sum of k**(l-1) over k = 1..n, exactly."""
    if n < 1 or l < 1:
        raise ValueError(f"power_sum needs positive arguments, got ({n}, {l})")
    return sum(k ** (l - 1) for k in range(1, n + 1))


def _coerce_entry(value):
    if isinstance(value, bool):
        raise TypeError("matrix entries must be exact rationals, not bool")
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError(
            "matrix entries must be exact; convert floats with parse_rational first"
        )
    raise TypeError(f"matrix entries must be exact rationals, got {type(value).__name__}")


class RationalMatrix:
    """Immutable dense matrix of exact rationals.

    Entries are Python ints or ``Fraction``s; arithmetic stays exact.  Rows
    are stored as nested tuples, so instances are safe to share.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows_of_entries):
        data = tuple(tuple(_coerce_entry(e) for e in row) for row in rows_of_entries)
        if not data or not data[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("matrix rows have unequal lengths")
        self._data = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def from_function(cls, rows: int, cols: int, fn) -> "RationalMatrix":
        """Build a rows x cols matrix from ``fn(i, j)`` with 1-based indices."""
        return cls([[fn(i, j) for j in range(1, cols + 1)] for i in range(1, rows + 1)])

    def entry(self, i: int, j: int):
        """Entry at 1-based position (i, j)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        return self._data[i - 1][j - 1]

    def row(self, i: int) -> tuple:
        """Row i (1-based) as a tuple."""
        if not 1 <= i <= self.rows:
            raise IndexError(f"row {i} outside {self.rows}x{self.cols} matrix")
        return self._data[i - 1]

    def column(self, j: int) -> tuple:
        """Column j (1-based) as a tuple."""
        if not 1 <= j <= self.cols:
            raise IndexError(f"column {j} outside {self.rows}x{self.cols} matrix")
        return tuple(row[j - 1] for row in self._data)

    def to_floats(self) -> list[list[float]]:
        return [[float(e) for e in row] for row in self._data]

    def __iter__(self):
        return iter(self._data)

    def __matmul__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __rmul__(self, scalar):
        scalar = _coerce_entry(scalar)
        return RationalMatrix([[scalar * e for e in row] for row in self._data])

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(Fraction(e) for r in self._data for e in r)))

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols})"

    def __str__(self):
        cells = [[format_rational(e) for e in row] for row in self._data]
        widths = [max(len(cells[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join(
            "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells
        )


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Exact matrix product of ``a`` and ``b``.

    Raises ``ValueError`` naming both shapes when the inner dimensions
    disagree.
    """
    if a.cols != b.rows:
        raise ValueError(
            f"cannot multiply {a.rows}x{a.cols} matrix by {b.rows}x{b.cols} matrix"
        )
    b_rows = b._data
    out = []
    for a_row in a._data:
        acc = [0] * b.cols
        for x, b_row in zip(a_row, b_rows):
            if x:
                for j, y in enumerate(b_row):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return RationalMatrix(out)


def mat_vec(m: RationalMatrix, vector) -> tuple:
    """Exact matrix-vector product, returned as a tuple."""
    vec = tuple(_coerce_entry(v) for v in vector)
    if m.cols != len(vec):
        raise ValueError(f"cannot apply {m.rows}x{m.cols} matrix to length-{len(vec)} vector")
    return tuple(sum(x * v for x, v in zip(row, vec) if x) for row in m._data)
