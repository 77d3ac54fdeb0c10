"""Exact GF(2) linear algebra on bit-packed matrices.

Rows are stored as machine integers, one bit per column, with column 0 at
the most significant position (bit ``cols-1``).  Sorting packed rows is
therefore the same as dictionary order on the rows read left to right,
which gives subspace catalogs a reproducible ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

MAX_COLS = 64


def gaussian_binomial(m: int, k: int) -> int:
    """Number of k-dimensional subspaces of GF(2)^m, as an exact integer.

    Returns 0 when k > m.  Uses big-integer arithmetic throughout; the
    final division is exact.
    """
    if m < 0 or k < 0:
        raise ValueError(f"gaussian_binomial requires m, k >= 0, got ({m}, {k})")
    if k > m:
        return 0
    num = 1
    den = 1
    for l in range(k):
        num *= (1 << m) - (1 << l)
        den *= (1 << k) - (1 << l)
    return num // den


@dataclass(frozen=True)
class Gf2Matrix:
    """Dense binary matrix with rows packed into integers (MSB = column 0)."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if not 1 <= self.cols <= MAX_COLS:
            raise ValueError(f"cols must be in 1..{MAX_COLS}, got {self.cols}")
        mask = (1 << self.cols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError(f"row {r:#x} has bits outside {self.cols} columns")

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        """Build from a list of 0/1 rows, e.g. ``[[1, 0, 1], [0, 1, 1]]``."""
        if cols is None:
            if not entries:
                raise ValueError("cols required for a matrix with no rows")
            cols = len(entries[0])
        packed = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows")
            word = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError(f"entries must be 0/1, got {v!r}")
                word |= v << (cols - 1 - j)
            packed.append(word)
        return cls(tuple(packed), cols)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> (self.cols - 1 - j)) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.num_rows)]

    def rank(self) -> int:
        """GF(2) row rank by elimination on the packed rows."""
        pivots: dict[int, int] = {}  # leading bit position -> reduced row
        for row in self.rows:
            while row:
                top = row.bit_length() - 1
                if top not in pivots:
                    pivots[top] = row
                    break
                row ^= pivots[top]
        return len(pivots)

    def column_submatrix(self, cols: Iterable[int]) -> "Gf2Matrix":
        """Keep only the selected columns (0-based), order preserved.

        An empty selection is represented as a single all-zero column so the
        result stays a valid matrix; its rank is 0 as required.
        """
        sel = list(cols)
        for j in sel:
            if not 0 <= j < self.cols:
                raise IndexError(f"column {j} out of range for {self.cols} columns")
        if not sel:
            return Gf2Matrix(tuple(0 for _ in self.rows), 1)
        w = len(sel)
        packed = []
        for r in self.rows:
            word = 0
            for pos, j in enumerate(sel):
                word |= ((r >> (self.cols - 1 - j)) & 1) << (w - 1 - pos)
            packed.append(word)
        return Gf2Matrix(tuple(packed), w)


@dataclass(frozen=True)
class SubspaceCatalog:
    """All parity-check matrices of the k-dimensional subspaces of GF(2)^m.

    Each matrix is (m-k) x m, in row-reduced echelon form with no zero rows;
    its nullspace is the subspace it stands for.  The list is sorted
    lexicographically on the packed rows, and its length is the Gaussian
    binomial of (m, k).
    """

    m: int
    k: int
    matrices: tuple[Gf2Matrix, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.matrices)


@lru_cache(maxsize=None)
def enumerate_subspaces(m: int, k: int) -> SubspaceCatalog:
    """Enumerate the dimension-k subspaces of GF(2)^m via echelon matrices.

    Picks the pivot-column subset first, then fills the free entries: row i
    has its leading one at pivot p_i, zeros at every other pivot column and
    before p_i, and free 0/1 entries at the non-pivot columns right of p_i.
    For k = m the catalog holds a single 0 x m matrix (the whole space).
    """
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    if m > 12:
        raise ValueError(f"enumeration supported up to m=12, got m={m}")
    r = m - k
    if m == 0:
        raise ValueError("ambient dimension must be at least 1")
    if r == 0:
        return SubspaceCatalog(m, k, (Gf2Matrix((), m),))

    matrices: list[Gf2Matrix] = []
    for pivots in combinations(range(m), r):
        free_cols = [[j for j in range(m) if j > pivots[i] and j not in pivots]
                     for i in range(r)]
        slots = [(i, j) for i in range(r) for j in free_cols[i]]
        base = [1 << (m - 1 - pivots[i]) for i in range(r)]
        for fill in range(1 << len(slots)):
            rows = base.copy()
            for s, (i, j) in enumerate(slots):
                if (fill >> s) & 1:
                    rows[i] |= 1 << (m - 1 - j)
            matrices.append(Gf2Matrix(tuple(rows), m))
    matrices.sort(key=lambda a: a.rows)
    return SubspaceCatalog(m, k, tuple(matrices))
