"""Bit-packed GF(2) vectors and matrices.

Rows are stored as Python ints with column 0 in the most significant
position, so ``int("0110", 2)`` is the row ``0 1 1 0``.  The bulk
enumeration helpers at the bottom work on ``numpy.uint64`` words and
therefore accept rows of at most 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

MAX_BITS = 128


def _mask(n: int) -> int:
    return (1 << n) - 1


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class BitVector:
    """A GF(2) vector of ``length`` bits packed into one int."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if not 0 <= self.length <= MAX_BITS:
            raise ValueError(f"length must be in 0..{MAX_BITS}, got {self.length}")
        # canonical form: nothing beyond `length`
        object.__setattr__(self, "bits", self.bits & _mask(self.length))

    @classmethod
    def from_bits(cls, seq: Iterable[int]) -> "BitVector":
        seq = list(seq)
        value = 0
        for b in seq:
            value = (value << 1) | (int(b) & 1)
        return cls(value, len(seq))

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> (self.length - 1 - i)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitVector(self.bits ^ other.bits, self.length)

    def dot(self, other: "BitVector") -> int:
        if other.length != self.length:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def to_list(self) -> list[int]:
        return [self[i] for i in range(self.length)]

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b") if self.length else ""


class BitMatrix:
    """Immutable GF(2) matrix with bit-packed rows."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[int], ncols: int):
        if not 0 <= ncols <= MAX_BITS:
            raise ValueError(f"ncols must be in 0..{MAX_BITS}, got {ncols}")
        m = _mask(ncols)
        self._rows: tuple[int, ...] = tuple(int(r) & m for r in rows)
        self.nrows = len(self._rows)
        self.ncols = ncols

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << (n - 1 - i) for i in range(n)], n)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            return cls([], 0)
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls([BitVector.from_bits(r).bits for r in rows], ncols)

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows((arr % 2).astype(int).tolist())

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        vecs = [BitVector.from_string(s) for s in lines if s.strip()]
        if not vecs:
            return cls([], 0)
        ncols = vecs[0].length
        if any(v.length != ncols for v in vecs):
            raise ValueError("rows have different lengths")
        return cls([v.bits for v in vecs], ncols)

    # -- access -------------------------------------------------------
    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> BitVector:
        return BitVector(self._rows[i], self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self._rows[i] >> (self.ncols - 1 - j)) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.ncols}b") for r in self._rows]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self._rows):
            for j in range(self.ncols):
                out[i, j] = (r >> (self.ncols - 1 - j)) & 1
        return out

    # -- algebra ------------------------------------------------------
    def transpose(self) -> "BitMatrix":
        n, m = self.nrows, self.ncols
        cols = [0] * m
        for i, r in enumerate(self._rows):
            bit = 1 << (n - 1 - i)
            while r:
                low = r & -r
                j = m - low.bit_length()
                cols[j] |= bit
                r ^= low
        return BitMatrix(cols, n)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix([a ^ b for a, b in zip(self._rows, other._rows)], self.ncols)

    __xor__ = __add__

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return gf2_matmul(self, other)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        w = other.ncols
        return BitMatrix([(a << w) | b for a, b in zip(self._rows, other._rows)], self.ncols + w)

    def columns(self, cols: Sequence[int]) -> "BitMatrix":
        """Submatrix on the given columns, in the given order."""
        out = []
        for r in self._rows:
            v = 0
            for j in cols:
                v = (v << 1) | ((r >> (self.ncols - 1 - j)) & 1)
            out.append(v)
        return BitMatrix(out, len(cols))

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == BitMatrix.identity(self.nrows)

    def is_zero(self) -> bool:
        return not any(self._rows)


def gf2_matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2).

    Each row of the product is the XOR of the rows of ``b`` selected by
    the set bits of the matching row of ``a``.
    """
    if a.ncols != b.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    k = a.ncols
    brows = b.rows
    out = []
    for r in a.rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[k - low.bit_length()]
            r ^= low
        out.append(acc)
    return BitMatrix(out, b.ncols)


def _eliminate(rows: list[int], ncols: int, pivot_cols: Sequence[int] | None = None):
    """Reduced row echelon form in place; returns the list of (row, col) pivots."""
    order = range(ncols) if pivot_cols is None else pivot_cols
    pivots = []
    r = 0
    for c in order:
        bit = 1 << (ncols - 1 - c)
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    return pivots


def gf2_rank(a: BitMatrix) -> int:
    return len(_eliminate(list(a.rows), a.ncols))


def gf2_rank_inverse(a: BitMatrix) -> tuple[int, BitMatrix | None]:
    """Rank of ``a`` and, when ``a`` is square and nonsingular, its inverse."""
    n, m = a.shape
    if n != m or n == 0:
        return gf2_rank(a), None
    # augment [A | I] and reduce on the left block
    aug = [(r << n) | (1 << (n - 1 - i)) for i, r in enumerate(a.rows)]
    pivots = _eliminate(aug, 2 * n, range(n))
    rank = len(pivots)
    if rank < n:
        return rank, None
    return rank, BitMatrix([r & _mask(n) for r in aug], n)


def systematic_form(g: BitMatrix, pivot_cols: Sequence[int]) -> BitMatrix | None:
    """Row-reduce ``g`` so that its restriction to ``pivot_cols`` is the identity.

    Row ``i`` of the result has its pivot at ``pivot_cols[i]``.  Returns
    None when the columns are not an information set.
    """
    pivot_cols = list(pivot_cols)
    if len(pivot_cols) != g.nrows:
        raise ValueError(f"need {g.nrows} pivot columns, got {len(pivot_cols)}")
    rows = list(g.rows)
    if len(_eliminate(rows, g.ncols, pivot_cols)) < g.nrows:
        return None
    return BitMatrix(rows, g.ncols)


def row_space(g: BitMatrix) -> set[int]:
    """Every codeword of the row space; only for small ``nrows``."""
    if g.nrows > 20:
        raise ValueError("row space too large to materialise")
    span = {0}
    for r in g.rows:
        span |= {v ^ r for v in span}
    return span


# ---------------------------------------------------------------------------
# combination enumeration


def revolving_door(n: int, t: int, reverse: bool = False) -> Iterator[tuple[int, ...]]:
    """All ``t``-subsets of ``range(n)`` in revolving-door order.

    Successive subsets differ by one element leaving and one entering.
    Uses the recursive definition R(n, t) = R(n-1, t) followed by the
    reversal of R(n-1, t-1) with ``n-1`` appended.
    """
    if t < 0 or t > n:
        return
    if t == 0:
        yield ()
        return
    if t == n:
        yield tuple(range(n))
        return
    last = (n - 1,)
    if not reverse:
        yield from revolving_door(n - 1, t)
        for s in revolving_door(n - 1, t - 1, True):
            yield s + last
    else:
        for s in revolving_door(n - 1, t - 1):
            yield s + last
        yield from revolving_door(n - 1, t, True)


class SubsetEnumerator:
    """Visits XOR sums of all row subsets of size ``1..max_level``.

    Levels run in increasing size; within a level subsets follow the
    revolving-door order, so each step updates the accumulator with one
    XOR against a precomputed pair sum.
    """

    def __init__(self, base: BitMatrix, max_level: int):
        if not 0 <= max_level <= base.nrows:
            raise ValueError(f"max_level must be in 0..{base.nrows}")
        self.base = base
        self.max_level = max_level
        rows = base.rows
        self._pair = [[a ^ b for b in rows] for a in rows]

    def _level(self, rows: Sequence[int], idx: Sequence[int], t: int):
        pair = self._pair
        prev: tuple[int, ...] | None = None
        acc = 0
        for s in revolving_door(len(idx), t):
            if prev is None:
                for i in s:
                    acc ^= rows[idx[i]]
            else:
                gone = set(prev).difference(s)
                came = set(s).difference(prev)
                (o,), (i,) = gone, came
                acc ^= pair[idx[o]][idx[i]]
            prev = s
            yield acc, tuple(idx[i] for i in s)

    def subsets(self) -> Iterator[tuple[int, tuple[int, ...], int]]:
        """Yield ``(accumulated row, subset, level)`` for every visited subset."""
        rows = self.base.rows
        idx = list(range(self.base.nrows))
        for t in range(1, self.max_level + 1):
            for acc, s in self._level(rows, idx, t):
                yield acc, s, t

    def partition(self, lead: int) -> Iterator[tuple[int, tuple[int, ...], int]]:
        """The subsets whose smallest row index is ``lead``.

        The partitions over ``lead = 0..nrows-1`` are disjoint and cover
        exactly what :meth:`subsets` visits, so they can be run on
        separate workers.
        """
        rows = self.base.rows
        head = rows[lead]
        rest = list(range(lead + 1, self.base.nrows))
        yield head, (lead,), 1
        for t in range(1, self.max_level):
            for acc, s in self._level(rows, rest, t):
                yield acc ^ head, (lead,) + s, t + 1


def enumerate_combinations(
    base: BitMatrix,
    max_level: int,
    visit: Callable[[BitVector, int], object],
) -> None:
    """Call ``visit(xor_of_rows, level)`` once per nonempty row subset of size <= max_level."""
    n = base.ncols
    for acc, _, level in SubsetEnumerator(base, max_level).subsets():
        visit(BitVector(acc, n), level)


# ---------------------------------------------------------------------------
# vectorised level sums (rows of at most 64 bits)

if hasattr(np, "bitwise_count"):

    def popcount64(arr: np.ndarray) -> np.ndarray:
        return np.bitwise_count(arr)

else:  # pragma: no cover - numpy < 2.0
    _BYTE_COUNTS = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def popcount64(arr: np.ndarray) -> np.ndarray:
        b = np.ascontiguousarray(arr, dtype=np.uint64).view(np.uint8)
        return _BYTE_COUNTS[b].reshape(arr.shape + (8,)).sum(axis=-1, dtype=np.uint8)


class LevelSums:
    """XOR sums of all ``t``-subsets of ``rows``, grown one level at a time.

    ``by_last[j]`` holds the sums of the subsets whose largest index is
    ``j``.  Level ``t + 1`` is produced as
    ``concat(by_last[0..j-1]) ^ rows[j]`` for each ``j``.
    """

    def __init__(self, rows: Sequence[int], width: int):
        if width > 64:
            raise ValueError("vectorised enumeration supports rows of at most 64 bits")
        self.rows = np.array([int(r) for r in rows], dtype=np.uint64)
        self.n = len(rows)
        self.level = 0
        self.by_last: list[np.ndarray] = []

    def advance(self) -> None:
        n = self.n
        if self.level >= n:
            raise ValueError("no further levels")
        if self.level == 0:
            self.by_last = [self.rows[j : j + 1].copy() for j in range(n)]
        else:
            nxt = [np.zeros(0, dtype=np.uint64)]
            prefix = self.by_last[0]
            for j in range(1, n):
                nxt.append(prefix ^ self.rows[j])
                prefix = np.concatenate((prefix, self.by_last[j]))
            self.by_last = nxt
        self.level += 1

    def weights(self) -> Iterator[np.ndarray]:
        """Popcounts of the current level, one array per last index."""
        for arr in self.by_last:
            if arr.size:
                yield popcount64(arr)

    def histogram(self, length: int) -> np.ndarray:
        """Counts of current-level sums by popcount, ``length`` bins."""
        h = np.zeros(length, dtype=np.int64)
        for w in self.weights():
            h += np.bincount(w, minlength=length)[:length]
        return h

    def next_level_histogram(self, length: int) -> np.ndarray:
        """Histogram of level ``self.level + 1`` without storing that level."""
        h = np.zeros(length, dtype=np.int64)
        for j in range(1, self.n):
            r = self.rows[j]
            for i in range(j):
                arr = self.by_last[i]
                if arr.size:
                    h += np.bincount(popcount64(arr ^ r), minlength=length)[:length]
        return h


def level_histograms(rows: Sequence[int], width: int, max_level: int) -> list[np.ndarray]:
    """Popcount histograms (``width + 1`` bins) of subset sums for levels 1..max_level."""
    sums = LevelSums(rows, width)
    out = []
    for _ in range(max_level):
        sums.advance()
        out.append(sums.histogram(width + 1))
    return out


def naive_subset_sums(rows: Sequence[int], max_level: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Reference enumeration in lexicographic order, for tests."""
    for t in range(1, max_level + 1):
        for s in combinations(range(len(rows)), t):
            acc = 0
            for i in s:
                acc ^= rows[i]
            yield s, acc
