"""Twelve 3x3 blocks from a 36-bit candidate, assembled into tau_3(v).

A candidate is the int ``a_1 a_2 ... a_36`` with ``a_1`` as the most
significant bit.  Block ``A_i`` is circ or revcirc of the triple
``(a_{3i-2}, a_{3i-1}, a_{3i})`` according to the block pattern, and the
36x36 matrix is laid out either from a group's Cayley table or from a
fixed block layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from .gf2 import BitMatrix, BitVector
from .groups import GroupSpec, get_group

CANDIDATE_BITS = 36
NBLOCKS = 12

Candidate = Union[int, str, BitVector, Sequence[int]]


class Kind(Enum):
    CIRC = "circ"
    REVCIRC = "revcirc"


C, R = Kind.CIRC, Kind.REVCIRC

# name -> block kinds A_1..A_12
PATTERNS: dict[str, tuple[Kind, ...]] = {
    "P-C": (C,) * 12,
    "P-R": (R,) * 12,
    "P-RC": (R,) * 6 + (C,) * 6,
    "P-CR": (C,) * 6 + (R,) * 6,
    "P-3ALT": (C, C, C, R, R, R, C, C, C, R, R, R),
    "P-2ALT-R": (R, R, C, C) * 3,
    "P-ALT-R": (R, C) * 6,
    "P-ALT-C": (C, R) * 6,
    "P-2ALT-C": (C, C, R, R) * 3,
}


def to_candidate(c: Candidate) -> int:
    """Normalise an int, 0/1 sequence, binary string, hex string or BitVector."""
    if isinstance(c, BitVector):
        if c.length != CANDIDATE_BITS:
            raise ValueError(f"candidate must have {CANDIDATE_BITS} bits, got {c.length}")
        return c.bits
    if isinstance(c, (int,)) and not isinstance(c, bool):
        if not 0 <= c < 1 << CANDIDATE_BITS:
            raise ValueError("candidate out of range")
        return c
    if isinstance(c, str):
        s = c.strip().replace(" ", "").replace(";", "")
        if len(s) == CANDIDATE_BITS and set(s) <= {"0", "1"}:
            return int(s, 2)
        return candidate_from_hex(s)
    bits = [int(b) for b in c]
    if len(bits) != CANDIDATE_BITS:
        raise ValueError(f"candidate must have {CANDIDATE_BITS} bits, got {len(bits)}")
    return BitVector.from_bits(bits).bits


def candidate_bits(c: Candidate) -> list[int]:
    v = to_candidate(c)
    return [(v >> (CANDIDATE_BITS - 1 - i)) & 1 for i in range(CANDIDATE_BITS)]


def candidate_to_hex(c: Candidate) -> str:
    return format(to_candidate(c), "09x")


def candidate_from_hex(s: str) -> int:
    s = s.strip().lower()
    if s.startswith("0x"):
        s = s[2:]
    if not s or len(s) > 9:
        raise ValueError(f"expected at most 9 hex digits, got {s!r}")
    v = int(s, 16)
    if v >> CANDIDATE_BITS:
        raise ValueError("candidate out of range")
    return v


# -- blocks ---------------------------------------------------------------


def _block_rows(kind: Kind, x: int, y: int, z: int) -> tuple[int, int, int]:
    def row(p, q, r):
        return (p << 2) | (q << 1) | r

    if kind is Kind.CIRC:
        return row(x, y, z), row(z, x, y), row(y, z, x)
    return row(x, y, z), row(y, z, x), row(z, x, y)


def circ(x: int, y: int, z: int) -> BitMatrix:
    return BitMatrix(_block_rows(Kind.CIRC, x, y, z), 3)


def revcirc(x: int, y: int, z: int) -> BitMatrix:
    return BitMatrix(_block_rows(Kind.REVCIRC, x, y, z), 3)


def _raw_blocks(c: int, kinds: Sequence[Kind]) -> list[tuple[int, int, int]]:
    out = []
    for i, kind in enumerate(kinds):
        t = (c >> (CANDIDATE_BITS - 3 * (i + 1))) & 7
        out.append(_block_rows(kind, t >> 2, (t >> 1) & 1, t & 1))
    return out


def build_blocks(c: Candidate, pattern: str | Sequence[Kind]) -> list[BitMatrix]:
    kinds = PATTERNS[pattern] if isinstance(pattern, str) else tuple(pattern)
    if len(kinds) != NBLOCKS:
        raise ValueError(f"a block pattern has {NBLOCKS} entries")
    return [BitMatrix(rows, 3) for rows in _raw_blocks(to_candidate(c), kinds)]


_TRANSPOSE3 = {}


def _t3(rows: tuple[int, int, int]) -> tuple[int, int, int]:
    try:
        return _TRANSPOSE3[rows]
    except KeyError:
        t = BitMatrix(rows, 3).transpose().rows
        _TRANSPOSE3[rows] = t
        return t


def _assemble(grid: Sequence[Sequence[int]], flags, blocks: Sequence[tuple[int, int, int]]) -> BitMatrix:
    n = len(grid)
    out = []
    for i in range(n):
        cells = [
            _t3(blocks[grid[i][j]]) if flags is not None and flags[i][j] else blocks[grid[i][j]]
            for j in range(n)
        ]
        for s in range(3):
            acc = 0
            for cell in cells:
                acc = (acc << 3) | cell[s]
            out.append(acc)
    return BitMatrix(out, 3 * n)


def sigma3_cayley(g: GroupSpec, blocks: Sequence[BitMatrix]) -> BitMatrix:
    """Group matrix with block (i, j) equal to the coefficient of g_i^-1 g_j."""
    if len(blocks) != g.order:
        raise ValueError(f"need {g.order} blocks")
    return _assemble(g.group_matrix(), None, [b.rows for b in blocks])


# -- explicit layouts -------------------------------------------------------


def _circ_idx(idx: Sequence[int]) -> list[list[int]]:
    n = len(idx)
    return [[idx[(j - i) % n] for j in range(n)] for i in range(n)]


def _revcirc_idx(idx: Sequence[int]) -> list[list[int]]:
    n = len(idx)
    return [[idx[(j + i) % n] for j in range(n)] for i in range(n)]


def _transpose_idx(m: list[list[int]]) -> list[list[int]]:
    return [list(r) for r in zip(*m)]


def _join(grid_of_grids: list[list[list[list[int]]]]) -> list[list[int]]:
    rows = []
    for brow in grid_of_grids:
        for i in range(len(brow[0])):
            rows.append(sum((blk[i] for blk in brow), []))
    return rows


@dataclass(frozen=True)
class Layout:
    """A 12x12 grid of 0-based block indices with per-cell transpose flags."""

    grid: tuple[tuple[int, ...], ...]
    transpose: tuple[tuple[bool, ...], ...] | None = None

    @classmethod
    def build(cls, grid, transpose=None) -> "Layout":
        g = tuple(tuple(r) for r in grid)
        t = None if transpose is None else tuple(tuple(bool(x) for x in r) for r in transpose)
        return cls(g, t)

    def assemble(self, blocks: Sequence[BitMatrix]) -> BitMatrix:
        return _assemble(self.grid, self.transpose, [b.rows for b in blocks])

    def block_usage(self) -> list[int]:
        counts = [0] * NBLOCKS
        for r in self.grid:
            for x in r:
                counts[x] += 1
        return counts


def _two_by_two(tl, tr, bl, br):
    return _join([[tl, tr], [bl, br]])


_FIRST, _SECOND = list(range(6)), list(range(6, 12))


def _layout_d12_case1() -> Layout:
    a, b = _circ_idx(_FIRST), _circ_idx(_SECOND)
    grid = _two_by_two(a, b, _transpose_idx(b), _transpose_idx(a))
    flags = [[i >= 6] * 12 for i in range(12)]
    return Layout.build(grid, flags)


def _layout_d12_case2() -> Layout:
    a, b = _circ_idx(_FIRST), _revcirc_idx(_SECOND)
    return Layout.build(_two_by_two(a, b, b, a))


def _layout_c12_case1() -> Layout:
    a, b = _circ_idx(_FIRST), _circ_idx(_SECOND)
    b_shift = _circ_idx([11, 6, 7, 8, 9, 10])
    return Layout.build(_two_by_two(a, b, b_shift, a))


def _layout_c12_case2() -> Layout:
    A, B, Cm, D = (_circ_idx([3 * k, 3 * k + 1, 3 * k + 2]) for k in range(4))
    Bp, Cp, Dp = _circ_idx([5, 3, 4]), _circ_idx([8, 6, 7]), _circ_idx([11, 9, 10])
    return Layout.build(_join([[A, B, Cm, D], [Dp, A, B, Cm], [Cp, Dp, A, B], [Bp, Cp, Dp, A]]))


def _layout_c6xc2() -> Layout:
    a, b = _circ_idx(_FIRST), _circ_idx(_SECOND)
    return Layout.build(_two_by_two(a, b, b, a))


def _layout_c3xc4() -> Layout:
    A, B, Cm, D = (_circ_idx([3 * k, 3 * k + 1, 3 * k + 2]) for k in range(4))
    return Layout.build(_join([[A, B, Cm, D], [D, A, B, Cm], [Cm, D, A, B], [B, Cm, D, A]]))


def _layout_dic12() -> Layout:
    a, b = _circ_idx(_FIRST), _revcirc_idx(_SECOND)
    c = _revcirc_idx([9, 10, 11, 6, 7, 8])
    return Layout.build(_two_by_two(a, b, c, a))


# The A4 block layout as printed (1-based).  Rows 11 and 12 repeat a block
# within the row, which no group matrix can do; the registry therefore
# assembles A4 from its Cayley table instead.
A4_PRINTED = (
    (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12),
    (3, 1, 2, 12, 10, 11, 6, 4, 5, 9, 7, 8),
    (2, 3, 1, 8, 9, 7, 11, 12, 10, 5, 6, 4),
    (4, 5, 6, 1, 2, 3, 10, 11, 12, 7, 8, 9),
    (12, 10, 11, 3, 1, 2, 9, 7, 8, 6, 4, 5),
    (8, 9, 7, 2, 3, 1, 5, 6, 4, 11, 12, 10),
    (7, 8, 9, 10, 11, 12, 1, 2, 3, 4, 5, 6),
    (6, 4, 5, 9, 7, 8, 3, 1, 2, 12, 10, 11),
    (11, 12, 10, 5, 6, 4, 2, 3, 1, 8, 9, 7),
    (10, 11, 12, 7, 8, 9, 4, 5, 6, 1, 2, 3),
    (9, 7, 6, 6, 4, 5, 12, 10, 11, 3, 1, 2),
    (5, 6, 4, 10, 12, 10, 8, 9, 7, 2, 3, 1),
)

EXPLICIT_LAYOUTS = {
    "D12-case1": _layout_d12_case1,
    "D12-case2": _layout_d12_case2,
    "C12-case1": _layout_c12_case1,
    "C12-case2": _layout_c12_case2,
    "C6xC2": _layout_c6xc2,
    "C3xC4": _layout_c3xc4,
    "Dic12": _layout_dic12,
}


def explicit_layout(group_case: str) -> Layout:
    return EXPLICIT_LAYOUTS[group_case]()


def cayley_layout(group_case: str) -> Layout:
    return Layout.build(get_group(group_case).group_matrix())


# -- registry -------------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    id: str
    group_case: str
    pattern: str
    assembly: str  # "explicit" or "cayley"
    layout: Layout

    @property
    def kinds(self) -> tuple[Kind, ...]:
        return PATTERNS[self.pattern]

    @property
    def label(self) -> str:
        i, j = self.id[1:].split(".")
        sub = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
        sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
        return f"𝒢{i.translate(sub)}{j.translate(sup)}"

    def tau3(self, c: Candidate) -> BitMatrix:
        return _assemble(self.layout.grid, self.layout.transpose, _raw_blocks(to_candidate(c), self.kinds))

    def generator(self, c: Candidate) -> BitMatrix:
        return BitMatrix.identity(CANDIDATE_BITS).hstack(self.tau3(c))


_WIRING = (
    ("G1.1", "D12-case1", "P-CR"),
    ("G1.2", "D12-case1", "P-R"),
    ("G2.1", "D12-case2", "P-3ALT"),
    ("G2.2", "D12-case2", "P-2ALT-R"),
    ("G2.3", "D12-case2", "P-RC"),
    ("G2.4", "D12-case2", "P-ALT-R"),
    ("G2.5", "D12-case2", "P-ALT-C"),
    ("G2.6", "D12-case2", "P-2ALT-C"),
    ("G3.1", "C12-case1", "P-C"),
    ("G3.2", "C12-case1", "P-R"),
    ("G3.3", "C12-case1", "P-RC"),
    ("G3.4", "C12-case1", "P-CR"),
    ("G4.1", "C12-case2", "P-3ALT"),
    ("G4.2", "C12-case2", "P-R"),
    ("G4.3", "C12-case2", "P-C"),
    ("G5.1", "C6xC2", "P-CR"),
    ("G5.2", "C6xC2", "P-3ALT"),
    ("G5.3", "C6xC2", "P-RC"),
    ("G6.1", "C3xC4", "P-ALT-C"),
    ("G6.2", "C3xC4", "P-2ALT-R"),
    ("G7.1", "A4", "P-3ALT"),
    ("G7.2", "A4", "P-2ALT-C"),
    ("G7.3", "A4", "P-ALT-C"),
    ("G7.4", "A4", "P-2ALT-R"),
    ("G7.5", "A4", "P-RC"),
    ("G8.1", "Dic12", "P-R"),
    ("G8.2", "Dic12", "P-RC"),
    ("G8.3", "Dic12", "P-2ALT-C"),
)


def _make_registry() -> dict[str, Construction]:
    layouts: dict[str, tuple[str, Layout]] = {}
    reg = {}
    for cid, case, pattern in _WIRING:
        if case not in layouts:
            if case in EXPLICIT_LAYOUTS:
                layouts[case] = ("explicit", explicit_layout(case))
            else:
                layouts[case] = ("cayley", cayley_layout(case))
        kind, layout = layouts[case]
        reg[cid] = Construction(cid, case, pattern, kind, layout)
    return reg


REGISTRY: dict[str, Construction] = _make_registry()


def get_construction(cid: str | Construction) -> Construction:
    if isinstance(cid, Construction):
        return cid
    key = cid.strip()
    if key.startswith("𝒢"):
        sub = str.maketrans("₀₁₂₃₄₅₆₇₈₉⁰¹²³⁴⁵⁶⁷⁸⁹", "01234567890123456789")
        i, j = key[1], key[2:]
        key = f"G{i.translate(sub)}.{j.translate(sub)}"
    try:
        return REGISTRY[key.upper()]
    except KeyError:
        raise KeyError(f"unknown construction {cid!r}") from None


def tau3(k: str | Construction, c: Candidate) -> BitMatrix:
    return get_construction(k).tau3(c)


def generator(k: str | Construction, c: Candidate) -> BitMatrix:
    return get_construction(k).generator(c)
