"""Self-duality, minimum distance and weight-enumerator parameters.

All routines take a generator ``[I_k | A]``.  When the code is self-dual
``A`` is invertible, so both halves of the coordinates are information
sets.  A codeword whose restriction to the left half has weight ``t1``
and to the right half weight ``t2`` appears at level ``t1`` of the
left-systematic enumeration and at level ``t2`` of the right-systematic
one; that split is what the distance bound and the count partition use.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from math import ceil
from typing import Optional

import numpy as np

from .gf2 import BitMatrix, LevelSums, gf2_matmul, gf2_rank, gf2_rank_inverse

# W_{72,1}, W_{72,2} and the Type II enumerator, low-order terms
W72_1_A14 = 8640
W72_1_A16 = 124281
W72_2_A14 = 7616
W72_2_A16 = 134521
TYPE_II_A12 = 4398
TYPE_II_A16 = 197073


class Family(str, enum.Enum):
    W72_1 = "W72_1"
    W72_2 = "W72_2"
    TYPE_II = "TYPE_II"


class AnalysisError(ValueError):
    pass


class NotSelfDualError(AnalysisError):
    pass


class NotExtremalError(AnalysisError):
    pass


class InconsistentEnumeratorError(AnalysisError):
    pass


def split_generator(g: BitMatrix) -> BitMatrix:
    """Right half ``A`` of ``g = [I | A]``."""
    k = g.nrows
    if g.ncols != 2 * k:
        raise ValueError(f"expected a k x 2k generator, got {g.nrows}x{g.ncols}")
    mask = (1 << k) - 1
    left = BitMatrix([r >> k for r in g.rows], k)
    if not left.is_identity():
        raise ValueError("left half of the generator is not the identity")
    return BitMatrix([r & mask for r in g.rows], k)


def gram_is_identity(a: BitMatrix) -> bool:
    """A A^T == I, checked row pair by row pair."""
    rows = a.rows
    k = len(rows)
    for i in range(k):
        ri = rows[i]
        if ri.bit_count() & 1 == 0:
            return False
        for j in range(i + 1, k):
            if (ri & rows[j]).bit_count() & 1:
                return False
    return True


def self_orthogonal_full_rank(g: BitMatrix) -> bool:
    """G G^T == 0 and rank(G) == k: the generator-level definition."""
    gram = gf2_matmul(g, g.transpose())
    return gram.is_zero() and gf2_rank(g) == g.nrows and g.ncols == 2 * g.nrows


def is_self_dual(g: BitMatrix) -> bool:
    a = split_generator(g)
    fast = gram_is_identity(a)
    slow = self_orthogonal_full_rank(g)
    if fast != slow:  # pragma: no cover - would mean a bug in gf2
        raise AssertionError("self-duality criteria disagree")
    return fast


def classify_doubly_even(g: BitMatrix) -> bool:
    """True when every generator row has weight divisible by 4.

    For a self-orthogonal code this makes every codeword doubly even.
    """
    if not is_self_dual(g):
        raise NotSelfDualError("doubly-even classification needs a self-dual code")
    return all(w % 4 == 0 for w in g.row_weights())


class _TwoSets:
    """Level-by-level subset sums for both information sets of ``[I | A]``."""

    def __init__(self, a: BitMatrix, a_inv: BitMatrix | None = None):
        k = a.nrows
        if a_inv is None:
            rank, a_inv = gf2_rank_inverse(a)
            if a_inv is None:
                raise NotSelfDualError(f"right half is singular (rank {rank})")
        self.k = k
        self.sets = (LevelSums(a.rows, k), LevelSums(a_inv.rows, k))

    def advance(self) -> None:
        for s in self.sets:
            s.advance()


def _prepare(g: BitMatrix) -> _TwoSets:
    if not is_self_dual(g):
        raise NotSelfDualError("code is not self-dual")
    a = split_generator(g)
    # self-dual: A^-1 = A^T
    return _TwoSets(a, a.transpose())


def min_distance(g: BitMatrix) -> int:
    """Exact minimum weight of a self-dual code with generator ``[I | A]``."""
    two = _prepare(g)
    k = two.k
    best = 2 * k + 1
    for level in range(1, k + 1):
        two.advance()
        for s in two.sets:
            for w in s.weights():
                best = min(best, int(w.min()) + level)
        # anything unseen has more than `level` ones in each half
        if best <= 2 * (level + 1):
            break
    return best


def count_low_weights(g: BitMatrix, w_max: int = 14) -> dict[int, int]:
    """Exact number of codewords of each weight ``1..w_max``.

    A weight-``w`` word is counted from the left enumeration when its left
    part has at most ``w // 2`` ones, and from the right enumeration
    otherwise (its right part then has at most ``ceil(w/2) - 1`` ones).
    """
    if w_max < 1:
        raise ValueError("w_max must be positive")
    two = _prepare(g)
    k = two.k
    left_top = min(w_max // 2, k)
    right_top = min(ceil(w_max / 2) - 1, k)
    counts = np.zeros(w_max + 1, dtype=np.int64)
    bins = 2 * k + 2

    def accumulate(h: np.ndarray, level: int, limit) -> None:
        for w in range(1, w_max + 1):
            if level <= limit(w) and w - level >= 0:
                counts[w] += h[w - level]

    for which, top, limit in (
        (0, left_top, lambda w: w // 2),
        (1, right_top, lambda w: ceil(w / 2) - 1),
    ):
        sums = two.sets[which]
        for level in range(1, top + 1):
            if level == top and level > 1:
                # the last level is only histogrammed, never stored
                h = sums.next_level_histogram(bins)
            else:
                sums.advance()
                h = sums.histogram(bins)
            accumulate(h, level, limit)
    return {w: int(counts[w]) for w in range(1, w_max + 1)}


@dataclass
class CodeReport:
    self_dual: bool
    min_distance: Optional[int] = None
    doubly_even: Optional[bool] = None
    counts: dict[int, int] = field(default_factory=dict)
    family: Optional[Family] = None
    gamma: Optional[int] = None
    beta: Optional[int] = None
    alpha: Optional[int] = None
    family_confirmed: bool = False
    construction: Optional[str] = None
    candidate: Optional[str] = None

    def params(self) -> tuple:
        """Dedup key: (family, gamma, beta) for Type I, (TYPE_II, alpha) for Type II."""
        if self.family is Family.TYPE_II:
            return (Family.TYPE_II.value, self.alpha)
        return (self.family.value if self.family else None, self.gamma, self.beta)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value if self.family else None
        d["counts"] = {str(w): c for w, c in sorted(self.counts.items())}
        return d


def _type_one_family(a12: int, a14: int, a16: Optional[int]) -> tuple[Family, int, int, bool]:
    if a12 % 2:
        raise InconsistentEnumeratorError(f"A12 = {a12} is odd")
    beta = a12 // 2
    options = []
    for fam, c14, c16 in ((Family.W72_1, W72_1_A14, W72_1_A16), (Family.W72_2, W72_2_A14, W72_2_A16)):
        num = c14 - a14
        if num % 64:
            continue
        gamma = num // 64
        if a16 is not None and a16 != c16 - 24 * beta + 384 * gamma:
            continue
        options.append((fam, gamma))
    if not options:
        raise InconsistentEnumeratorError(f"no Type I enumerator fits A12={a12}, A14={a14}, A16={a16}")
    # without A16 both families can fit; W72_1 is preferred and flagged unconfirmed
    fam, gamma = options[0]
    confirmed = a16 is not None or len(options) == 1
    return fam, gamma, beta, confirmed


def extract_params(g: BitMatrix, with_a16: bool = False, d: Optional[int] = None) -> CodeReport:
    """Weight-enumerator parameters of a self-dual [72, 36, 12] code."""
    if not is_self_dual(g):
        raise NotSelfDualError("code is not self-dual")
    if d is None:
        d = min_distance(g)
    if d != 12:
        raise NotExtremalError(f"minimum distance is {d}, expected 12")
    doubly = all(w % 4 == 0 for w in g.row_weights())
    counts = count_low_weights(g, 16 if with_a16 else 14)
    report = CodeReport(self_dual=True, min_distance=d, doubly_even=doubly, counts=counts)
    a12, a14 = counts[12], counts[14]
    if doubly:
        if a14:
            raise InconsistentEnumeratorError("doubly-even code with weight-14 words")
        report.family = Family.TYPE_II
        report.alpha = a12 - TYPE_II_A12
        if with_a16 and counts[16] != TYPE_II_A16 - 12 * report.alpha:
            raise InconsistentEnumeratorError(f"A16 = {counts[16]} does not fit alpha = {report.alpha}")
        report.family_confirmed = True
    else:
        fam, gamma, beta, confirmed = _type_one_family(a12, a14, counts.get(16) if with_a16 else None)
        report.family, report.gamma, report.beta, report.family_confirmed = fam, gamma, beta, confirmed
    return report


def analyze(g: BitMatrix, with_a16: bool = False) -> CodeReport:
    """Best-effort report for any ``[I | A]`` generator; never raises on non-extremal input."""
    if not is_self_dual(g):
        return CodeReport(self_dual=False)
    d = min_distance(g)
    if d == 12 and g.nrows == 36:
        return extract_params(g, with_a16=with_a16, d=d)
    doubly = all(w % 4 == 0 for w in g.row_weights())
    w_max = min(max(d + 2, 2), g.ncols)
    return CodeReport(self_dual=True, min_distance=d, doubly_even=doubly, counts=count_low_weights(g, w_max))


def extremal_bound(n: int, code_type: str | int) -> int:
    """Upper bound on the minimum distance of a Type I or Type II self-dual code of length ``n``."""
    if n <= 0 or n % 2:
        raise ValueError(f"length must be a positive even number, got {n}")
    t = str(code_type).upper()
    base = 4 * (n // 24) + 4
    if t in ("II", "2"):
        return base
    if t in ("I", "1"):
        return base + 2 if n % 24 == 22 else base
    raise ValueError(f"type must be I or II, got {code_type!r}")
