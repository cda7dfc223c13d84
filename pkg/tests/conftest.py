import random
from itertools import combinations

import pytest

from sdforge.gf2 import BitMatrix


def random_orthogonal(k: int, rng: random.Random, steps: int | None = None) -> BitMatrix:
    """Random k x k matrix with A A^T = I.

    Built from row permutations and maps x -> x + (x.v) v with v of even
    weight, both of which preserve the standard inner product.
    """
    rows = [1 << (k - 1 - i) for i in range(k)]
    for _ in range(steps or 4 * k):
        rng.shuffle(rows)
        v = 0
        while v == 0 or v.bit_count() % 2:
            v = rng.getrandbits(k)
        rows = [r ^ (v if (r & v).bit_count() & 1 else 0) for r in rows]
    return BitMatrix(rows, k)


def self_dual_generator(a: BitMatrix) -> BitMatrix:
    return BitMatrix.identity(a.nrows).hstack(a)


def full_weight_distribution(g: BitMatrix) -> list[int]:
    """A_w for w = 0..n by visiting all 2^k codewords."""
    n = g.ncols
    dist = [0] * (n + 1)
    rows = g.rows
    for mask in range(1 << len(rows)):
        acc = 0
        for i, r in enumerate(rows):
            if mask >> i & 1:
                acc ^= r
        dist[acc.bit_count()] += 1
    return dist


def naive_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) % 2 for j in range(len(b[0]))] for i in range(len(a))]


def span_size(rows: list[int]) -> int:
    seen = set()
    for t in range(len(rows) + 1):
        for s in combinations(rows, t):
            acc = 0
            for r in s:
                acc ^= r
            seen.add(acc)
    return len(seen)


@pytest.fixture
def rng():
    return random.Random(20240531)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
