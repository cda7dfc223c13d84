"""Virus optimisation and a baseline genetic algorithm over 36-bit candidates.

Fitness is staged.  A candidate whose right half fails ``A A^T = I`` scores
0.  Otherwise both information sets are enumerated through level 5,
stopping at the first level that shows a word lighter than 12; the score is
the lightest weight seen, capped at 12.  Surviving level 5 certifies
``d >= 12`` and the candidate is recorded as a hit.

The main loop owns the RNG and draws every random number before a batch is
evaluated, so results do not depend on how many workers evaluate it.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .analysis import AnalysisError, extract_params, gram_is_identity, min_distance
from .catalog import HitRecord, append_hit
from .constructions import CANDIDATE_BITS, Construction, candidate_to_hex, get_construction
from .gf2 import BitMatrix, LevelSums

log = logging.getLogger(__name__)

TARGET_D = 12
CERTIFY_LEVEL = 5
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
_FULL = (1 << CANDIDATE_BITS) - 1
_POW2 = (1 << np.arange(CANDIDATE_BITS - 1, -1, -1, dtype=np.uint64)).astype(np.uint64)


@dataclass(frozen=True)
class FitnessResult:
    valid: bool
    score: int
    confirmed_d12: bool


INVALID = FitnessResult(False, 0, False)


def partial_min_weight(a: BitMatrix, max_level: int = CERTIFY_LEVEL, target: int = TARGET_D) -> tuple[int, bool]:
    """Lightest codeword among subsets of size <= ``max_level`` in either half.

    Returns ``(weight, completed)``; enumeration stops after the first level
    that shows a weight below ``target``.
    """
    k = a.nrows
    sets = (LevelSums(a.rows, k), LevelSums(a.transpose().rows, k))
    best = 2 * k + 1
    for level in range(1, max_level + 1):
        for s in sets:
            s.advance()
            for w in s.weights():
                best = min(best, int(w.min()) + level)
        if best < target:
            return best, False
    return best, True


def evaluate_fitness(k: str | Construction, c: int) -> FitnessResult:
    con = get_construction(k)
    a = con.tau3(c)
    if not gram_is_identity(a):
        return INVALID
    best, completed = partial_min_weight(a)
    if not completed:
        return FitnessResult(True, min(best, TARGET_D), False)
    # every unseen word has at least CERTIFY_LEVEL + 1 ones in each half
    return FitnessResult(True, TARGET_D, True)


# -- configuration ------------------------------------------------------------


@dataclass
class VoaConfig:
    population_size: int = 500
    iterations: int = 100
    strong_count: int = 10
    strong_offspring: int = 5
    common_offspring: int = 1
    strong_flip_prob: float = 1 / 36
    common_flip_prob: float = 3 / 36
    stagnation_window: int = 5
    seed: int = 0

    def validate(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if not 0 < self.strong_count < self.population_size:
            raise ValueError("need 0 < strong_count < population_size")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        for name in ("strong_offspring", "common_offspring", "stagnation_window"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("strong_flip_prob", "common_flip_prob"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1)")


@dataclass
class GaConfig:
    population_size: int = 500
    iterations: int = 100
    tournament_size: int = 3
    crossover_prob: float = 0.9
    mutation_flip_prob: float = 1 / 36
    elite_count: int = 2
    seed: int = 0

    def validate(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("tournament_size must lie in 1..population_size")
        if not 0 <= self.elite_count <= self.population_size:
            raise ValueError("elite_count must lie in 0..population_size")
        for name in ("crossover_prob", "mutation_flip_prob"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass
class RunLog:
    algorithm: str
    construction: str
    config: dict
    rng: str = RNG_ALGORITHM
    best_scores: list[int] = field(default_factory=list)
    hits: list[HitRecord] = field(default_factory=list)
    evaluations: int = 0
    population: list[tuple[str, bool, int]] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "algorithm": self.algorithm,
            "construction": self.construction,
            "config": self.config,
            "rng": self.rng,
            "best_scores": self.best_scores,
            "evaluations": self.evaluations,
            "hits": [json.loads(h.to_json(timestamp=timing)) for h in self.hits],
            "population": [list(p) for p in self.population],
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), sort_keys=True)

    def distinct_params(self) -> set[tuple]:
        return {h.params() for h in self.hits}


# -- shared machinery ---------------------------------------------------------


def _random_candidates(rng: np.random.Generator, n: int) -> list[int]:
    return [int(x) for x in rng.integers(0, 1 << CANDIDATE_BITS, size=n, dtype=np.uint64)]


def _flip_masks(rng: np.random.Generator, n: int, p: float) -> list[int]:
    if n == 0:
        return []
    draws = rng.random((n, CANDIDATE_BITS)) < p
    return [int(x) for x in (draws.astype(np.uint64) * _POW2).sum(axis=1, dtype=np.uint64)]


class _Evaluator:
    """Memoising fitness evaluation with single-writer hit recording."""

    def __init__(
        self,
        con: Construction,
        algorithm: str,
        seed: int,
        threads: int = 1,
        out: Optional[str] = None,
        timestamps: bool = True,
        on_hit: Optional[Callable[[HitRecord], None]] = None,
    ):
        self.con = con
        self.algorithm = algorithm
        self.seed = seed
        self.threads = max(1, int(threads or 1))
        self.out = out
        self.timestamps = timestamps
        self.on_hit = on_hit
        self.cache: dict[int, FitnessResult] = {}
        self.evaluations = 0
        self.hits: list[HitRecord] = []

    def _one(self, c: int) -> FitnessResult:
        return evaluate_fitness(self.con, c)

    def __call__(self, cands: Sequence[int], iteration: int) -> list[FitnessResult]:
        fresh = list(dict.fromkeys(c for c in cands if c not in self.cache))
        if self.threads > 1 and len(fresh) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                results = list(ex.map(self._one, fresh))
        else:
            results = [self._one(c) for c in fresh]
        self.evaluations += len(fresh)
        for c, r in zip(fresh, results):
            self.cache[c] = r
            if r.confirmed_d12:
                self._record(c, iteration)
        return [self.cache[c] for c in cands]

    def _record(self, c: int, iteration: int) -> None:
        g = self.con.generator(c)
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if self.timestamps else None
        try:
            rep = extract_params(g)
        except AnalysisError:
            # d above 12, or an enumerator outside both families: keep the raw facts
            d = min_distance(g)
            hit = HitRecord(self.con.id, candidate_to_hex(c), None, d, seed=self.seed, algorithm=self.algorithm, iteration=iteration, timestamp=stamp)
        else:
            rep.construction, rep.candidate = self.con.id, candidate_to_hex(c)
            hit = HitRecord.from_report(rep, seed=self.seed, algorithm=self.algorithm, iteration=iteration, timestamp=stamp)
        self.hits.append(hit)
        log.info("hit %s %s %s", self.con.id, hit.candidate, hit.params())
        if self.out:
            append_hit(hit, self.out, timestamp=self.timestamps)
        if self.on_hit:
            self.on_hit(hit)


def _rank_key(item: tuple[int, FitnessResult]):
    c, f = item
    return (-f.score, c)


def _population_snapshot(pop: list[tuple[int, FitnessResult]]) -> list[tuple[str, bool, int]]:
    return [(candidate_to_hex(c), f.valid, f.score) for c, f in pop]


# -- VOA ----------------------------------------------------------------------


def voa_run(
    k: str | Construction,
    cfg: VoaConfig | None = None,
    threads: int = 1,
    out: Optional[str] = None,
    timestamps: bool = True,
    progress: Optional[Callable[[int, int], None]] = None,
) -> RunLog:
    """Virus optimisation over the candidates of construction ``k``.

    Strong viruses (the top ``strong_count``) replicate with a low flip
    probability, common ones with a higher one.  Maintenance keeps the best
    ``population_size`` distinct viruses.  When the best score has not
    improved for ``stagnation_window`` iterations, the common flip
    probability is halved (never below the strong one) and the worst half
    of the population is replaced by fresh random viruses.
    """
    cfg = cfg or VoaConfig()
    cfg.validate()
    con = get_construction(k)
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    ev = _Evaluator(con, "voa", cfg.seed, threads, out, timestamps)
    runlog = RunLog("voa", con.id, asdict(cfg))

    n = cfg.population_size
    cands = _random_candidates(rng, n)
    pop = sorted(zip(cands, ev(cands, 0)), key=_rank_key)
    pop = _maintain(pop, n, rng, ev, 0)
    runlog.best_scores.append(pop[0][1].score)

    p_common = cfg.common_flip_prob
    stagnant = 0
    for it in range(1, cfg.iterations + 1):
        strong, common = pop[: cfg.strong_count], pop[cfg.strong_count :]
        strong_masks = _flip_masks(rng, len(strong) * cfg.strong_offspring, cfg.strong_flip_prob)
        common_masks = _flip_masks(rng, len(common) * cfg.common_offspring, p_common)
        children = [c ^ m for (c, _), ms in zip(strong, _chunks(strong_masks, cfg.strong_offspring)) for m in ms]
        children += [c ^ m for (c, _), ms in zip(common, _chunks(common_masks, cfg.common_offspring)) for m in ms]
        grown = pop + list(zip(children, ev(children, it)))
        pop = _maintain(grown, n, rng, ev, it)

        best = pop[0][1].score
        if best > runlog.best_scores[-1]:
            stagnant = 0
        else:
            stagnant += 1
        if stagnant >= cfg.stagnation_window:
            # antivirus: intensify exploitation and flush the weak half
            p_common = max(cfg.strong_flip_prob, p_common / 2)
            keep = n - n // 2
            fresh = _random_candidates(rng, n - keep)
            pop = _maintain(pop[:keep] + list(zip(fresh, ev(fresh, it))), n, rng, ev, it)
            stagnant = 0
        runlog.best_scores.append(pop[0][1].score)
        if progress:
            progress(it, pop[0][1].score)

    runlog.hits = ev.hits
    runlog.evaluations = ev.evaluations
    runlog.population = _population_snapshot(pop)
    runlog.wall_time = time.perf_counter() - t0
    return runlog


def _chunks(seq: list[int], size: int) -> Iterable[list[int]]:
    for i in range(0, len(seq), size):
        yield seq[i : i + size]


def _maintain(items, n: int, rng: np.random.Generator, ev: _Evaluator, it: int):
    """Dedup by candidate, keep the best ``n``, pad with fresh random candidates."""
    seen: dict[int, FitnessResult] = {}
    for c, f in items:
        seen.setdefault(c, f)
    pop = sorted(seen.items(), key=_rank_key)[:n]
    while len(pop) < n:
        fresh = [c for c in _random_candidates(rng, n - len(pop)) if c not in seen]
        for c, f in zip(fresh, ev(fresh, it)):
            seen[c] = f
            pop.append((c, f))
        pop.sort(key=_rank_key)
    return pop


# -- GA -----------------------------------------------------------------------


def ga_run(
    k: str | Construction,
    cfg: GaConfig | None = None,
    threads: int = 1,
    out: Optional[str] = None,
    timestamps: bool = True,
    progress: Optional[Callable[[int, int], None]] = None,
) -> RunLog:
    """Generational GA: elitism, tournament selection, one-point crossover, bit-flip mutation."""
    cfg = cfg or GaConfig()
    cfg.validate()
    con = get_construction(k)
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    ev = _Evaluator(con, "ga", cfg.seed, threads, out, timestamps)
    runlog = RunLog("ga", con.id, asdict(cfg))

    n = cfg.population_size
    cands = _random_candidates(rng, n)
    pop = sorted(zip(cands, ev(cands, 0)), key=_rank_key)
    runlog.best_scores.append(pop[0][1].score)

    for it in range(1, cfg.iterations + 1):
        n_children = n - cfg.elite_count
        n_pairs = (n_children + 1) // 2
        # all randomness for this generation, in a fixed order
        contestants = rng.integers(0, n, size=(2 * n_pairs, cfg.tournament_size))
        do_cross = rng.random(n_pairs) < cfg.crossover_prob
        cuts = rng.integers(1, CANDIDATE_BITS, size=n_pairs)
        masks = _flip_masks(rng, 2 * n_pairs, cfg.mutation_flip_prob) if cfg.mutation_flip_prob > 0 else [0] * (2 * n_pairs)

        # pop is sorted best-first, so the smallest index wins a tournament
        parents = [pop[int(row.min())][0] for row in contestants]
        children = []
        for p in range(n_pairs):
            x, y = parents[2 * p], parents[2 * p + 1]
            if do_cross[p]:
                low = (1 << (CANDIDATE_BITS - int(cuts[p]))) - 1
                high = _FULL ^ low
                x, y = (x & high) | (y & low), (y & high) | (x & low)
            children += [x ^ masks[2 * p], y ^ masks[2 * p + 1]]
        children = children[:n_children]
        elites = pop[: cfg.elite_count]
        pop = sorted(elites + list(zip(children, ev(children, it))), key=_rank_key)
        runlog.best_scores.append(pop[0][1].score)
        if progress:
            progress(it, pop[0][1].score)

    runlog.hits = ev.hits
    runlog.evaluations = ev.evaluations
    runlog.population = _population_snapshot(pop)
    runlog.wall_time = time.perf_counter() - t0
    return runlog


# -- comparison harness -------------------------------------------------------

COMPARE_FIELDS = ["construction", "algorithm", "runs", "distinct_hits", "total_hits", "evaluations"]


def compare(
    constructions: Sequence[str],
    algos: Sequence[str] = ("voa", "ga"),
    runs: int = 1,
    seed0: int = 0,
    population_size: int = 500,
    iterations: int = 100,
    threads: int = 1,
    voa_overrides: Optional[dict] = None,
    ga_overrides: Optional[dict] = None,
) -> list[dict]:
    """Distinct-parameter hit counts per (construction, algorithm) over seeds ``seed0 .. seed0+runs-1``."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    voa_overrides = dict(voa_overrides or {})
    # small budgets: keep at least one common virus
    voa_overrides.setdefault("strong_count", max(1, min(VoaConfig.strong_count, population_size - 1)))
    rows = []
    for cid in constructions:
        con = get_construction(cid)
        for algo in algos:
            distinct: set[tuple] = set()
            total = evals = 0
            for r in range(runs):
                seed = seed0 + r
                if algo == "voa":
                    cfg = VoaConfig(population_size=population_size, iterations=iterations, seed=seed, **voa_overrides)
                    rl = voa_run(con, cfg, threads=threads, timestamps=False)
                elif algo == "ga":
                    gcfg = GaConfig(population_size=population_size, iterations=iterations, seed=seed, **(ga_overrides or {}))
                    rl = ga_run(con, gcfg, threads=threads, timestamps=False)
                else:
                    raise ValueError(f"unknown algorithm {algo!r}")
                distinct |= rl.distinct_params()
                total += len(rl.hits)
                evals += rl.evaluations
            rows.append(
                {
                    "construction": con.id,
                    "algorithm": algo,
                    "runs": runs,
                    "distinct_hits": len(distinct),
                    "total_hits": total,
                    "evaluations": evals,
                }
            )
    return rows


def comparison_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COMPARE_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def audit_hits(hits: Iterable[HitRecord]) -> list[tuple[HitRecord, bool]]:
    """Re-verify every hit from scratch: self-dual and minimum distance 12."""
    from .analysis import is_self_dual

    out = []
    for h in hits:
        g = get_construction(h.construction).generator(h.candidate)
        ok = is_self_dual(g) and min_distance(g) == TARGET_D == h.d
        out.append((h, ok))
    return out
