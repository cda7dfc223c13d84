"""scikit-learn style wrappers, so the search composes with the usual tooling.

``CandidateFitness`` is a stateless transformer from candidates to fitness
features; ``VoaSearch`` and ``GaSearch`` run a search in ``fit`` and expose
the results as fitted attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .constructions import CANDIDATE_BITS, get_construction
from .search import GaConfig, VoaConfig, evaluate_fitness, ga_run, voa_run

_POW2 = 1 << np.arange(CANDIDATE_BITS - 1, -1, -1, dtype=np.int64)


def check_candidates(X) -> np.ndarray:
    """Validate candidates given as an (n, 36) 0/1 array or an (n,) / (n, 1) int array.

    Returns a 1-d int64 array of packed candidates (a_1 most significant).
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], str):
        from .constructions import to_candidate

        return np.array([to_candidate(s) for s in X], dtype=np.int64)
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    arr = check_array(arr, dtype=np.int64, ensure_2d=True)
    if arr.shape[1] == CANDIDATE_BITS:
        if ((arr != 0) & (arr != 1)).any():
            raise ValueError("bit-array candidates must contain only 0 and 1")
        return arr @ _POW2
    if arr.shape[1] == 1:
        v = arr[:, 0]
        if (v < 0).any() or (v >= 1 << CANDIDATE_BITS).any():
            raise ValueError(f"packed candidates must lie in [0, 2^{CANDIDATE_BITS})")
        return v
    raise ValueError(f"expected {CANDIDATE_BITS} bit columns or one packed column, got {arr.shape[1]}")


class CandidateFitness(TransformerMixin, BaseEstimator):
    """Maps candidates to ``[valid, score, confirmed_d12]`` for one construction."""

    def __init__(self, construction: str = "G2.1"):
        self.construction = construction

    def fit(self, X=None, y=None):
        self.construction_ = get_construction(self.construction).id
        if X is not None:
            self.n_features_in_ = np.asarray(X).shape[1] if np.ndim(X) == 2 else 1
        return self

    def transform(self, X):
        check_is_fitted(self, "construction_")
        cands = check_candidates(X)
        out = np.zeros((len(cands), 3), dtype=np.int64)
        for i, c in enumerate(cands):
            f = evaluate_fitness(self.construction_, int(c))
            out[i] = (f.valid, f.score, f.confirmed_d12)
        return out


class _SearchBase(BaseEstimator):
    def _finish(self, runlog):
        self.run_log_ = runlog
        self.hits_ = list(runlog.hits)
        self.best_scores_ = np.asarray(runlog.best_scores)
        self.best_score_ = int(self.best_scores_[-1])
        self.n_evaluations_ = runlog.evaluations
        return self

    def predict(self, X):
        """Fitness score of each candidate under the fitted construction."""
        check_is_fitted(self, "run_log_")
        return CandidateFitness(self.construction).fit().transform(X)[:, 1]

    def score(self, X=None, y=None):
        """Best fitness reached by the search (``X`` is ignored)."""
        check_is_fitted(self, "run_log_")
        return float(self.best_score_)


class VoaSearch(_SearchBase):
    """Virus optimisation search; ``fit`` takes no data."""

    def __init__(
        self,
        construction: str = "G2.1",
        population_size: int = 500,
        iterations: int = 100,
        strong_count: int = 10,
        strong_offspring: int = 5,
        common_offspring: int = 1,
        strong_flip_prob: float = 1 / 36,
        common_flip_prob: float = 3 / 36,
        stagnation_window: int = 5,
        seed: int = 0,
        threads: int = 1,
    ):
        self.construction = construction
        self.population_size = population_size
        self.iterations = iterations
        self.strong_count = strong_count
        self.strong_offspring = strong_offspring
        self.common_offspring = common_offspring
        self.strong_flip_prob = strong_flip_prob
        self.common_flip_prob = common_flip_prob
        self.stagnation_window = stagnation_window
        self.seed = seed
        self.threads = threads

    def fit(self, X=None, y=None):
        params = self.get_params()
        threads = params.pop("threads")
        construction = params.pop("construction")
        return self._finish(voa_run(construction, VoaConfig(**params), threads=threads, timestamps=False))


class GaSearch(_SearchBase):
    """Elitist generational GA; ``fit`` takes no data."""

    def __init__(
        self,
        construction: str = "G2.1",
        population_size: int = 500,
        iterations: int = 100,
        tournament_size: int = 3,
        crossover_prob: float = 0.9,
        mutation_flip_prob: float = 1 / 36,
        elite_count: int = 2,
        seed: int = 0,
        threads: int = 1,
    ):
        self.construction = construction
        self.population_size = population_size
        self.iterations = iterations
        self.tournament_size = tournament_size
        self.crossover_prob = crossover_prob
        self.mutation_flip_prob = mutation_flip_prob
        self.elite_count = elite_count
        self.seed = seed
        self.threads = threads

    def fit(self, X=None, y=None):
        params = self.get_params()
        threads = params.pop("threads")
        construction = params.pop("construction")
        return self._finish(ga_run(construction, GaConfig(**params), threads=threads, timestamps=False))
