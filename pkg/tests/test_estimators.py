import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from sdforge.catalog import load_paper_tables
from sdforge.constructions import candidate_bits
from sdforge.estimators import CandidateFitness, GaSearch, VoaSearch, check_candidates

C1 = next(r for r in load_paper_tables() if r.id == "C1")


def test_check_candidates_forms():
    bits = np.array([candidate_bits(C1.candidate), [0] * 36])
    packed = check_candidates(bits)
    assert packed.tolist() == [C1.candidate, 0]
    assert check_candidates([C1.candidate, 0]).tolist() == [C1.candidate, 0]
    assert check_candidates(np.array([[C1.candidate]])).tolist() == [C1.candidate]
    assert check_candidates([format(C1.candidate, "09x")]).tolist() == [C1.candidate]


@pytest.mark.parametrize(
    "bad",
    [np.full((1, 36), 2), np.zeros((2, 5), dtype=int), [-1], [1 << 36], np.array([[np.nan] * 36])],
)
def test_check_candidates_rejects(bad):
    with pytest.raises(ValueError):
        check_candidates(bad)


def test_fitness_transformer():
    t = CandidateFitness("G1.1")
    with pytest.raises(NotFittedError):
        t.transform([0])
    out = t.fit_transform(np.array([candidate_bits(C1.candidate), [0] * 36]))
    assert out.tolist() == [[1, 12, 1], [0, 0, 0]]
    assert t.get_params() == {"construction": "G1.1"}
    assert clone(t).set_params(construction="G2.1").construction == "G2.1"


def test_fitness_transformer_unknown_construction():
    with pytest.raises(KeyError):
        CandidateFitness("G0.0").fit()


def test_transformer_in_pipeline():
    pipe = make_pipeline(CandidateFitness("G1.1"))
    assert pipe.fit_transform([C1.candidate]).tolist() == [[1, 12, 1]]


def test_voa_search_estimator():
    est = VoaSearch("G8.1", population_size=30, iterations=3, strong_count=3, seed=2)
    with pytest.raises(NotFittedError):
        est.score()
    est.fit()
    assert len(est.best_scores_) == 4
    assert est.score() == est.best_score_ == est.best_scores_[-1]
    assert est.n_evaluations_ == est.run_log_.evaluations
    again = clone(est).fit()
    assert again.run_log_.to_json(timing=False) == est.run_log_.to_json(timing=False)
    assert est.predict([0]).tolist() == [0]


def test_ga_search_estimator_params_reach_config():
    est = GaSearch("G6.1", population_size=20, iterations=2, tournament_size=2, seed=5).fit()
    assert est.run_log_.config["tournament_size"] == 2
    assert est.run_log_.algorithm == "ga"
    assert set(est.get_params()) >= {"construction", "population_size", "seed", "threads"}


def test_search_estimator_invalid_params():
    with pytest.raises(ValueError):
        VoaSearch(population_size=1).fit()
