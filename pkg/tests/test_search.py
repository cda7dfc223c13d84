import json

import numpy as np
import pytest

from sdforge.analysis import min_distance
from sdforge.catalog import HitRecord, load_hits, load_paper_tables
from sdforge.constructions import get_construction, to_candidate
from sdforge.search import (
    INVALID,
    FitnessResult,
    GaConfig,
    RunLog,
    VoaConfig,
    _Evaluator,
    audit_hits,
    compare,
    comparison_csv,
    evaluate_fitness,
    ga_run,
    partial_min_weight,
    voa_run,
)

ROWS = {r.id: r for r in load_paper_tables()}
SMALL_VOA = dict(population_size=40, iterations=6, strong_count=4)
SMALL_GA = dict(population_size=40, iterations=6)


# -- fitness -------------------------------------------------------------------


def test_fitness_examples():
    assert evaluate_fitness("G2.1", 0) == INVALID == FitnessResult(False, 0, False)
    assert evaluate_fitness("G3.1", to_candidate("100" + "0" * 33)) == FitnessResult(True, 2, False)
    c1 = ROWS["C1"]
    assert evaluate_fitness(c1.construction, c1.candidate) == FitnessResult(True, 12, True)


def test_fitness_invariants_and_cross_module_consistency():
    rng = np.random.default_rng(5)
    con = get_construction("G8.1")
    seen_valid = 0
    for c in rng.integers(0, 1 << 36, size=3000, dtype=np.uint64):
        f = evaluate_fitness(con, int(c))
        assert 0 <= f.score <= 12
        if not f.valid:
            assert f.score == 0 and not f.confirmed_d12
            continue
        seen_valid += 1
        d = min_distance(con.generator(int(c)))
        assert f.score >= min(d, 12)
        assert (f.score == 12 and f.confirmed_d12) == (d == 12)
    for row in list(ROWS.values())[:10]:
        if row.id == "C49":
            continue
        f = evaluate_fitness(row.construction, row.candidate)
        assert f.confirmed_d12 and min_distance(get_construction(row.construction).generator(row.candidate)) == 12


def test_partial_min_weight_stops_early():
    from sdforge.gf2 import BitMatrix

    best, completed = partial_min_weight(BitMatrix.identity(36))
    assert (best, completed) == (2, False)


# -- configuration -------------------------------------------------------------


@pytest.mark.parametrize(
    "kw",
    [dict(population_size=1), dict(strong_count=0), dict(strong_count=500), dict(iterations=-1), dict(strong_flip_prob=0.0), dict(common_offspring=0)],
)
def test_voa_config_rejects(kw):
    with pytest.raises(ValueError):
        VoaConfig(**kw).validate()


@pytest.mark.parametrize("kw", [dict(tournament_size=0), dict(elite_count=501), dict(crossover_prob=1.5), dict(population_size=1)])
def test_ga_config_rejects(kw):
    with pytest.raises(ValueError):
        GaConfig(**kw).validate()


# -- VOA -----------------------------------------------------------------------


def test_voa_zero_iterations():
    rl = voa_run("G2.1", VoaConfig(iterations=0, seed=1, **{k: v for k, v in SMALL_VOA.items() if k != "iterations"}), timestamps=False)
    assert len(rl.best_scores) == 1
    assert len(rl.population) == 40
    assert rl.evaluations >= 40


def test_voa_deterministic_bytes():
    a = voa_run("G2.1", VoaConfig(seed=7, **SMALL_VOA), timestamps=False).to_json(timing=False)
    b = voa_run("G2.1", VoaConfig(seed=7, **SMALL_VOA), timestamps=False).to_json(timing=False)
    c = voa_run("G2.1", VoaConfig(seed=8, **SMALL_VOA), timestamps=False).to_json(timing=False)
    assert a == b
    assert a != c


def test_voa_threads_do_not_change_results():
    a = voa_run("G8.1", VoaConfig(seed=3, **SMALL_VOA), threads=1, timestamps=False)
    b = voa_run("G8.1", VoaConfig(seed=3, **SMALL_VOA), threads=4, timestamps=False)
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_voa_population_size_and_elitism():
    rl = voa_run("G8.1", VoaConfig(seed=2, population_size=60, iterations=12, strong_count=5, stagnation_window=2), timestamps=False)
    assert len(rl.population) == 60
    assert len({p[0] for p in rl.population}) == 60
    assert all(x <= y for x, y in zip(rl.best_scores, rl.best_scores[1:]))
    scores = [p[2] for p in rl.population]
    assert scores == sorted(scores, reverse=True)


# -- GA ------------------------------------------------------------------------


def test_ga_deterministic_bytes():
    a = ga_run("G6.1", GaConfig(seed=11, **SMALL_GA), timestamps=False).to_json(timing=False)
    b = ga_run("G6.1", GaConfig(seed=11, **SMALL_GA), timestamps=False).to_json(timing=False)
    assert a == b


def test_ga_fixed_point():
    cfg = GaConfig(population_size=30, iterations=5, mutation_flip_prob=0.0, crossover_prob=0.0, elite_count=30, seed=4)
    rl0 = ga_run("G7.2", GaConfig(**{**cfg.__dict__, "iterations": 0}), timestamps=False)
    rl = ga_run("G7.2", cfg, timestamps=False)
    assert rl.population == rl0.population
    assert len(set(rl.best_scores)) == 1


def test_ga_elitism():
    rl = ga_run("G8.1", GaConfig(seed=9, population_size=50, iterations=10), timestamps=False)
    assert all(x <= y for x, y in zip(rl.best_scores, rl.best_scores[1:]))
    assert len(rl.population) == 50


# -- hits and audit ------------------------------------------------------------------


def test_evaluator_records_and_audits_table_hits(tmp_path):
    out = tmp_path / "hits.jsonl"
    ev = _Evaluator(get_construction("G1.1"), "voa", seed=0, out=str(out), timestamps=False)
    c1 = ROWS["C1"].candidate
    assert ev([c1, 0, c1], 3) == [FitnessResult(True, 12, True), INVALID, FitnessResult(True, 12, True)]
    assert ev.evaluations == 2
    assert len(ev.hits) == 1
    h = ev.hits[0]
    assert (h.family, h.gamma, h.beta, h.d, h.iteration) == ("W72_1", 0, 129, 12, 3)
    assert load_hits(out) == ev.hits
    assert all(ok for _, ok in audit_hits(ev.hits))


def test_audit_rejects_forged_hit():
    forged = HitRecord("G2.1", "000000001", "W72_1", 12, gamma=0, beta=1)
    ((_, ok),) = audit_hits([forged])
    assert not ok


def test_runlog_hits_always_audit():
    rl = voa_run("G8.1", VoaConfig(seed=0, population_size=60, iterations=10, strong_count=6), timestamps=False)
    assert all(ok for _, ok in audit_hits(rl.hits))


def test_runlog_json_has_rng_and_optional_timing():
    rl = RunLog("voa", "G2.1", {"seed": 1}, best_scores=[0], wall_time=1.5)
    assert json.loads(rl.to_json())["wall_time"] == 1.5
    d = json.loads(rl.to_json(timing=False))
    assert "wall_time" not in d and d["rng"] == "numpy.random.Generator(PCG64)"


# -- comparison harness ----------------------------------------------------------------


def test_compare_shape_and_csv():
    rows = compare(["G6.1", "G7.2", "G8.1"], ["voa"], runs=1, population_size=20, iterations=2)
    assert [r["construction"] for r in rows] == ["G6.1", "G7.2", "G8.1"]
    assert all(r["algorithm"] == "voa" and r["runs"] == 1 for r in rows)
    text = comparison_csv(rows)
    assert text.splitlines()[0] == "construction,algorithm,runs,distinct_hits,total_hits,evaluations"
    assert len(text.splitlines()) == 4


def test_compare_rejects_bad_input():
    with pytest.raises(ValueError):
        compare(["G6.1"], ["voa"], runs=0)
    with pytest.raises(ValueError):
        compare(["G6.1"], ["sa"], runs=1, population_size=10, iterations=0)


def test_distinct_params_dedup():
    a = HitRecord("G1.1", "000000001", "W72_1", 12, gamma=0, beta=129)
    b = HitRecord("G1.2", "000000002", "W72_1", 12, gamma=0, beta=129)
    c = HitRecord("G1.2", "000000003", "TYPE_II", 12, alpha=-2796)
    rl = RunLog("voa", "G1.1", {}, hits=[a, b, c])
    assert rl.distinct_params() == {("W72_1", 0, 129), ("TYPE_II", -2796)}


def test_compare_aggregate_is_union_of_runs(monkeypatch):
    import sdforge.search as search

    fake = {
        0: [HitRecord("G6.1", "000000001", "W72_1", 12, gamma=0, beta=1)],
        1: [HitRecord("G6.1", "000000002", "W72_1", 12, gamma=0, beta=1), HitRecord("G6.1", "000000003", "TYPE_II", 12, alpha=-1)],
    }

    def fake_voa(con, cfg, threads=1, timestamps=True):
        return RunLog("voa", con.id, {}, hits=fake[cfg.seed], evaluations=5)

    monkeypatch.setattr(search, "voa_run", fake_voa)
    (row,) = compare(["G6.1"], ["voa"], runs=2)
    assert (row["distinct_hits"], row["total_hits"], row["evaluations"]) == (2, 3, 10)
