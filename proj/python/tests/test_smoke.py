import math

import pytest

import symbiolife as sl


def test_genome_round_trip():
    g = sl.SeedGenome.from_compact("010/001/111")
    assert (g.rows, g.cols, g.live_count) == (3, 3, 5)
    assert sl.SeedGenome.from_compact(g.to_compact()) == g
    assert sl.parse_rle(sl.emit_rle(g)) == g


def test_malformed_input_raises():
    with pytest.raises(sl.MalformedRle):
        sl.parse_rle("x = 2, y = 2\n3o!")
    with pytest.raises(sl.ConfigError):
        sl.parse_config("pop_size = 1\n")
    with pytest.raises(sl.Error):
        sl.parse_config("no_such_key = 3\n")


def test_self_play_ties_and_empty_loses():
    g = sl.SeedGenome.random(5, 5, 0.5, seed=3)
    assert sl.run_game(g, g).result == "tie"
    empty = sl.SeedGenome(5, 5)
    out = sl.run_game(empty, empty, sl.GameFactors(), 1)
    assert out.red_score == out.blue_score == 0
    assert sl.fitness_vs_random(empty, opponents=10) <= 0.5


def test_statistics_match_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    a = [1.0, 2.0, 3.0, 4.0, 5.0]
    b = [2.0, 3.5, 3.0, 6.0, 7.5, 6.1]
    w = sl.welch_t_test(a, b)
    ref = scipy_stats.ttest_ind(a, b, equal_var=False)
    assert math.isclose(w["statistic"], ref.statistic, rel_tol=1e-9)
    assert math.isclose(w["p_value"], ref.pvalue, rel_tol=1e-7)
    p = sl.pearson_significance(a, b[:5])
    r, pv = scipy_stats.pearsonr(a, b[:5])
    assert math.isclose(p["r"], r, rel_tol=1e-12)
    assert math.isclose(p["p_value"], pv, rel_tol=1e-7)


def test_run_measure_report(tmp_path):
    c = sl.ExperimentConfig()
    c.experiment_type_num = 4
    c.pop_size = 12
    c.elite_size = 4
    c.num_generations = 2
    c.num_runs = 2
    c.prob_fusion = 0.2
    assert c.layer_name == "layer4"
    assert sl.parse_config(c.to_text()).pop_size == 12

    dirs = sl.cmd_run(c, tmp_path / "exp")
    assert [d.name for d in dirs] == ["run_00", "run_01"]
    with pytest.raises(sl.Error):
        sl.cmd_run(c, tmp_path / "exp")

    rows = sl.measure_vs_random([tmp_path / "exp"], top=3, opponents=4)
    assert len(rows) == 2 * 3 * 3
    assert all(0.0 <= r["value"] <= 1.0 for r in rows)
    past = sl.measure_vs_past_winners([tmp_path / "exp"], top=3)
    assert past[0]["value"] == 0.0 and past[0]["rank"] is None

    written = sl.cmd_report([tmp_path / "exp"], tmp_path / "report")
    names = {p.name for p in written}
    assert {"area.svg", "fusion_summary.csv", "final_summary.csv"} <= names
