import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alebench.config import ConfigError, spec_from_dict
from alebench.harness import (
    CSV_HEADER,
    KINDS,
    ExperimentSpec,
    GridPoint,
    RunRecord,
    read_csv,
    resolve_point,
    role_rng,
    run_single,
    run_sweep,
    summarize,
    sweep_jobs,
    trial_seed,
    write_csv,
)
from alebench.optimizers import DivergenceError, GAConfig, LMSConfig, PSOConfig

# small enough to keep every run well under a second
FAST = dict(
    n_bits=60,
    trials=2,
    ga=GAConfig(population=8, generations=4),
    pso=PSOConfig(particles=6, iterations=4),
)


def fast_spec(kind="ber_vs_snr_awgn", **kw):
    return ExperimentSpec(kind=kind, **{**FAST, **kw})


def csv_text(records):
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


@pytest.mark.parametrize(
    "kind, expected",
    [
        ("lms_step_sweep", 3 * 1 * 10),
        ("population_sweep", 8 * 2 * 10),
        ("ga_rate_sweep", 2 * (7 + 9) * 1 * 10),
        ("mse_vs_snr", 11 * 3 * 10),
        ("ber_vs_snr_awgn", 11 * 3 * 10),
        ("ber_vs_snr_random", 11 * 3 * 10),
    ],
)
def test_record_count(kind, expected):
    spec = ExperimentSpec(kind=kind)
    assert len(sweep_jobs(spec)) == expected == len(spec.points()) * len(spec.algorithms) * spec.trials


def test_sweep_order_is_grid_then_algorithm_then_trial():
    spec = fast_spec(grid=(0.0, 4.0))
    records = run_sweep(spec)
    keys = [(r.grid_value, r.algorithm) for r in records]
    assert keys == [(g, a) for g in (0.0, 4.0) for a in ("lms", "ga", "pso") for _ in range(2)]
    seeds = [r.seed for r in records[:2]]
    assert all([r.seed for r in records[i : i + 2]] == seeds for i in range(0, len(records), 2))


def test_trial_seed_independent_of_grid_and_distinct_per_kind():
    seeds = {trial_seed(0, k, 0) for k in KINDS}
    assert len(seeds) == len(KINDS)
    assert trial_seed(0, "mse_vs_snr", 0) != trial_seed(0, "mse_vs_snr", 1)
    assert trial_seed(0, "mse_vs_snr", 3) == trial_seed(0, "mse_vs_snr", 3)
    assert 0 <= trial_seed(2**64 - 1, "mse_vs_snr", 0) < 2**64


def test_role_streams_differ():
    draws = {role: role_rng(5, role).integers(0, 2**62) for role in ("bits", "channel", "ga", "pso")}
    assert len(set(draws.values())) == 4
    with pytest.raises(ValueError):
        role_rng(5, "lms")


@pytest.mark.parametrize("algorithm", ["lms", "ga", "pso"])
def test_high_snr_is_error_free(algorithm):
    spec = ExperimentSpec(kind="ber_vs_snr_awgn", n_bits=500, ga=GAConfig(population=20, generations=30), pso=PSOConfig(particles=20, iterations=30))
    point = resolve_point(spec, GridPoint("snr_db", 60.0, 60.0), algorithm)
    rec = run_single(point, 123)
    assert rec.ber == 0.0
    assert rec.mse >= 0


def test_run_single_deterministic():
    spec = fast_spec()
    point = resolve_point(spec, GridPoint("snr_db", 0.0, 0.0), "ga")
    assert csv_text([run_single(point, 9)]) == csv_text([run_single(point, 9)])


def test_absurd_step_size_diverges_with_context():
    spec = fast_spec(kind="lms_step_sweep", grid=(10.0,))
    point = resolve_point(spec, spec.points()[0], "lms")
    with pytest.raises(DivergenceError) as info:
        run_single(point, 1)
    assert "lms_step_sweep/lms" in str(info.value)
    assert "step_size=10" in str(info.value)


def test_failed_point_becomes_error_row():
    spec = fast_spec(kind="lms_step_sweep", grid=(0.01, 10.0))
    records = run_sweep(spec)
    assert [r.failed for r in records] == [False, False, True, True]
    assert "diverged" in records[-1].error.lower() or "iteration" in records[-1].error.lower()
    line = csv_text(records).splitlines()[-1].split(",")
    assert line[6:] == ["", "", "", ""]


def test_mse_only_kinds_leave_ber_empty():
    records = run_sweep(fast_spec(kind="mse_vs_snr", grid=(0.0,), algorithms=("lms",)))
    assert all(r.ber is None and r.mse is not None for r in records)


def test_forced_noise_models():
    spec = fast_spec(kind="ber_vs_snr_random")
    assert resolve_point(spec, spec.points()[0], "lms").noise.nonlinear_enabled
    spec = fast_spec(kind="ber_vs_snr_awgn", noise=spec.noise.__class__(nonlinear_enabled=True))
    assert not resolve_point(spec, spec.points()[0], "lms").noise.nonlinear_enabled


def test_grid_parameters_are_applied():
    spec = ExperimentSpec(kind="population_sweep")
    p = resolve_point(spec, GridPoint("population", 90.0, -5.0), "pso")
    assert p.pso.particles == 90 and p.ga.population == 90
    spec = ExperimentSpec(kind="ga_rate_sweep")
    p = resolve_point(spec, GridPoint("crossover_prob", 0.4, 5.0), "ga")
    assert (p.ga.crossover_prob, p.ga.mutation_prob, p.noise.snr_db) == (0.4, 0.1, 5.0)
    p = resolve_point(spec, GridPoint("mutation_prob", 0.3, -5.0), "ga")
    assert (p.ga.crossover_prob, p.ga.mutation_prob) == (1.0, 0.3)


@pytest.mark.parametrize(
    "kind, grid",
    [("lms_step_sweep", ()), ("lms_step_sweep", (0.01, -1.0)), ("population_sweep", (3,)), ("population_sweep", (10.5,)), ("ga_rate_sweep", {"crossover_prob": (1.5,)}), ("mse_vs_snr", (math.nan,))],
)
def test_illegal_grids_rejected(kind, grid):
    with pytest.raises(ValueError):
        ExperimentSpec(kind=kind, grid=grid)


def test_bad_spec_fields():
    with pytest.raises(ValueError):
        ExperimentSpec(kind="nope")
    with pytest.raises(ValueError):
        ExperimentSpec(kind="mse_vs_snr", algorithms=("rls",))
    with pytest.raises(ValueError):
        ExperimentSpec(kind="mse_vs_snr", trials=0)


def test_csv_header_and_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"
    assert CSV_HEADER == tuple("experiment,algorithm,grid_param,grid_value,seed,snr_db,mse,ber,evaluations,wall_time_ms".split(","))


def test_csv_line_count(tmp_path):
    rec = RunRecord("mse_vs_snr", "lms", "snr_db", 0.0, 1, 0.0, 0.5, None, 10, None)
    write_csv([rec] * 330, tmp_path / "big.csv")
    assert len((tmp_path / "big.csv").read_text().splitlines()) == 331


def test_csv_write_error_has_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        write_csv([], target)


finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(
    grid_value=st.one_of(st.none(), finite),
    seed=st.integers(0, 2**64 - 1),
    snr=st.one_of(finite, st.just(math.inf)),
    mse_v=st.one_of(st.none(), st.floats(0, 1e6)),
    ber_v=st.one_of(st.none(), st.floats(0, 1)),
    evals=st.one_of(st.none(), st.integers(0, 10**9)),
    wall=st.one_of(st.none(), st.floats(0, 1e7)),
)
def test_csv_round_trip_exact(tmp_path_factory, grid_value, seed, snr, mse_v, ber_v, evals, wall):
    rec = RunRecord("ga_rate_sweep", "ga", "crossover_prob", grid_value, seed, snr, mse_v, ber_v, evals, wall)
    path = tmp_path_factory.mktemp("rt") / "r.csv"
    write_csv([rec, rec], path)
    assert read_csv(path) == [rec, rec]


def test_sweep_csv_byte_identical_and_parallel_agrees(tmp_path):
    spec = fast_spec(grid=(-2.0, 2.0))
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    write_csv(run_sweep(spec), a)
    write_csv(run_sweep(spec), b)
    write_csv(run_sweep(spec, jobs=2), c)
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_changing_ga_section_leaves_other_rows_identical():
    base = fast_spec(grid=(0.0,))
    changed = fast_spec(grid=(0.0,), ga=GAConfig(population=10, generations=3, mutation_prob=0.3))
    rows_a = csv_text(run_sweep(base)).splitlines()
    rows_b = csv_text(run_sweep(changed)).splitlines()
    keep = lambda rows: [r for r in rows if ",lms," in r or ",pso," in r]
    assert keep(rows_a) == keep(rows_b) and len(keep(rows_a)) == 4
    assert [r for r in rows_a if ",ga," in r] != [r for r in rows_b if ",ga," in r]


def test_timing_only_when_requested():
    spec = fast_spec(grid=(0.0,), algorithms=("lms",), trials=1)
    assert run_sweep(spec)[0].wall_time_ms is None
    timed = fast_spec(grid=(0.0,), algorithms=("lms",), trials=1, timing=True)
    assert run_sweep(timed)[0].wall_time_ms > 0


def test_summarize_means_over_trials():
    recs = [
        RunRecord("mse_vs_snr", "lms", "snr_db", 0.0, s, 0.0, m, None, 1, None)
        for s, m in ((1, 1.0), (2, 3.0))
    ] + [RunRecord("mse_vs_snr", "lms", "snr_db", 0.0, 3, 0.0, None, None, None, None)]
    (pt,) = summarize(recs, "mse")
    assert (pt.x, pt.y, pt.trials) == (0.0, 2.0, 2)
    assert summarize(recs, "ber") == []


# config loading


def test_kind_defaults_apply_under_config():
    spec = spec_from_dict({}, "population_sweep")
    assert spec.ga.generations == 200 and spec.pso.iterations == 200
    spec = spec_from_dict({"ga": {"generations": 7}}, "population_sweep")
    assert spec.ga.generations == 7


def test_overrides_win():
    spec = spec_from_dict({"experiment": "mse_vs_snr", "master_seed": 3, "trials": 4}, overrides={"master_seed": 9})
    assert (spec.kind, spec.master_seed, spec.trials) == ("mse_vs_snr", 9, 4)
    assert spec_from_dict({"experiment": "mse_vs_snr"}, kind="ber_vs_snr_awgn").kind == "ber_vs_snr_awgn"


@pytest.mark.parametrize(
    "data, path",
    [
        ({"ga": {"mutaton_prob": 0.1}}, "ga.mutaton_prob"),
        ({"bogus": 1}, "bogus"),
        ({"ga": {"mutation_prob": "high"}}, "ga.mutation_prob"),
        ({"ga": {"population": 2.5}}, "ga.population"),
        ({"pso": {"particles": 1}}, "pso"),
        ({"trials": 0}, "trials"),
        ({"grid": "abc"}, "grid"),
        ({"noise": {"tone_amp_range": [1, "x"]}}, "noise.tone_amp_range[1]"),
    ],
)
def test_config_errors_carry_key_path(data, path):
    with pytest.raises(ConfigError) as info:
        spec_from_dict(data, "mse_vs_snr")
    assert info.value.key_path == path


def test_config_requires_kind():
    with pytest.raises(ConfigError):
        spec_from_dict({})
    with pytest.raises(ConfigError):
        spec_from_dict({"experiment": "fig12"})


def test_infinite_snr_accepted():
    spec = spec_from_dict({"snr_db": "inf"}, "lms_step_sweep")
    assert spec.snr_db == math.inf
