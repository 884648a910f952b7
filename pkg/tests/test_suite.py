"""The criterion registry and its configuration plumbing.  Full-scale runs
live in test_acceptance; here everything runs tiny."""

import pytest

from tfnp_lab.suite import (
    CRITERIA,
    CriterionResult,
    SuiteConfig,
    SuiteConfigError,
    load_config,
    run_criterion,
    run_suite,
    suite_report_to_json,
)

TINY = SuiteConfig(scale=0.01, overrides={
    "qp_walk_totality": {"count": 5, "ns": [2, 3]},
    "clc_gap_hunt": {"count": 3, "ns": [3]},
    "game_engine": {"count": 5, "ns": [2]},
    "verifier_oracle_agreement": {"count": 2, "ns": [2]},
    "long_choice_majority": {"count": 5, "ns": [3]},
    "pls_pipeline_roundtrip": {"count": 3, "ns": [2, 3]},
    "clc_equality_sound_case": {"count": 5, "ns": [3]},
})


def test_registry_ids_are_stable():
    assert set(CRITERIA) == {
        "qp_walk_totality", "defix_no_fixed_class", "localopt_normalization",
        "pls_pipeline_roundtrip", "pigeon_to_qp_roundtrip",
        "long_choice_majority", "clc_equality_sound_case", "clc_gap_hunt",
        "rewrite_audit", "game_engine", "verifier_oracle_agreement",
    }
    for crit in CRITERIA.values():
        assert crit.count >= 1 and all(2 <= n <= 10 for n in crit.ns)


def test_load_config_defaults():
    cfg = load_config({})
    assert cfg == SuiteConfig()


def test_load_config_full():
    cfg = load_config({
        "criteria": ["game_engine"],
        "scale": 0.5,
        "overrides": {"game_engine": {"count": 2, "ns": [2]}},
        "base_seed": 7,
    })
    assert cfg.criteria == ("game_engine",)
    assert cfg.scale == 0.5
    assert cfg.base_seed == 7


def test_load_config_rejects_unknown_keys():
    with pytest.raises(SuiteConfigError):
        load_config({"scale": 1.0, "retries": 3})
    with pytest.raises(SuiteConfigError):
        load_config(["game_engine"])


def test_config_guards():
    with pytest.raises(SuiteConfigError):
        SuiteConfig(criteria=("fast_and_loose",))
    with pytest.raises(SuiteConfigError):
        SuiteConfig(overrides={"game_engine": {"ns": [11]}})
    with pytest.raises(SuiteConfigError):
        SuiteConfig(overrides={"unknown": {"count": 5}})
    with pytest.raises(SuiteConfigError):
        SuiteConfig(overrides={"game_engine": {"count": 0}})
    with pytest.raises(SuiteConfigError):
        SuiteConfig(scale=0)
    with pytest.raises(SuiteConfigError):
        SuiteConfig(scale="full")


def test_overrides_shrink_the_run():
    result = run_criterion("qp_walk_totality", TINY)
    assert result.passed
    assert result.counts["walks"] == 10  # 5 per width, two widths


def test_scale_shrinks_without_overrides():
    result = run_criterion("defix_no_fixed_class", SuiteConfig(
        scale=0.01, overrides={"defix_no_fixed_class": {"ns": [2]}}
    ))
    assert result.passed
    assert result.counts["instances"] == 2  # round(200 * 0.01) per width


def test_crashing_criterion_reports_failure(monkeypatch):
    from tfnp_lab import suite as suite_mod

    def boom(count, ns, seed):
        raise RuntimeError("criterion exploded")

    crit = CRITERIA["game_engine"]
    monkeypatch.setitem(
        suite_mod.CRITERIA, "game_engine",
        type(crit)(crit.criterion_id, crit.description, crit.count, crit.ns,
                   boom),
    )
    result = run_criterion("game_engine", SuiteConfig())
    assert not result.passed
    assert "crashed" in result.detail and "criterion exploded" in result.detail


def test_run_suite_subset_and_report_shape():
    config = SuiteConfig(
        criteria=("qp_walk_totality", "game_engine"),
        scale=0.01,
        overrides=dict(TINY.overrides),
    )
    report = run_suite(config)
    assert [r.criterion_id for r in report.results] == [
        "qp_walk_totality", "game_engine",
    ]
    assert report.passed == all(r.passed for r in report.results)
    obj = suite_report_to_json(report)
    assert set(obj) == {"passed", "elapsed_s", "results"}
    for row in obj["results"]:
        assert set(row) == {"criterion", "passed", "detail", "counts",
                            "elapsed_s"}


def test_empty_criteria_tuple_runs_nothing():
    report = run_suite(SuiteConfig(criteria=()))
    assert report.results == () and report.passed


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_every_criterion_passes_at_micro_scale(cid):
    result = run_criterion(cid, TINY)
    assert isinstance(result, CriterionResult)
    assert result.passed, f"{cid}: {result.detail}"
    assert result.detail
