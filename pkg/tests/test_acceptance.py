"""The acceptance gate: every headline criterion at full default scale.

One test per criterion; each prints its own PASS/FAIL line with the
runner's detail string so the gate reads like a checklist.  Scales and
widths live in the criterion registry, not here.
"""

import pytest

from tfnp_lab.suite import CRITERIA, SuiteConfig, run_criterion

FULL = SuiteConfig()

# wall-clock ceilings (seconds) where a target is stated
RUNTIME_CEILINGS = {
    "qp_walk_totality": 30.0,
    "pls_pipeline_roundtrip": 120.0,
    "game_engine": 60.0,
}


def _run(criterion_id):
    result = run_criterion(criterion_id, FULL)
    mark = "PASS" if result.passed else "FAIL"
    print(f"{mark} {criterion_id:<28} {result.detail} "
          f"[{result.elapsed_s:.1f}s]")
    assert result.passed, f"{criterion_id}: {result.detail}"
    ceiling = RUNTIME_CEILINGS.get(criterion_id)
    if ceiling is not None:
        assert result.elapsed_s < ceiling, (
            f"{criterion_id} took {result.elapsed_s:.1f}s, "
            f"ceiling {ceiling:.0f}s"
        )
    return result


def test_qp_walk_totality():
    result = _run("qp_walk_totality")
    assert result.counts["walks"] == 5000


def test_defix_no_fixed_class():
    result = _run("defix_no_fixed_class")
    assert result.counts["instances"] == 800


def test_localopt_normalization():
    result = _run("localopt_normalization")
    assert result.counts["instances"] == 1800  # 200 per (n, m) pair


def test_pls_pipeline_roundtrip():
    result = _run("pls_pipeline_roundtrip")
    assert result.counts["solutions"] > 0


def test_pigeon_to_qp_roundtrip():
    result = _run("pigeon_to_qp_roundtrip")
    assert result.counts["solutions"] > 0


def test_long_choice_majority():
    result = _run("long_choice_majority")
    assert result.counts["random"] == 4000
    assert result.counts["exhaustive"] == 1 << 16


def test_clc_equality_sound_case():
    result = _run("clc_equality_sound_case")
    assert result.counts["sequences"] > 0


def test_clc_gap_hunt():
    result = _run("clc_gap_hunt")
    # recovered/failure records are per sequence; the other two are per
    # instance, and 2 families x 2 widths x 200 seeds bounds those below
    examined = sum(
        result.counts.get(k, 0)
        for k in ("recovered", "failure", "prefix_collision", "no_sequences")
    )
    assert examined >= 2 * 2 * 200
    assert result.counts["sequences"] == (
        result.counts.get("recovered", 0) + result.counts.get("failure", 0)
    )


def test_rewrite_audit():
    result = _run("rewrite_audit")
    assert result.counts["audited"] > 0


def test_game_engine():
    result = _run("game_engine")
    assert result.counts["playouts"] == 1000


def test_verifier_oracle_agreement():
    result = _run("verifier_oracle_agreement")
    assert result.counts["instances"] == 500  # 100 per problem kind


def test_every_registered_criterion_is_gated():
    gated = {
        name.removeprefix("test_")
        for name in globals()
        if name.startswith("test_") and name != "test_every_registered_criterion_is_gated"
    }
    assert gated == set(CRITERIA)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
