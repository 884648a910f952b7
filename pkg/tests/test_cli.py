"""Command line: every verb driven through main(argv), exit codes pinned."""

import json

import pytest

from tfnp_lab.cli import main
from tfnp_lab.serialization import (
    canonical_dumps,
    certificate_to_json,
    instance_to_json,
)
from tfnp_lab.problems import Certificate

from conftest import qp_equality


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(path, obj):
    path.write_text(canonical_dumps(obj))
    return str(path)


def test_gen_writes_canonical_batch(tmp_path, capsys):
    out = tmp_path / "batch.json"
    code, _, _ = run(capsys, "gen", "--kind", "pigeon_random", "--n", "3",
                     "--seed", "5", "--count", "2", "-o", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    assert len(obj["instances"]) == 2
    assert out.read_text().rstrip("\n") == canonical_dumps(obj)


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "gen", "--kind", "kernel_equivalence", "--n", "3",
                   "--seed", "9", "-o", str(path))[0] == 0
    assert a.read_text() == b.read_text()


def test_gen_stdout_default(capsys):
    code, out, _ = run(capsys, "gen", "--kind", "equality_equivalence",
                       "--n", "2", "--seed", "0")
    assert code == 0
    assert json.loads(out)["instances"][0]["kind"] == "quotient_pigeon"


def test_gen_bad_kind_is_usage_error(capsys):
    code, _, err = run(capsys, "gen", "--kind", "sat", "--n", "3",
                       "--seed", "0")
    assert code == 2 and "error:" in err


def test_gen_width_out_of_range(capsys):
    assert run(capsys, "gen", "--kind", "pigeon_random", "--n", "11",
               "--seed", "0")[0] == 2


def test_reduce_then_solve_pipeline(tmp_path, capsys):
    batch = tmp_path / "pigeon.json"
    reduced = tmp_path / "reduced.json"
    run(capsys, "gen", "--kind", "pigeon_random", "--n", "3", "--seed", "4",
        "-o", str(batch))
    code, _, _ = run(capsys, "reduce", "--reduction", "pigeon_to_qp",
                     "-i", str(batch), "-o", str(reduced))
    assert code == 0
    payload = json.loads(reduced.read_text())
    assert payload["reduction"] == "pigeon_to_qp"
    assert payload["reduced"]["kind"] == "quotient_pigeon"
    # the solver accepts the reducer payload directly via "reduced"
    code, out, _ = run(capsys, "solve", "--oracle", "walk", "-i", str(reduced))
    assert code == 0
    result = json.loads(out)
    assert "certificate" in result and result["steps"] >= 0


def test_reduce_batch_index(tmp_path, capsys):
    batch = tmp_path / "batch.json"
    run(capsys, "gen", "--kind", "pigeon_random", "--n", "3", "--seed", "4",
        "--count", "3", "-o", str(batch))
    code, out, _ = run(capsys, "reduce", "--reduction", "pigeon_to_qp",
                       "-i", str(batch), "--index", "2")
    assert code == 0 and json.loads(out)["reduction"] == "pigeon_to_qp"
    assert run(capsys, "reduce", "--reduction", "pigeon_to_qp",
               "-i", str(batch), "--index", "9")[0] == 2


def test_solve_enumerate_with_limit(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    write_json(inst, instance_to_json(qp_equality(2, [2, 3, 2, 1])))
    code, out, _ = run(capsys, "solve", "--oracle", "enumerate",
                       "-i", str(inst), "--limit", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == len(payload["certificates"]) == 2


def test_solve_oracle_kind_guards(tmp_path, capsys):
    pigeon = tmp_path / "p.json"
    run(capsys, "gen", "--kind", "pigeon_random", "--n", "2", "--seed", "1",
        "-o", str(pigeon))
    assert run(capsys, "solve", "--oracle", "walk", "-i", str(pigeon))[0] == 2
    assert run(capsys, "solve", "--oracle", "majority",
               "-i", str(pigeon))[0] == 2


def test_verify_accept_and_reject(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    write_json(inst, instance_to_json(qp_equality(2, [2, 3, 2, 1])))
    good = tmp_path / "good.json"
    write_json(good, certificate_to_json(Certificate.qp(1, 3, 1)))
    code, out, _ = run(capsys, "verify", "-i", str(inst),
                       "--solution", str(good))
    assert code == 0 and json.loads(out) == {"accepted": True}
    bad = tmp_path / "bad.json"
    write_json(bad, certificate_to_json(Certificate.qp(2, 3)))
    code, out, _ = run(capsys, "verify", "-i", str(inst),
                       "--solution", str(bad))
    assert code == 1
    payload = json.loads(out)
    assert payload["accepted"] is False
    assert payload["code"] == "image_class_misses_vstar"


def test_verify_kind_mismatch_is_usage(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    write_json(inst, instance_to_json(qp_equality(2, [2, 3, 2, 1])))
    sol = tmp_path / "sol.json"
    write_json(sol, certificate_to_json(Certificate("local_opt", (1,))))
    assert run(capsys, "verify", "-i", str(inst),
               "--solution", str(sol))[0] == 2


def test_roundtrip_sound_reduction_exit_zero(tmp_path, capsys):
    batch = tmp_path / "batch.json"
    run(capsys, "gen", "--kind", "pigeon_random", "--n", "3", "--seed", "2",
        "--count", "2", "-o", str(batch))
    code, out, _ = run(capsys, "roundtrip", "--reduction", "pigeon_to_qp",
                       "-i", str(batch))
    assert code == 0
    reports = json.loads(out)["reports"]
    assert len(reports) == 2 and all(r["failures"] == 0 for r in reports)


def test_roundtrip_parallel_jobs_match_serial(tmp_path, capsys):
    batch = tmp_path / "batch.json"
    run(capsys, "gen", "--kind", "pigeon_random", "--n", "3", "--seed", "2",
        "--count", "2", "-o", str(batch))
    _, serial, _ = run(capsys, "roundtrip", "--reduction", "pigeon_to_qp",
                       "-i", str(batch))
    _, parallel, _ = run(capsys, "roundtrip", "--reduction", "pigeon_to_qp",
                         "-i", str(batch), "--jobs", "2")

    def strip_clocks(text):
        obj = json.loads(text)
        for r in obj["reports"]:
            r.pop("elapsed_s", None)
        return obj

    assert strip_clocks(serial) == strip_clocks(parallel)


def test_roundtrip_unsound_reduction_reports_but_exits_zero(tmp_path, capsys):
    batch = tmp_path / "kern.json"
    run(capsys, "gen", "--kind", "kernel_equivalence", "--n", "3",
        "--seed", "3", "--count", "3", "-o", str(batch))
    code, out, _ = run(capsys, "roundtrip", "--reduction", "qp_to_clc",
                       "-i", str(batch))
    assert code == 0  # failures here are findings, not errors
    assert len(json.loads(out)["reports"]) == 3


def test_hunt_writes_jsonl(tmp_path, capsys):
    out = tmp_path / "hunt.jsonl"
    code, _, _ = run(capsys, "hunt", "--family", "kernel", "--n", "3",
                     "--seeds", "3", "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    footer = json.loads(lines[-1])
    assert set(footer) == {"summary", "config"}
    for line in lines[:-1]:
        assert set(json.loads(line)) == {"record"}


def test_suite_prints_one_line_per_criterion(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    write_json(cfg, {
        "criteria": ["qp_walk_totality", "game_engine"],
        "overrides": {
            "qp_walk_totality": {"count": 3, "ns": [2]},
            "game_engine": {"count": 3, "ns": [2]},
        },
    })
    report_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "suite", "--config", str(cfg),
                       "-o", str(report_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("PASS qp_walk_totality")
    assert lines[1].startswith("PASS game_engine")
    assert lines[-1].startswith("PASS suite (2 criteria")
    assert json.loads(report_path.read_text())["passed"] is True


def test_suite_bad_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    write_json(cfg, {"criteria": ["nonsense"]})
    assert run(capsys, "suite", "--config", str(cfg))[0] == 2
    cfg2 = tmp_path / "cfg2.json"
    cfg2.write_text("{not json")
    assert run(capsys, "suite", "--config", str(cfg2))[0] == 2


def test_missing_input_file_is_usage_error(capsys):
    assert run(capsys, "solve", "--oracle", "walk",
               "-i", "/nonexistent/inst.json")[0] == 2


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["transmogrify"])
    assert exc.value.code == 2
