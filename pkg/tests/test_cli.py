"""Golden-file regression tests for the command-line front end."""

import os
import pathlib

import pytest

from inertia.cli import run

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def _run_to_file(tmp_path, name, argv):
    out = tmp_path / name
    code = run(argv + ["--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


GOLDEN_CASES = [
    ("update_table1.csv", 0,
     ["update", "--model", str(FIXTURES / "table1_bayes_model.json"),
      "--event", "s1,s2", "--format", "csv"]),
    ("family_table5.csv", 0,
     ["family", "--model", str(FIXTURES / "table5_mixed_model.json"), "--format", "csv"]),
    ("audit_wiu.txt", 1,
     ["audit", "--family", str(FIXTURES / "wiu_gamma03_family.json"), "--format", "text"]),
    ("audit_bayes.txt", 0,
     ["audit", "--family", str(FIXTURES / "bayes_family.json"), "--format", "text"]),
    ("cps_extracted.json", 0,
     ["cps", "--family", str(FIXTURES / "coin_family.json")]),
    ("cps_eval.csv", 0,
     ["cps", "--model", str(FIXTURES / "coin_ladder.json"),
      "--event", "ep,l1,l2", "--format", "csv"]),
    ("ecps_eval.csv", 0,
     ["cps", "--model", str(FIXTURES / "coin_ladder.json"),
      "--event", "ep,l1,l2", "--epsilon", "0.2", "--format", "csv"]),
    ("ht_coin.json", 0,
     ["ht", "--model", str(FIXTURES / "coin_ladder.json")]),
    ("signal_a08_b14.csv", 0,
     ["signal", "--model", str(FIXTURES / "signal_a08_b14.json"), "--format", "csv"]),
    ("persuade_beta2.json", 0,
     ["persuade", "--model", str(FIXTURES / "persuasion_beta2.json")]),
    ("persuade_beta05.csv", 0,
     ["persuade", "--model", str(FIXTURES / "persuasion_beta05.json"), "--format", "csv"]),
    ("family_table1.csv", 0,
     ["family", "--model", str(FIXTURES / "table1_bayes_model.json"), "--format", "csv"]),
    ("family_table2_power08.csv", 0,
     ["family", "--model", str(FIXTURES / "table2_power08_model.json"), "--format", "csv"]),
    ("family_table2_power12.csv", 0,
     ["family", "--model", str(FIXTURES / "table2_power12_model.json"), "--format", "csv"]),
    ("family_table3.csv", 0,
     ["family", "--model", str(FIXTURES / "table3_sigmoid_model.json"), "--format", "csv"]),
    ("family_table4.csv", 0,
     ["family", "--model", str(FIXTURES / "table4_confirmation_model.json"), "--format", "csv"]),
    ("family_euclidean.csv", 0,
     ["family", "--model", str(FIXTURES / "euclidean_model.json"), "--format", "csv"]),
    ("family_wiu.csv", 0,
     ["family", "--model", str(FIXTURES / "wiu_gamma03_model.json"), "--format", "csv"]),
    ("signal_bayes.csv", 0,
     ["signal", "--model", str(FIXTURES / "signal_bayes.json"), "--format", "csv"]),
    ("signal_a08_b08.csv", 0,
     ["signal", "--model", str(FIXTURES / "signal_a08_b08.json"), "--format", "csv"]),
    ("signal_a12_b10.csv", 0,
     ["signal", "--model", str(FIXTURES / "signal_a12_b10.json"), "--format", "csv"]),
    ("audit_cycle.txt", 1,
     ["audit", "--family", str(FIXTURES / "cycle_family.json"), "--format", "text"]),
]


@pytest.mark.parametrize("golden_name, want_code, argv",
                         GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden_outputs(tmp_path, golden_name, want_code, argv):
    code, payload = _run_to_file(tmp_path, golden_name, argv)
    assert code == want_code
    assert payload == (GOLDEN / golden_name).read_bytes()


def test_outputs_are_deterministic(tmp_path):
    argv = ["family", "--model", str(FIXTURES / "table2_power08_model.json"), "--format", "csv"]
    _, first = _run_to_file(tmp_path, "a.csv", argv)
    _, second = _run_to_file(tmp_path, "b.csv", argv)
    assert first == second


def test_update_csv_row_matches_table(tmp_path):
    code, payload = _run_to_file(
        tmp_path, "row.csv",
        ["update", "--model", str(FIXTURES / "table1_bayes_model.json"),
         "--event", "s1,s2", "--format", "csv"],
    )
    assert code == 0
    values = [float(v) for v in payload.decode().strip().split(",")]
    assert abs(values[0] - 0.6316) < 5e-4 and abs(values[1] - 0.3684) < 5e-4


def test_audit_cycle_family_fails(tmp_path):
    code, payload = _run_to_file(
        tmp_path, "cycle.txt",
        ["audit", "--family", str(FIXTURES / "cycle_family.json"), "--format", "text"],
    )
    assert code == 1
    assert b"dynamic_coherence" in payload


def test_persuade_beta2_value(tmp_path):
    import json

    code, payload = _run_to_file(
        tmp_path, "sol.json",
        ["persuade", "--model", str(FIXTURES / "persuasion_beta2.json")],
    )
    assert code == 0
    sol = json.loads(payload)
    assert abs(sol["sender_value"] - 4 / 7) < 1e-9


def test_persuade_grid_regime(tmp_path):
    import json

    code, payload = _run_to_file(
        tmp_path, "sol.json",
        ["persuade", "--model", str(FIXTURES / "persuasion_beta2.json"),
         "--regime", "grid", "--resolution", "0.02"],
    )
    assert code == 0
    sol = json.loads(payload)
    assert sol["regime"] == "GridFallback"
    assert abs(sol["sender_value"] - 4 / 7) < 0.04


def test_missing_file_is_input_error():
    assert run(["update", "--model", "no_such.json", "--event", "s1"]) == 2


def test_unknown_state_is_input_error():
    assert run(["update", "--model", str(FIXTURES / "table1_bayes_model.json"),
                "--event", "nope"]) == 2


def test_usage_error_exits_nonzero():
    with pytest.raises(SystemExit) as info:
        run(["update"])  # missing required flags
    assert info.value.code != 0


def test_ht_sweep_reports_zero_deviation(tmp_path):
    import json

    code, payload = _run_to_file(
        tmp_path, "ht.json", ["ht", "--model", str(FIXTURES / "coin_ladder.json")]
    )
    assert code == 0
    out = json.loads(payload)
    assert out["sweep"]["events_checked"] == 63
    assert out["sweep"]["max_deviation"] <= 1e-9
    assert out["model"]["epsilon"] == 0.0
