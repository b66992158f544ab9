import json

from quadcorr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out.strip() else None, err


def test_constant(capsys):
    code, payload, _ = run_json(capsys, "constant", "--d", "7")
    assert code == 0
    assert payload == {"d": 7, "c": "1"}


def test_constant_fractional(capsys):
    code, payload, _ = run_json(capsys, "constant", "--d", "6")
    assert code == 0
    assert payload["c"] == "4/3"


def test_index(capsys):
    code, payload, _ = run_json(capsys, "index", "--d", "13")
    assert code == 0
    assert payload == {"d": 13, "index": 15}


def test_correlate(capsys):
    code, payload, _ = run_json(capsys, "correlate", "--d", "2", "--v1", "3", "--v2", "3")
    assert code == 0
    assert payload["n_value"] == 100
    assert payload["c_constant_num"] == 8
    assert payload["c_constant_den"] == 1
    assert set(payload) >= {"d", "v1", "v2", "n_value", "deviation"}


def test_correlate_with_oracle(capsys):
    code, payload, _ = run_json(
        capsys, "correlate", "--d", "5", "--v1", "4", "--v2", "4", "--oracle", "group")
    assert code == 0
    assert payload["oracle_matches"] is True
    assert payload["oracle_n_value"] == payload["n_value"]


def test_correlate_rational_arguments(capsys):
    code, payload, _ = run_json(
        capsys, "correlate", "--d", "2", "--v1", "2.5", "--v2", "5/2")
    assert code == 0
    assert payload["v1"] == "5/2"
    assert payload["v2"] == "5/2"


def test_correlate_dump_table(tmp_path, capsys):
    path = tmp_path / "table.csv"
    code, _, _ = run(capsys, "correlate", "--d", "2", "--v1", "3", "--v2", "3",
                     "--dump-table", str(path))
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "# D=2 doubled=0"
    assert lines[1] == "x,y,r"


def test_chi_single_value(capsys):
    code, payload, _ = run_json(capsys, "chi", "--d", "2", "--n", "3")
    assert code == 0
    assert payload["chi"] == -1


def test_cosets(capsys):
    code, payload, _ = run_json(capsys, "cosets", "--d", "17")
    assert code == 0
    assert payload["index_formula"] == 9
    assert payload["bfs_count"] == 9
    assert payload["closed"] is True
    assert payload["conditional"] is False
    assert len(payload["representatives"]) == 9
    assert all(len(m) == 4 and all(len(e) == 2 for e in m)
               for m in payload["representatives"])


def test_volume(capsys):
    code, payload, _ = run_json(capsys, "volume", "--d", "5")
    assert code == 0
    spread = payload["max_relative_spread"]
    assert spread <= payload["l2_truncation_error"] + 1e-9


def test_rcount(capsys):
    code, payload, _ = run_json(capsys, "rcount", "--d", "2", "--x", "2")
    assert code == 0
    assert payload["r_brute"] == payload["r_sym"] == 8


def test_table_c_golden(capsys):
    code, payload, _ = run_json(capsys, "table-c")
    assert code == 0
    got = {row["d"]: row["c"] for row in payload["rows"]}
    assert got == {
        2: "8", 3: "4", 5: "8", 6: "4/3", 7: "1",
        101: "8/95", 1001: "2/753", 10001: "1/11616",
        100001: "4/1462371", 1000001: "1/11832936",
    }


def test_table_g_small(capsys):
    code, payload, _ = run_json(capsys, "table-g", "--d", "2", "--v", "100")
    assert code == 0
    row = payload["rows"][0]
    assert row["v"] == "100"
    assert row["n_value"] >= 0


def test_table_f_small(capsys):
    code, payload, _ = run_json(capsys, "table-f", "--d", "2", "--xmax", "50",
                                "--checkpoints", "25", "50")
    assert code == 0
    assert [row["x"] for row in payload["rows"]] == [25, 50]


def test_validation_exit_code(capsys):
    code, _, err = run(capsys, "constant", "--d", "12")
    assert code == 2
    assert "squarefree" in err or "divisible" in err


def test_guard_exit_code(capsys):
    code, _, err = run(capsys, "correlate", "--d", "2", "--v1", "4000", "--v2", "4000",
                       "--memory-budget", "1000")
    assert code == 3


def test_oracle_guard_exit_code(capsys):
    code, _, err = run(capsys, "correlate", "--d", "2", "--v1", "99999", "--v2", "99999",
                       "--oracle", "group", "--memory-budget", str(8 << 30))
    assert code == 3


def test_env_memory_budget(capsys, monkeypatch):
    monkeypatch.setenv("QUADCORR_MEM_BUDGET", "1000")
    code, _, _ = run(capsys, "correlate", "--d", "2", "--v1", "4000", "--v2", "4000")
    assert code == 3


def test_csv_format(capsys):
    code, out, _ = run(capsys, "table-c", "--d", "2", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["d,c", "2,8", "3,4"]


def test_output_deterministic_across_threads(capsys):
    outputs = set()
    for t in ("1", "2", "5"):
        code, out, _ = run(capsys, "correlate", "--d", "2", "--v1", "150",
                           "--v2", "150", "--threads", t, "--format", "json")
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_verify_quick(capsys):
    code, payload, _ = run_json(capsys, "verify", "--dmax", "30", "--box", "5",
                                "--corr-limit", "3", "--samples", "40")
    assert code == 0
    assert payload["all_passed"] is True
