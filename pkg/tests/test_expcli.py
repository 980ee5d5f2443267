"""Tests for the command-line interface."""

import pytest

from cuckoo_thresholds.expcli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main, summary_path
from cuckoo_thresholds.hypergraph import read_hypergraph
from cuckoo_thresholds.sim_utils import SWEEP_SUMMARY_HEADER, TRIAL_CSV_HEADER


def _csv_lines(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_threshold_table(capsys):
    assert main(["threshold", "--k", "2..4", "--deterministic"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,xi_star,c_star,residual,lambda2,one_minus_exp_neg_k"
    assert lines[1].split(",")[:3] == ["2", "0", "0.5"]
    assert lines[1].split(",")[4] == "NULL"
    assert 0.917 <= float(lines[2].split(",")[2]) < 0.918
    assert len(lines) == 4


def test_timestamp_line_without_deterministic(capsys):
    main(["threshold", "--k", "3"])
    first = capsys.readouterr().out.splitlines()[0]
    assert first.startswith("# generated ")


def test_sweep_writes_trials_and_summary(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--k", "3", "--n", "300", "--c-min", "0.5", "--c-max", "1.0",
            "--step", "0.25", "--trials", "3", "--seed", "7", "--deterministic", "--out", str(out)]
    assert main(argv) == EXIT_OK
    first = out.read_bytes()
    summary = tmp_path / "sweep_summary.csv"
    summary_first = summary.read_bytes()

    lines = first.decode().splitlines()
    assert lines[0] == ",".join(TRIAL_CSV_HEADER)
    assert len(lines) == 1 + 9
    assert all(line.split(",")[-1] == "0" for line in lines[1:])
    summary_lines = summary_first.decode().splitlines()
    assert summary_lines[0] == ",".join(SWEEP_SUMMARY_HEADER)
    assert [line.split(",")[0] for line in summary_lines[1:]] == ["0.5", "0.75", "1"]
    assert "Sweep summary saved to" in capsys.readouterr().err

    assert main(argv) == EXIT_OK
    assert out.read_bytes() == first
    assert summary.read_bytes() == summary_first


def test_sweep_parallel_output_matches_serial(tmp_path):
    paths = []
    for workers in ("1", "2"):
        out = tmp_path / f"sweep_{workers}.csv"
        main(["sweep", "--k", "3", "--n", "200", "--c-min", "0.8", "--c-max", "0.9",
              "--step", "0.05", "--trials", "4", "--workers", workers,
              "--deterministic", "--out", str(out)])
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_summary_to_stderr_without_out(capsys):
    main(["sweep", "--k", "3", "--n", "200", "--c-min", "0.5", "--c-max", "0.5",
          "--step", "0.1", "--trials", "2", "--deterministic"])
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == ",".join(TRIAL_CSV_HEADER)
    assert ",".join(SWEEP_SUMMARY_HEADER) in captured.err


def test_summary_path():
    assert summary_path("runs/sweep.csv") == "runs/sweep_summary.csv"
    assert summary_path("runs/sweep") == "runs/sweep_summary"


def test_core_reads_and_writes_files(tmp_path, capsys):
    source = tmp_path / "graph.txt"
    source.write_text("5 3 3\n0 1 2\n0 1 2\n2 3 4\n")
    core_file = tmp_path / "core.txt"
    assert main(["core", "--in", str(source), "--core-out", str(core_file),
                 "--deterministic"]) == EXIT_OK
    lines = _csv_lines(capsys.readouterr().out)
    assert lines[0] == "n,m,k,core_n2,core_m2,core_density,orientable"
    assert lines[1] == "5,3,3,3,2,0.66666666666666663,1"
    core = read_hypergraph(core_file)
    assert core.edge_list() == [(0, 1, 2), (0, 1, 2)]


def test_core_missing_file_exits(tmp_path):
    with pytest.raises(SystemExit, match="not found"):
        main(["core", "--in", str(tmp_path / "absent.txt")])


def test_core_malformed_file_is_usage_error(tmp_path, capsys):
    source = tmp_path / "bad.txt"
    source.write_text("3 1 3\n2 1 0\n")
    assert main(["core", "--in", str(source)]) == EXIT_USAGE
    assert "ascending" in capsys.readouterr().err


def test_analysis_reports_error_rows(capsys):
    assert main(["analysis", "h", "--k", "2..3", "--beta", "0.7", "--deterministic"]) == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "k,beta,xi,h,error"
    assert lines[1].startswith("2,0.69999999999999996,NULL,NULL,")
    assert lines[2].endswith(",NULL")
    assert "1 row(s)" in captured.err


def test_analysis_large_inputs_have_no_errors(capsys):
    assert main(["analysis", "I", "--k", "3", "--z", "1000", "--deterministic"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,z,xi,t_z,I,error"
    assert lines[1].endswith(",NULL")
    assert main(["threshold", "--k", "998..1000", "--deterministic"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_oracle_check_passes(capsys):
    assert main(["oracle-check", "--k", "3", "--n-max", "8", "--trials", "300",
                 "--deterministic"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["k,n_max,checked,passed", "3,8,300,1"]


def test_oracle_check_rejects_large_n_max(capsys):
    assert main(["oracle-check", "--k", "3", "--n-max", "20", "--trials", "1"]) == EXIT_USAGE
    assert "n_max" in capsys.readouterr().err


def test_dupe_check_single_possible_edge(capsys):
    assert main(["dupe-check", "--k", "3", "--n", "3", "--m", "2", "--trials", "4",
                 "--deterministic"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "3,3,2,4,1,4,1"


@pytest.mark.parametrize("mode", [[], ["--offline"]])
def test_table_below_threshold_fills(mode, capsys):
    argv = ["table", "--n", "2000", "--k", "3", "--load", "0.5", "--deterministic"] + mode
    assert main(argv) == EXIT_OK
    fields = capsys.readouterr().out.splitlines()[1].split(",")
    assert fields[4] == fields[5] == "1000"
    assert fields[6] == "0"
    assert fields[8] == "0.5"
    assert fields[9] == "1"


def test_table_overload_fails(capsys):
    assert main(["table", "--n", "100", "--load", "1.1", "--max-steps", "20",
                 "--deterministic"]) == EXIT_OK
    fields = capsys.readouterr().out.splitlines()[1].split(",")
    assert int(fields[6]) >= 10
    assert fields[9] == "0"


def test_config_sets_defaults_and_flags_win(tmp_path, capsys):
    config = tmp_path / "config.yaml"
    config.write_text("experiments:\n  trials: 2\n  master_seed: 5\n")
    argv = ["sweep", "--config", str(config), "--k", "3", "--n", "100", "--c-min", "0.5",
            "--c-max", "0.5", "--step", "0.1", "--deterministic"]
    main(argv)
    rows = _csv_lines(capsys.readouterr().out)[1:]
    assert len(rows) == 2
    main(argv + ["--trials", "3"])
    assert len(_csv_lines(capsys.readouterr().out)[1:]) == 3


def test_missing_config_exits(tmp_path):
    with pytest.raises(SystemExit, match="Config file not found"):
        main(["threshold", "--config", str(tmp_path / "nope.yaml")])


def test_bad_k_range_is_usage_error(capsys):
    assert main(["threshold", "--k", "5..3"]) == EXIT_USAGE
    assert "Invalid integer range" in capsys.readouterr().err


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus"])
    assert excinfo.value.code == 2


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_VIOLATION, EXIT_USAGE}) == 3
