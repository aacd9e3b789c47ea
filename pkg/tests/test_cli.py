"""Command-line interface: parsing, exit codes, reports, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from paretogof import CriticalValueTable, RandomStream, pareto_sample
from paretogof.cli import main, read_numeric_file
from paretogof.inference import _TABLE_FORMAT  # noqa: F401  (existence check)


@pytest.fixture()
def null_file(tmp_path):
    vals = pareto_sample(2.0, 300, RandomStream(777, 0)).values
    path = tmp_path / "data.txt"
    path.write_text("\n".join(repr(float(v)) for v in vals) + "\n")
    return path


# ---------------------------------------------------------------------------
# input parsing


def test_read_numeric_file_plain_and_csv_header(tmp_path):
    plain = tmp_path / "plain.txt"
    plain.write_text("2.5\n3.25\n\n4.0\n")
    np.testing.assert_array_equal(read_numeric_file(plain), [2.5, 3.25, 4.0])

    headed = tmp_path / "headed.csv"
    headed.write_text("earnings\n2.5,\n3.25\n")
    np.testing.assert_array_equal(read_numeric_file(headed), [2.5, 3.25])


def test_read_numeric_file_names_the_bad_line(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2.5\n3.0\noops\n4.0\n")
    from paretogof.cli import CliParseError

    with pytest.raises(CliParseError, match="line 3"):
        read_numeric_file(bad)


# ---------------------------------------------------------------------------
# test subcommand


def test_cmd_test_happy_path(null_file, capsys):
    code = main(["test", str(null_file), "--seed", "3", "--b", "400"])
    out = capsys.readouterr().out
    assert code == 0
    assert "seed: 3" in out
    assert "n = 300" in out
    assert out.count("/ mme:") == 7
    assert "recommended combination: MP2 or G with the MME fit" in out
    for label in ("KS", "CV", "AD", "ZA", "G", "MP1", "MP2"):
        assert label in out


def test_cmd_test_both_estimators_and_highlights(null_file, capsys):
    code = main(["test", str(null_file), "--seed", "3", "--b", "200",
                 "--estimator", "both"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("/ mme:") == 7 and out.count("/ mle:") == 7
    starred = [ln for ln in out.splitlines() if ln.rstrip().endswith("*")
               and "recommended" not in ln]
    assert len(starred) == 2
    assert all("/ mme" in ln for ln in starred)
    assert any("MP2" in ln for ln in starred) and any(" G " in ln for ln in starred)


def test_cmd_test_selects_tests_and_tuning(null_file, capsys):
    code = main(["test", str(null_file), "--seed", "1", "--b", "100",
                 "--tests", "mp2", "g", "--tuning-a", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "G(a=2)" in out and "MP2" in out
    assert "KS" not in out


def test_cmd_test_writes_report_file(null_file, tmp_path, capsys):
    report = tmp_path / "report.csv"
    code = main(["test", str(null_file), "--seed", "1", "--b", "100",
                 "--format", "csv", "--output", str(report)])
    assert code == 0
    assert report.exists()
    assert report.read_text().startswith("test,mme statistic,mme p-value")
    assert f"wrote {report}" in capsys.readouterr().out


def test_cmd_test_seed_is_generated_and_printed_when_omitted(null_file, capsys):
    code = main(["test", str(null_file), "--b", "50"])
    out = capsys.readouterr().out
    assert code == 0
    seed_line = next(ln for ln in out.splitlines() if ln.startswith("seed: "))
    assert int(seed_line.split()[1]) >= 0


# ---------------------------------------------------------------------------
# exit codes


def test_unparseable_line_exits_three(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("2.0\nnot-a-number\n")
    code = main(["test", str(f), "--seed", "1", "--b", "10"])
    err = capsys.readouterr().err
    assert code == 3
    assert "line 2" in err


def test_missing_file_exits_three(tmp_path, capsys):
    code = main(["test", str(tmp_path / "nope.txt"), "--seed", "1"])
    assert code == 3


def test_values_leaving_the_support_exit_four(tmp_path, capsys):
    f = tmp_path / "small.txt"
    f.write_text("2.0\n0.8\n3.0\n")
    code = main(["test", str(f), "--seed", "1", "--b", "10"])
    err = capsys.readouterr().err
    assert code == 4
    assert "0.8" in err


def test_nonpositive_scale_exits_four(null_file, capsys):
    code = main(["test", str(null_file), "--seed", "1", "--scale", "-2"])
    assert code == 4


def test_exponentiality_tests_on_the_moment_route_exit_four(null_file, capsys):
    code = main(["test", str(null_file), "--seed", "1", "--b", "10",
                 "--tests", "exp-ks"])  # default estimator is mme
    err = capsys.readouterr().err
    assert code == 4
    assert "bootstrap" in err or "route" in err or "MME" in err.upper()


def test_unknown_test_token_is_a_usage_error(null_file, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["test", str(null_file), "--tests", "kolmogorov"])
    assert exc.value.code == 2


def test_unknown_estimator_is_a_usage_error(null_file):
    with pytest.raises(SystemExit) as exc:
        main(["test", str(null_file), "--estimator", "map"])
    assert exc.value.code == 2


def test_missing_input_path_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["test"])
    assert exc.value.code == 2


def test_invalid_study_grid_is_a_usage_error(capsys):
    code = main(["power", "--alpha", "2.0", "--n", "10",
                 "--alternatives", "pareto:2", "--tests", "ks",
                 "--scale-factor", "0.1", "--seed", "1"])
    assert code == 2


# ---------------------------------------------------------------------------
# critical-values subcommand


def test_cmd_critical_values_saves_a_loadable_table(tmp_path, capsys):
    out_file = tmp_path / "cv.csv"
    code = main(["critical-values", "--n", "10", "12", "--reps", "1000",
                 "--tests", "ks", "--alpha", "0.05", "0.10",
                 "--seed", "11", "--output", str(out_file)])
    out = capsys.readouterr().out
    assert code == 0
    assert "alpha=0.05" in out and "n=12" in out
    table = CriticalValueTable.load(out_file)
    assert len(table) == 4  # two sizes x two levels
    assert table.seed == 11


# ---------------------------------------------------------------------------
# power subcommand


def _power_args(*extra):
    return ["power", "--n", "10", "--alternatives", "pareto:2",
            "--tests", "ks", "mp2", "--estimator", "mme",
            "--scale-factor", "0.1", "--seed", "4", *extra]


def test_cmd_power_prints_progress_and_table(capsys):
    code = main(_power_args())
    out = capsys.readouterr().out
    assert code == 0
    assert "n=10:" in out
    assert "total wall clock" in out
    assert "| alternative |" in out and "Pareto(2)" in out


def test_cmd_power_output_dir_and_manifest(tmp_path, capsys):
    out_dir = tmp_path / "study"
    code = main(_power_args("--output-dir", str(out_dir)))
    assert code == 0
    assert (out_dir / "power_n10.md").exists()
    assert (out_dir / "power_n10.csv").exists()
    man = json.loads((out_dir / "manifest.json").read_text())
    assert man["config"]["master_seed"] == 4
    assert man["config"]["tests"] == ["KS", "MP2"]


def test_cmd_power_reruns_are_byte_identical(tmp_path, capsys):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert main(_power_args("--output-dir", str(d1))) == 0
    assert main(_power_args("--output-dir", str(d2))) == 0
    capsys.readouterr()
    assert (d1 / "power_n10.csv").read_bytes() == (d2 / "power_n10.csv").read_bytes()
    assert (d1 / "power_n10.md").read_bytes() == (d2 / "power_n10.md").read_bytes()


def test_cmd_power_parallel_jobs_do_not_change_results(tmp_path, capsys, monkeypatch):
    d1, d2 = tmp_path / "seq", tmp_path / "par"
    assert main(_power_args("--output-dir", str(d1))) == 0
    monkeypatch.setenv("PARETOGOF_JOBS", "2")
    assert main(_power_args("--output-dir", str(d2))) == 0
    capsys.readouterr()
    assert (d1 / "power_n10.csv").read_bytes() == (d2 / "power_n10.csv").read_bytes()


def test_cmd_power_config_file_with_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "study.json"
    conf.write_text(json.dumps({
        "tests": ["ks"],
        "sample_sizes": [10],
        "alpha": 0.10,
        "alternatives": ["pareto:2"],
        "desk_scale": 0.1,
    }))
    out_dir = tmp_path / "out"
    code = main(["power", "--config", str(conf), "--tests", "mp2",
                 "--seed", "4", "--output-dir", str(out_dir)])
    assert code == 0
    man = json.loads((out_dir / "manifest.json").read_text())
    assert man["config"]["tests"] == ["MP2"]  # flag beat the file
    assert man["config"]["alpha"] == 0.10  # file value survived
    capsys.readouterr()


def test_cmd_power_bad_config_file_exits_three(tmp_path, capsys):
    conf = tmp_path / "broken.json"
    conf.write_text("{not json")
    assert main(["power", "--config", str(conf), "--seed", "1"]) == 3
    conf.write_text(json.dumps({"tests": ["bogus"], "alternatives": ["pareto:2"],
                                "sample_sizes": [10], "desk_scale": 0.1}))
    assert main(["power", "--config", str(conf), "--seed", "1"]) == 3


def test_cmd_power_bad_alternative_token_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["power", "--alternatives", "gamma"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["power", "--alternatives", "cosmic:1.0"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# golf subcommand


def test_cmd_golf_prints_datasets_and_tables(capsys):
    code = main(["golf", "--b", "150", "--seed", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PGA season earnings, 28 players above 3 500 000" in out
    assert "LIV season earnings, 28 players above 3 500 000" in out
    assert "average earnings 6 098 395 per player" in out
    assert "average earnings 7 989 306 per player" in out
    assert out.count("| test |") == 2


def test_cmd_golf_single_tour(capsys):
    code = main(["golf", "--tour", "liv", "--b", "100", "--seed", "2",
                 "--estimator", "mle"])
    out = capsys.readouterr().out
    assert code == 0
    assert "LIV season earnings" in out
    assert "PGA season earnings" not in out
    assert "mle" in out.lower()


def test_cmd_golf_is_deterministic(capsys):
    assert main(["golf", "--b", "100", "--seed", "8"]) == 0
    first = capsys.readouterr().out
    assert main(["golf", "--b", "100", "--seed", "8"]) == 0
    second = capsys.readouterr().out
    assert first == second


# ---------------------------------------------------------------------------
# installed entry point


def test_console_script_help_runs():
    proc = subprocess.run([sys.executable, "-m", "paretogof.cli", "--help"],
                          capture_output=True, text=True)
    # argparse --help exits zero and prints the subcommand list
    assert proc.returncode == 0
    assert "critical-values" in proc.stdout
