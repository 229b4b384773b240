import json
import subprocess
import sys

import pytest

from listfair.cli import ENV_SEED, main
from listfair.dataset import write_canonical
from listfair.sampling import write_sample_csv

from helpers import dataset_from_counts, individuals_from_pattern

DATASET_ROWS = [
    ("Aaron", "M", 500),
    ("Ana", "F", 400),
    ("Beatriz", "F", 300),
    ("Bruno", "M", 250),
    ("Carla", "F", 150),
]


@pytest.fixture()
def dataset_csv(tmp_path):
    path = tmp_path / "names.csv"
    write_canonical(dataset_from_counts(DATASET_ROWS, dataset_id="names"), path)
    return path


@pytest.fixture()
def worst20_csv(tmp_path):
    # 10 men then 10 women: the worst arrangement for N=20, n_f=10
    path = tmp_path / "worst20.csv"
    write_sample_csv(individuals_from_pattern("M" * 10 + "F" * 10), path)
    return path


def test_help_exits_zero_and_lists_subcommands(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("convert-ssa", "sample", "sort", "curve", "rnd", "parity", "audit", "experiment"):
        assert name in out


@pytest.mark.parametrize(
    "command, flags",
    [
        ("convert-ssa", ["--dir", "--years", "--out"]),
        ("sample", ["--dataset", "--n", "--mode", "--perc-fs", "--seed", "--stream", "--out"]),
        ("sort", ["--in", "--out"]),
        ("curve", ["--in", "--out"]),
        ("rnd", ["--in", "--step", "--normalizer", "--json", "--out"]),
        ("parity", ["--in", "--reference", "--json", "--out"]),
        ("audit", ["--in", "--page-sizes", "--perc-fd", "--out"]),
        ("experiment", ["--config", "--out", "--jobs"]),
    ],
)
def test_subcommand_help_documents_flags(capsys, command, flags):
    assert main([command, "--help"]) == 0
    out = capsys.readouterr().out
    for flag in flags:
        assert flag in out


def test_version_exits_zero(capsys):
    assert main(["--version"]) == 0
    assert "listfair" in capsys.readouterr().out


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 1
    assert "usage error" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == 1


def test_convert_ssa(tmp_path, capsys):
    (tmp_path / "yob2001.txt").write_text("Mary,F,7\nJohn,M,9\n", encoding="utf-8")
    (tmp_path / "yob2002.txt").write_text("Mary,F,3\n", encoding="utf-8")
    out = tmp_path / "ds.csv"
    assert main(["convert-ssa", "--dir", str(tmp_path), "--years", "2001:2002", "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert text == "name,gender,count\nJohn,M,9\nMary,F,10\n"

    assert main(["convert-ssa", "--dir", str(tmp_path), "--years", "2001", "--out", str(out)]) == 1
    assert main(["convert-ssa", "--dir", str(tmp_path), "--years", "2000:2002", "--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert "2000" in err


def test_sample_deterministic_and_modes(tmp_path, dataset_csv):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    base = ["sample", "--dataset", str(dataset_csv), "--n", "30", "--seed", "9"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    c = tmp_path / "c.csv"
    assert main(base + ["--stream", "5", "--out", str(c)]) == 0
    assert c.read_bytes() != a.read_bytes()

    strat = tmp_path / "strat.csv"
    assert (
        main(
            [
                "sample", "--dataset", str(dataset_csv), "--n", "30",
                "--perc-fs", "0.5", "--seed", "9", "--out", str(strat),
            ]
        )
        == 0
    )
    women = sum(
        1 for line in strat.read_text(encoding="utf-8").splitlines()[1:]
        if line.endswith(",F")
    )
    assert women == 15


def test_sample_usage_errors(tmp_path, dataset_csv, capsys, monkeypatch):
    monkeypatch.delenv(ENV_SEED, raising=False)
    out = str(tmp_path / "s.csv")
    base = ["sample", "--dataset", str(dataset_csv), "--n", "10", "--out", out]
    assert main(base) == 1  # no seed anywhere
    assert ENV_SEED in capsys.readouterr().err

    assert main(base + ["--seed", "1", "--mode", "proportional", "--perc-fs", "0.5"]) == 1
    assert main(base + ["--seed", "1", "--mode", "stratified"]) == 1
    assert main(base + ["--seed", "1", "--perc-fs", "1.5"]) == 2
    assert main(["sample", "--dataset", str(tmp_path / "nope.csv"), "--n", "10", "--seed", "1", "--out", out]) == 2


def test_sample_seed_from_environment(tmp_path, dataset_csv, monkeypatch):
    explicit = tmp_path / "x.csv"
    via_env = tmp_path / "y.csv"
    assert main(["sample", "--dataset", str(dataset_csv), "--n", "12", "--seed", "77", "--out", str(explicit)]) == 0
    monkeypatch.setenv(ENV_SEED, "77")
    assert main(["sample", "--dataset", str(dataset_csv), "--n", "12", "--out", str(via_env)]) == 0
    assert explicit.read_bytes() == via_env.read_bytes()

    monkeypatch.setenv(ENV_SEED, "not-a-number")
    assert main(["sample", "--dataset", str(dataset_csv), "--n", "12", "--out", str(via_env)]) == 1


def test_sort_idempotent(tmp_path, dataset_csv):
    sample = tmp_path / "sample.csv"
    once = tmp_path / "once.csv"
    twice = tmp_path / "twice.csv"
    assert main(["sample", "--dataset", str(dataset_csv), "--n", "25", "--seed", "3", "--out", str(sample)]) == 0
    assert main(["sort", "--in", str(sample), "--out", str(once)]) == 0
    assert main(["sort", "--in", str(once), "--out", str(twice)]) == 0
    assert once.read_bytes() == twice.read_bytes()
    names = [line.split(",")[1] for line in once.read_text(encoding="utf-8").splitlines()[1:]]
    assert names == sorted(names, key=str.upper)


def test_curve_to_stdout(capsys, worst20_csv):
    assert main(["curve", "--in", str(worst20_csv)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,perc_f"
    assert lines[1] == "1,0.0"
    assert lines[-1] == "20,0.5"


def test_rnd_json_and_text(capsys, worst20_csv):
    assert main(["rnd", "--in", str(worst20_csv), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["raw"] == pytest.approx(0.150515, abs=1e-6)
    assert payload["normalized"] == pytest.approx(1.0)
    assert payload["mode"] == "theoretical"
    assert [cp["k"] for cp in payload["checkpoints"]] == [10, 20]

    assert main(["rnd", "--in", str(worst20_csv)]) == 0
    text = capsys.readouterr().out
    assert "raw 0.150515" in text
    assert "normalized 1" in text

    assert main(["rnd", "--in", str(worst20_csv), "--normalizer", "fixed:0.301030"]) == 0
    text = capsys.readouterr().out
    assert "normalized 0.5" in text


def test_rnd_usage_and_data_errors(tmp_path, worst20_csv):
    assert main(["rnd", "--in", str(worst20_csv), "--normalizer", "empirical"]) == 1
    assert main(["rnd", "--in", str(worst20_csv), "--normalizer", "fixed:abc"]) == 1
    short = tmp_path / "short.csv"
    write_sample_csv(individuals_from_pattern("MMF"), short)
    assert main(["rnd", "--in", str(short)]) == 2  # shorter than one step


def test_parity_outputs(capsys, worst20_csv):
    assert main(["parity", "--in", str(worst20_csv), "--reference", "0.5", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passes"] is True
    assert payload["perc_f_sample"] == 0.5

    assert main(["parity", "--in", str(worst20_csv), "--reference", "0.99"]) == 0
    text = capsys.readouterr().out
    assert "passes false" in text

    assert main(["parity", "--in", str(worst20_csv), "--reference", "1.5"]) == 1


def test_audit_fixture_list(capsys, tmp_path):
    out = tmp_path / "audit.csv"
    assert (
        main(
            [
                "audit", "--in", "data/candidates/sp_federal.csv",
                "--page-sizes", "5,9,15", "--perc-fd", "0.31", "--out", str(out),
            ]
        )
        == 0
    )
    assert "below_cells 3" in capsys.readouterr().err
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "list_id,size,perc_fd,k1,perc_f,flag"
    assert lines[1] == "sp_federal,1603,0.31,5,0.0,below"
    assert lines[2] == "sp_federal,1603,0.31,9,0.0,below"
    assert lines[3] == "sp_federal,1603,0.31,15,0.0,below"

    assert main(["audit", "--in", "data/candidates/sp_federal.csv", "--page-sizes", "abc"]) == 1
    assert main(["audit", "--in", "data/candidates/sp_federal.csv", "--page-sizes", ""]) == 1


def test_experiment_round_trip(tmp_path, dataset_csv):
    config = {
        "dataset_paths": [str(dataset_csv)],
        "samples_per_cell": 6,
        "n": 30,
        "perc_fs_grid": [0.3, 0.6],
        "size_grid": [20, 30],
        "seed": 5,
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")

    for kind in ("percf", "rnd-grid", "rnd-size"):
        first = tmp_path / f"{kind}-1"
        second = tmp_path / f"{kind}-2"
        assert main(["experiment", kind, "--config", str(config_path), "--out", str(first)]) == 0
        assert main(["experiment", kind, "--config", str(config_path), "--out", str(second), "--jobs", "2"]) == 0
        for name in ("config.json", "raw.csv", "aggregate.csv", "curves.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    assert main(["experiment", "fourier", "--config", str(config_path), "--out", str(tmp_path / "x")]) == 1
    assert main(["experiment", "percf", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "x")]) == 2

    bad = tmp_path / "bad.json"
    bad.write_text('{"samples_per_cell": 0}', encoding="utf-8")
    assert main(["experiment", "percf", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "listfair", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "listfair" in proc.stdout
