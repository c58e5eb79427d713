import json

import pytest
import yaml

from smiselect.cli import build_config, main, make_parser
from smiselect.harness import SplitSpec
from smiselect.synth import make_blob_setting, write_blob_files


@pytest.fixture(scope="module")
def blob_files(tmp_path_factory):
    corpus, table, queries = make_blob_setting(seed=33, n_rare=22, n_common=110,
                                               dim=6, n_queries=4)
    return write_blob_files(tmp_path_factory.mktemp("blobs"), corpus, table, queries)


def base_args(blob_files, *extra):
    return [
        "--dataset", str(blob_files["dataset"]),
        "--rare-label", "rare",
        "--embeddings", str(blob_files["embeddings"]),
        "--queries", str(blob_files["queries"]),
        "--budget", "8",
        "--epochs", "5",
        "--bootstrap-size", "4",
        "--test-fraction", "0.15",
        *extra,
    ]


# -- config assembly ---------------------------------------------------------


def test_flags_override_config_file(tmp_path):
    cfg_file = tmp_path / "run.yaml"
    cfg_file.write_text(yaml.safe_dump({
        "strategy": "random", "budget": 99, "trials": 3, "rare-label": "spam",
    }))
    parser = make_parser()
    args = parser.parse_args(["experiment", "--config", str(cfg_file), "--budget", "10"])
    config = build_config(args)
    assert config.budget == 10       # flag wins
    assert config.trials == 3        # file value kept
    assert config.strategy == "random"
    assert config.rare_label == "spam"  # dashed file key normalized


def test_config_file_unknown_key(tmp_path):
    cfg_file = tmp_path / "run.yaml"
    cfg_file.write_text("bogus_key: 1\n")
    parser = make_parser()
    args = parser.parse_args(["experiment", "--config", str(cfg_file)])
    assert main(["experiment", "--config", str(cfg_file)]) == 2


def test_split_flag_parsing():
    parser = make_parser()
    args = parser.parse_args(["experiment", "--split", "85,808,151,143"])
    config = build_config(args)
    assert config.split == SplitSpec(85, 808, 151, 143)


def test_config_file_seeds_list(tmp_path):
    cfg_file = tmp_path / "run.yaml"
    cfg_file.write_text(yaml.safe_dump({"seeds": [3, 9, 27]}))
    parser = make_parser()
    args = parser.parse_args(["experiment", "--config", str(cfg_file)])
    assert build_config(args).trial_seeds() == [3, 9, 27]


# -- subcommands -------------------------------------------------------------


def test_select_prints_ids_and_composition(blob_files, capsys):
    rc = main(["select", *base_args(blob_files, "--strategy", "gcmi", "--seed", "4")])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["selected_ids"]) == 8
    assert sum(payload["selection_composition"].values()) == 8
    assert payload["strategy"] == "gcmi"


def test_experiment_writes_outputs(blob_files, tmp_path, capsys):
    out = tmp_path / "run1"
    rc = main([
        "experiment", *base_args(blob_files, "--strategy", "flqmi", "--trials", "2",
                                 "--seed", "1", "--output", str(out)),
    ])
    assert rc == 0
    assert (out / "results.csv").exists()
    assert (out / "provenance.json").exists()
    prov = json.loads((out / "provenance.json").read_text())
    assert len(prov["cells"][0]["trials"]) == 2
    assert "accuracy" in capsys.readouterr().out


def test_ablate_writes_one_row_per_fraction(blob_files, tmp_path):
    out = tmp_path / "run2"
    rc = main([
        "ablate", *base_args(blob_files, "--strategy", "gcmi", "--trials", "1",
                             "--output", str(out), "--fractions", "0.5,1.0"),
    ])
    assert rc == 0
    lines = (out / "results.csv").read_text().splitlines()
    assert len(lines) == 3  # header + 2 fractions
    prov = json.loads((out / "provenance.json").read_text())
    assert [c["query_fraction"] for c in prov["cells"]] == [0.5, 1.0]


def test_experiment_json_table_format(blob_files, tmp_path):
    out = tmp_path / "run3"
    rc = main([
        "experiment", *base_args(blob_files, "--strategy", "random", "--trials", "1",
                                 "--output", str(out), "--format", "json"),
    ])
    assert rc == 0
    assert (out / "results.json").exists()


# -- exit codes --------------------------------------------------------------


def test_exit_code_config_error(blob_files):
    # budget exceeds the pool
    rc = main(["select", *base_args(blob_files, "--strategy", "random",
                                    "--budget", "100000")])
    assert rc == 2


def test_exit_code_missing_file(blob_files):
    args = base_args(blob_files, "--strategy", "random")
    idx = args.index("--dataset")
    args[idx + 1] = "/nonexistent/nope.csv"
    assert main(["select", *args]) == 4


def test_exit_code_format_error(blob_files, tmp_path):
    bad = tmp_path / "ragged.txt"
    bad.write_text("a 1 2 3\nb 1 2\n")
    args = base_args(blob_files, "--strategy", "random")
    idx = args.index("--embeddings")
    args[idx + 1] = str(bad)
    assert main(["select", *args]) == 3


def test_unknown_strategy_rejected_by_parser(blob_files):
    with pytest.raises(SystemExit):
        make_parser().parse_args(["select", "--strategy", "bogus"])


def test_cross_process_provenance_byte_identical(blob_files, tmp_path):
    import subprocess
    import sys

    argv = [
        sys.executable, "-m", "smiselect.cli", "experiment",
        *base_args(blob_files, "--strategy", "flqmi", "--trials", "2", "--seed", "8"),
    ]
    blobs = []
    for run in ("p1", "p2"):
        out = tmp_path / run
        proc = subprocess.run([*argv, "--output", str(out)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        blobs.append((out / "provenance.json").read_bytes())
    assert blobs[0] == blobs[1]
