import csv
import subprocess
import sys

import numpy as np
import pytest

from afcm.cli import main
from afcm.datasets import load_csv


def test_gen_toy_writes_loadable_csv(tmp_path, capsys):
    out = tmp_path / "rings.csv"
    assert main(["gen-toy", "rings", "--samples", "20", "--seed", "3", "--out", str(out)]) == 0
    assert "60 samples" in capsys.readouterr().out
    data = load_csv(out, label_column="label")
    assert (data.n_samples, data.n_features, data.n_classes) == (60, 2, 3)


def test_gen_toy_spirals_default_size(tmp_path):
    out = tmp_path / "s.csv"
    main(["gen-toy", "spirals", "--out", str(out)])
    assert load_csv(out, label_column="label").n_samples == 1000


def test_verify_equivalence_exit_codes(capsys):
    assert main(["verify-equivalence", "--instances", "50"]) == 0
    assert "discrepancy" in capsys.readouterr().out
    assert main(["verify-equivalence", "--instances", "50", "--threshold", "-1"]) == 1


def test_metrics_command(tmp_path, capsys):
    pred, truth = tmp_path / "p.csv", tmp_path / "t.csv"
    pred.write_text("label\n0\n1\n1\n1\n")
    truth.write_text("0\n0\n1\n1\n")
    assert main(["metrics", "--pred", str(pred), "--truth", str(truth)]) == 0
    assert "ACC: 75.00" in capsys.readouterr().out


def test_fit_dumps_graph(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["fit", "--data", "iris", "--k", "5", "--lam", "1000", "--repeats", "2",
                 "--out", str(out), "--dump-graph"])
    assert code == 0
    assert "best: afcm_k5_lam1000" in capsys.readouterr().out
    W = np.loadtxt(out / "affinity_k5.csv", delimiter=",")
    L = np.loadtxt(out / "laplacian_k5.csv", delimiter=",")
    assert W.shape == L.shape == (150, 150)
    np.testing.assert_array_equal(W, W.T)
    assert len(list((out / "trials").glob("*.json"))) == 2


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("algorithm = fcm_er\ngamma_list = 1, 10\nrepeats = 5\n")
    out = tmp_path / "grid"
    assert main(["grid", "--config", str(cfg), "--repeats", "2", "--out", str(out)]) == 0
    with open(out / "summary.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["cell_id"] for r in rows] == ["fcm_er_gamma1", "fcm_er_gamma10"]
    assert {r["n_trials"] for r in rows} == {"2"}


def test_environment_sets_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("AFCM_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["grid", "--algorithm", "kmeans", "--repeats", "1"]) == 0
    assert (tmp_path / "env" / "summary.csv").exists()


def test_ablation_command(tmp_path, capsys):
    assert main(["ablation", "--k-list", "8", "--lam-list", "1000", "--repeats", "2",
                 "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert "ablation1_k8" in text and "afcm_k8_lam1000" in text
    assert (tmp_path / "ablation.csv").exists()


def test_csv_dataset_from_cli(tmp_path):
    data = tmp_path / "toy.csv"
    main(["gen-toy", "spirals", "--samples", "30", "--out", str(data)])
    out = tmp_path / "res"
    assert main(["fit", "--data", str(data), "--label-column", "label", "--algorithm",
                 "degenerate-afcm", "--repeats", "1", "--out", str(out)]) == 0
    assert len(list(out.glob("scatter_*.csv"))) == 1


def test_bad_subcommand_exits():
    with pytest.raises(SystemExit):
        main(["nope"])


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "afcm.cli", "--help"],
                            capture_output=True, text=True)
    assert result.returncode == 0 and "verify-equivalence" in result.stdout
