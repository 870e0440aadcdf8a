import hashlib
import json

import numpy as np
import pytest

from conftest import make_tiny_sweep
from torquelearn.cli import main
from torquelearn.robot import default_robot, save_robot


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """One generated dataset shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    sweep = root / "sweep.params"
    sweep.write_text(make_tiny_sweep().to_text())
    robot = root / "robot.params"
    save_robot(default_robot(), robot)
    data = root / "data.csv"
    assert main(["gen-data", "--robot", str(robot), "--sweep", str(sweep),
                 "--out", str(data), "--seed", "3"]) == 0
    return root


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestGenData:
    def test_csv_contract(self, workdir):
        lines = (workdir / "data.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert len(header) == 25
        assert header[0] == "t" and header[1] == "q1" and header[-1] == "tau6"
        assert all(len(line.split(",")) == 25 for line in lines[1:])

    def test_rerun_is_byte_identical(self, workdir):
        out = workdir / "data_again.csv"
        assert main(["gen-data", "--robot", str(workdir / "robot.params"),
                     "--sweep", str(workdir / "sweep.params"),
                     "--out", str(out), "--seed", "3"]) == 0
        assert _digest(out) == _digest(workdir / "data.csv")

    def test_limit_violation_exits_2(self, workdir, capsys):
        bad = workdir / "bad_sweep.params"
        text = make_tiny_sweep(stop=[1.0, 2.9, 1.0, 1.0, 1.0, 1.0]).to_text()
        bad.write_text(text)
        code = main(["gen-data", "--sweep", str(bad),
                     "--out", str(workdir / "nope.csv")])
        assert code == 2
        assert "joint 2" in capsys.readouterr().err

    def test_unknown_config_key_exits_2(self, workdir):
        bad = workdir / "bad_robot.params"
        bad.write_text(default_robot().to_text() + "motor1.gain = 2\n")
        assert main(["gen-data", "--robot", str(bad),
                     "--out", str(workdir / "nope.csv")]) == 2


class TestTrain:
    def test_defaults_and_metrics_schema(self, workdir):
        metrics_path = workdir / "metrics_single.json"
        code = main(["train", "--data", str(workdir / "data.csv"), "--arch", "single",
                     "--seed", "5", "--out-metrics", str(metrics_path),
                     "--out-model", str(workdir / "model_single.json"),
                     "--out-preds", str(workdir / "preds.csv")])
        assert code == 0
        metrics = json.loads(metrics_path.read_text())
        hp = metrics["hyperparameters"]
        assert hp == {"hidden_sizes": [30], "optimizer": "adam",
                      "learning_rate": 0.001, "epochs": 10, "batch_size": 64,
                      "train_fraction": 0.7}
        assert metrics["scaled"] is True
        assert len(metrics["curves"]["train_mse"]) == 10
        assert len(metrics["curves"]["test_mse"]) == 10
        assert metrics["avg_test_mse"] == pytest.approx(
            np.mean(metrics["curves"]["test_mse"]))
        assert metrics["final_test_mse"] == metrics["curves"]["test_mse"][-1]

    def test_no_scale_recorded(self, workdir):
        metrics_path = workdir / "metrics_noscale.json"
        assert main(["train", "--data", str(workdir / "data.csv"), "--arch", "single",
                     "--no-scale", "--seed", "5",
                     "--out-metrics", str(metrics_path)]) == 0
        metrics = json.loads(metrics_path.read_text())
        assert metrics["scaled"] is False

    def test_multiple_architecture_defaults(self, workdir):
        metrics_path = workdir / "metrics_multiple.json"
        assert main(["train", "--data", str(workdir / "data.csv"),
                     "--arch", "multiple", "--epochs", "3",
                     "--out-metrics", str(metrics_path)]) == 0
        metrics = json.loads(metrics_path.read_text())
        assert metrics["hyperparameters"]["hidden_sizes"] == [5, 15, 30]
        assert set(metrics["subnet_curves"]) == {"a", "b", "c"}

    def test_rerun_byte_identical(self, workdir):
        args = ["train", "--data", str(workdir / "data.csv"), "--arch", "cascade",
                "--epochs", "2", "--seed", "8"]
        p1, p2 = workdir / "m1.json", workdir / "m2.json"
        assert main(args + ["--out-metrics", str(p1),
                            "--out-model", str(workdir / "mod1.json")]) == 0
        assert main(args + ["--out-metrics", str(p2),
                            "--out-model", str(workdir / "mod2.json")]) == 0
        assert _digest(p1) == _digest(p2)
        assert _digest(workdir / "mod1.json") == _digest(workdir / "mod2.json")

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_divergence_exits_3(self, workdir, capsys):
        code = main(["train", "--data", str(workdir / "data.csv"), "--arch", "single",
                     "--optimizer", "sgd", "--lr", "1000000", "--epochs", "2"])
        assert code == 3
        assert "epoch" in capsys.readouterr().err

    def test_missing_data_exits_1(self, workdir):
        assert main(["train", "--data", str(workdir / "nonexistent.csv"),
                     "--arch", "single"]) == 1


class TestHpo:
    def test_study_file_and_best(self, workdir):
        study_path = workdir / "study.json"
        code = main(["hpo", "--data", str(workdir / "data.csv"), "--arch", "single",
                     "--trials", "10", "--seed", "2", "--epochs", "2",
                     "--out-study", str(study_path),
                     "--out-metrics", str(workdir / "metrics_best.json")])
        assert code == 0
        study = json.loads(study_path.read_text())
        assert len(study["trials"]) == 10
        assert study["architecture"] == "single"
        values = [t["value"] for t in study["trials"] if t["status"] == "complete"]
        assert study["trials"][study["best_index"]]["value"] == min(values)
        # the retrained best run reproduces the best trial's objective
        best_metrics = json.loads((workdir / "metrics_best.json").read_text())
        assert best_metrics["avg_test_mse"] == pytest.approx(min(values), rel=1e-12)

    def test_rerun_byte_identical(self, workdir):
        args = ["hpo", "--data", str(workdir / "data.csv"), "--arch", "single",
                "--trials", "3", "--seed", "9", "--epochs", "2"]
        p1, p2 = workdir / "s1.json", workdir / "s2.json"
        assert main(args + ["--out-study", str(p1)]) == 0
        assert main(args + ["--out-study", str(p2)]) == 0
        assert _digest(p1) == _digest(p2)

    def test_no_completed_trial_exits_3(self, workdir, monkeypatch):
        from torquelearn import experiment
        from torquelearn.hpo import SearchSpace, FloatDim, Study

        def all_failed(*a, **k):
            return Study(space=SearchSpace((FloatDim("x", 0, 1),)), seed=0)

        monkeypatch.setattr(experiment, "hpo_search", all_failed)
        assert main(["hpo", "--data", str(workdir / "data.csv"), "--arch", "single",
                     "--trials", "2", "--out-study", str(workdir / "sf.json")]) == 3


class TestReport:
    def test_table_schema_and_precision(self, workdir):
        out = workdir / "report.csv"
        inputs = [str(workdir / "metrics_single.json"),
                  str(workdir / "metrics_noscale.json"),
                  str(workdir / "study.json")]
        assert main(["report", *inputs, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ("arch,scaling,avg_test_mse,full_test_mse,hidden,"
                            "optimizer,lr,delta_avg_test_mse")
        assert len(lines) == 4
        # values survive the round trip at full precision
        metrics = json.loads((workdir / "metrics_single.json").read_text())
        row = lines[1].split(",")
        assert float(row[2]) == metrics["avg_test_mse"]
        assert float(row[3]) == metrics["final_test_mse"]
        # the study row carries a delta against the scaled single baseline
        study = json.loads((workdir / "study.json").read_text())
        best_value = study["trials"][study["best_index"]]["value"]
        srow = lines[3].split(",")
        assert float(srow[2]) == best_value
        assert float(srow[7]) == pytest.approx(best_value - metrics["avg_test_mse"])

    def test_missing_input_exits_2(self, workdir):
        assert main(["report", str(workdir / "does_not_exist.json"),
                     "--out", str(workdir / "r.csv")]) == 2


class TestPlot:
    def test_loss_curves(self, workdir):
        out = workdir / "loss.svg"
        assert main(["plot", "--metrics", str(workdir / "metrics_single.json"),
                     "--out", str(out)]) == 0
        svg = out.read_text()
        assert svg.count("<polyline") == 2
        assert ">epoch</text>" in svg and ">MSE</text>" in svg
        sidecar = (workdir / "loss.csv").read_text().splitlines()
        assert sidecar[0] == "epoch,train_mse,test_mse"
        assert len(sidecar) == 11  # header + one row per epoch

    def test_torque_panels(self, workdir):
        out = workdir / "preds_fig.svg"
        assert main(["plot", "--preds", str(workdir / "preds.csv"),
                     "--out", str(out)]) == 0
        svg = out.read_text()
        assert svg.count("<polyline") == 12  # 6 panels x (actual, predicted)
        n_samples = len((workdir / "preds.csv").read_text().splitlines()) - 1
        rows = out.with_suffix(".csv").read_text().splitlines()
        assert len(rows) - 1 == n_samples

    def test_malformed_input_exits_2(self, workdir):
        bad = workdir / "bad.csv"
        bad.write_text("not,a,predictions,file\n1,2,3,4\n")
        assert main(["plot", "--preds", str(bad),
                     "--out", str(workdir / "bad.svg")]) == 2
