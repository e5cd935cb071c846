"""End-to-end CLI tests: outputs, exit codes, config precedence, seeding,
manifests, and reproducibility. Commands run in-process via cli.main."""

import json
import os
from pathlib import Path

import pytest

from acorbfn import cli

FAST_SIM = ["--t-end", "0.02", "--hidden", "4"]
FAST_IK = ["--n-train", "40", "--n-test", "6", "--centers", "6",
           "--max-hidden", "8", "--epochs", "3", "--nc-max", "5"]
FAST_CMP = ["--seeds", "2", "--points", "40", "--k", "3", "--epochs", "3", "--nc-max", "5"]


def run(argv):
    return cli.main(argv)


def manifest(out_dir):
    return json.loads((Path(out_dir) / "manifest.json").read_text())


class TestSimulate:
    def test_tiny_run_two_rows(self, tmp_path):
        out = tmp_path / "r"
        code = run(["simulate", "--t-end", "0.001", "--dt", "0.001",
                    "--no-compensation", "--out-dir", str(out)])
        assert code == 0
        rows = (out / "trace.csv").read_text().strip().splitlines()
        assert len(rows) == 3  # header + 2 data rows
        assert (out / "metrics.txt").exists() and (out / "metrics.csv").exists()

    def test_ideal_model_run(self, tmp_path):
        out = tmp_path / "r"
        code = run(["simulate", "--no-compensation", "--no-disturbance", "--no-friction",
                    "--factors", "1,1,1", "--payload-mass", "0", "--t-end", "2.0",
                    "--out-dir", str(out)])
        assert code == 0
        metrics = dict(
            line.split("=") for line in (out / "metrics.txt").read_text().strip().splitlines()
        )
        for j in (1, 2, 3):
            assert float(metrics[f"settling_rms_e{j}"]) < 1e-3

    def test_malformed_flag_exits_2_no_outputs(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        out = tmp_path / "r"
        with pytest.raises(SystemExit) as exc:
            run(["simulate", "--dt", "abc", "--out-dir", str(out)])
        assert exc.value.code == 2
        assert not out.exists()

    def test_bad_factors_exit_2(self, tmp_path):
        out = tmp_path / "r"
        assert run(["simulate", "--factors", "nope", "--out-dir", str(out)]) == 2
        assert not out.exists()

    def test_plot_panels(self, tmp_path):
        out = tmp_path / "r"
        code = run(["simulate", *FAST_SIM, "--no-compensation", "--plot", "--out-dir", str(out)])
        assert code == 0
        names = sorted(p.name for p in (out / "plots").iterdir())
        assert names == sorted(
            [f"{kind}{j}.svg" for kind in ("pos", "err", "tau") for j in (1, 2, 3)]
        )
        svg = (out / "plots" / "pos1.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg


class TestTrainIk:
    def test_outputs_and_row_count(self, tmp_path):
        out = tmp_path / "ik"
        assert run(["train-ik", *FAST_IK, "--out-dir", str(out)]) == 0
        rows = (out / "ik_report.csv").read_text().strip().splitlines()
        assert len(rows) == 1 + 6  # header + n_test
        net_lines = (out / "network.txt").read_text().strip().splitlines()
        header = net_lines[0].split()
        assert int(header[2]) == len(net_lines) - 1

    def test_zero_centers_exit_2(self, tmp_path):
        out = tmp_path / "ik"
        assert run(["train-ik", "--centers", "0", "--out-dir", str(out)]) == 2
        assert not out.exists()

    def test_deterministic_network_files(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(["train-ik", *FAST_IK, "--seed", "7", "--out-dir", str(out)]) == 0
            outs.append(out)
        assert (outs[0] / "network.txt").read_bytes() == (outs[1] / "network.txt").read_bytes()
        assert (outs[0] / "ik_report.csv").read_bytes() == (outs[1] / "ik_report.csv").read_bytes()


class TestCompare:
    def test_single_seed_one_row(self, tmp_path):
        out = tmp_path / "c"
        assert run(["compare", *FAST_CMP[:2], "--seeds", "1", "--points", "40",
                    "--k", "3", "--epochs", "3", "--nc-max", "5", "--out-dir", str(out)]) == 0
        rows = (out / "comparison.csv").read_text().strip().splitlines()
        assert len(rows) == 2

    def test_summary_fields(self, tmp_path):
        out = tmp_path / "c"
        assert run(["compare", *FAST_CMP, "--out-dir", str(out)]) == 0
        summary = (out / "summary.txt").read_text()
        assert "mean_E_aco=" in summary and "mean_E_kmeans=" in summary
        assert "aco_nonloss_rate=" in summary
        assert "non-loss" in summary  # tie rule documented in the header

    def test_zero_seeds_exit_2(self, tmp_path):
        out = tmp_path / "c"
        assert run(["compare", "--seeds", "0", "--out-dir", str(out)]) == 2


class TestCheckDynamics:
    def test_default_passes(self, tmp_path, capsys):
        out = tmp_path / "d"
        code = run(["check-dynamics", "--samples", "200", "--out-dir", str(out)])
        assert code == 0
        text = (out / "dynamics_report.txt").read_text()
        assert "PASS mass-matrix-symmetry" in text
        assert "PASS positive-definite" in text
        assert "PASS christoffel-passivity" in text
        assert "FAIL symmetric-mode-passivity [informational]" in text
        assert "PASS energy-conservation" in text

    def test_payload_twenty_pd_still_passes(self, tmp_path):
        out = tmp_path / "d"
        code = run(["check-dynamics", "--samples", "50", "--payload", "20", "--out-dir", str(out)])
        assert code == 0
        assert "PASS positive-definite" in (out / "dynamics_report.txt").read_text()


class TestConfigHandling:
    def test_config_file_then_flag_precedence(self, tmp_path):
        cfg = tmp_path / "conf"
        cfg.write_text("sim.t_end=0.002\nctrl.compensation=false\n")
        out1 = tmp_path / "a"
        assert run(["simulate", "--config", str(cfg), "--out-dir", str(out1)]) == 0
        assert len((out1 / "trace.csv").read_text().strip().splitlines()) == 4  # 3 rows
        out2 = tmp_path / "b"
        assert run(["simulate", "--config", str(cfg), "--t-end", "0.001",
                    "--out-dir", str(out2)]) == 0
        assert len((out2 / "trace.csv").read_text().strip().splitlines()) == 3  # flag wins

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "conf"
        cfg.write_text("nosuch.key=1\n")
        assert run(["simulate", "--config", str(cfg), "--out-dir", str(tmp_path / "x")]) == 2

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "conf"
        cfg.write_text("sim.dt=fast\n")
        assert run(["simulate", "--config", str(cfg), "--out-dir", str(tmp_path / "x")]) == 2

    def test_env_seed_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ACORBFN_SEED", "31")
        out = tmp_path / "r"
        assert run(["simulate", *FAST_SIM, "--no-compensation", "--out-dir", str(out)]) == 0
        assert manifest(out)["seed"] == 31

    def test_flag_overrides_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ACORBFN_SEED", "31")
        out = tmp_path / "r"
        assert run(["simulate", *FAST_SIM, "--no-compensation", "--seed", "5",
                    "--out-dir", str(out)]) == 0
        assert manifest(out)["seed"] == 5

    def test_resolved_config_reproduces_run(self, tmp_path):
        out1 = tmp_path / "a"
        assert run(["simulate", *FAST_SIM, "--seed", "3", "--out-dir", str(out1)]) == 0
        out2 = tmp_path / "b"
        assert run(["simulate", "--config", str(out1 / "config.resolved"),
                    "--out-dir", str(out2)]) == 0
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()
        assert (out1 / "metrics.csv").read_bytes() == (out2 / "metrics.csv").read_bytes()


class TestManifest:
    @pytest.mark.parametrize(
        "argv",
        [
            ["simulate", *FAST_SIM, "--no-compensation"],
            ["train-ik", *FAST_IK],
            ["compare", *FAST_CMP],
            ["check-dynamics", "--samples", "50"],
        ],
        ids=["simulate", "train-ik", "compare", "check-dynamics"],
    )
    def test_every_output_listed_once(self, tmp_path, argv):
        out = tmp_path / "r"
        assert run([*argv, "--out-dir", str(out)]) == 0
        m = manifest(out)
        listed = m["outputs"]
        assert len(listed) == len(set(listed))
        on_disk = sorted(
            str(p.relative_to(out)) for p in out.rglob("*") if p.is_file()
        )
        assert sorted(listed + ["manifest.json"]) == on_disk
        assert m["subcommand"] == argv[0]


class TestHelp:
    @pytest.mark.parametrize("sub", ["simulate", "train-ik", "compare", "check-dynamics"])
    def test_help_lists_flags_with_defaults(self, sub, capsys):
        with pytest.raises(SystemExit) as exc:
            run([sub, "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert "--out-dir" in text and "--seed" in text and "--config" in text
        assert "default" in text
