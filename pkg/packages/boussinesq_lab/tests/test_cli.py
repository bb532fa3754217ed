"""Tests for the boussinesq-lab command line."""

import json

import pytest

from boussinesq_lab.cli.main import build_parser, main
from boussinesq_lab.errors import EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_OK

QUICK_LINEAR = """
[linear_verify]
n = 8
band = 2
times = [0.1]
nus = [1.0]
etas = [1.0]
wave_n = 8
duhamel_samples = 201
"""


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "quick.toml"
    path.write_text(QUICK_LINEAR, encoding="utf-8")
    return path


class TestParser:
    def test_every_experiment_is_a_subcommand(self):
        parser = build_parser()
        for name in ("linear-verify", "kernel-bounds", "decay-rates", "exp-decay", "stability-sweep", "energy-balance"):
            args = parser.parse_args([name])
            assert args.experiment == name
            assert args.threads == 1
            assert args.seed is None

    def test_seed_accepts_hex_and_rejects_negative(self):
        parser = build_parser()
        assert parser.parse_args(["exp-decay", "--seed", "0x10"]).seed == 16
        with pytest.raises(SystemExit):
            parser.parse_args(["exp-decay", "--seed", "-1"])

    def test_snapshots_flag(self):
        parser = build_parser()
        assert parser.parse_args(["energy-balance"]).snapshots is None
        assert parser.parse_args(["energy-balance", "--snapshots", "0"]).snapshots == 0
        assert parser.parse_args(["linear-verify", "--snapshots", "3"]).snapshots == 3
        with pytest.raises(SystemExit):
            parser.parse_args(["linear-verify", "--snapshots", "-2"])

    def test_subcommand_is_required(self):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args([])
        assert info.value.code == 2


class TestMain:
    def test_missing_config_is_exit_2(self, tmp_path):
        code = main(["linear-verify", "--config", str(tmp_path / "absent.toml"), "--out", str(tmp_path)])
        assert code == EXIT_CONFIG

    def test_unknown_key_is_exit_2(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[linear_verify]\nsteps = 3\n", encoding="utf-8")
        assert main(["linear-verify", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_linear_verify_writes_reports(self, tmp_path, quick_config):
        out = tmp_path / "reports"
        code = main(["linear-verify", "--config", str(quick_config), "--out", str(out), "--seed", "5"])
        assert code == EXIT_OK
        csv_lines = (out / "linear-verify.csv").read_text(encoding="utf-8").splitlines()
        assert csv_lines[0] == "# schema=linear_verify/1"
        assert len(csv_lines) == 3
        summary = json.loads((out / "linear-verify.summary.json").read_text(encoding="utf-8"))
        assert summary["seed"] == 5
        assert summary["passed"] is True
        assert set(summary["checks"]) == {"propagator_vs_oracle", "semigroup", "wave_residual_order", "duhamel"}

    def test_snapshots_flag_writes_a_snapshot_file(self, tmp_path, quick_config):
        out = tmp_path / "reports"
        assert main(["linear-verify", "--config", str(quick_config), "--out", str(out), "--snapshots", "1"]) == EXIT_OK
        lines = (out / "linear-verify.snapshots.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,field,i1,i2,re,im"
        # t = 0 and t = 0.1, three fields on an 8x8 grid
        assert len(lines) == 1 + 2 * 3 * 64

    def test_reports_are_reproducible(self, tmp_path, quick_config):
        for name in ("a", "b"):
            main(["linear-verify", "--config", str(quick_config), "--out", str(tmp_path / name)])
        first = (tmp_path / "a" / "linear-verify.csv").read_bytes()
        assert first == (tmp_path / "b" / "linear-verify.csv").read_bytes()

    def test_failed_check_is_exit_4_only_with_check(self, tmp_path, quick_config, monkeypatch):
        from boussinesq_lab.experiments import runners
        from boussinesq_lab.experiments.reports import Table, get_schema

        def failing(spec):
            return runners.ExperimentOutcome(
                tables=[Table(get_schema("linear_verify"), [])], checks={"semigroup": False}
            )

        monkeypatch.setitem(runners.RUNNERS, "linear-verify", failing)
        args = ["linear-verify", "--config", str(quick_config), "--out", str(tmp_path)]
        assert main(args) == EXIT_OK
        assert main(args + ["--check"]) == EXIT_ACCEPTANCE
        # reports are written before the verdict
        assert (tmp_path / "linear-verify.summary.json").exists()
