"""Tests for the command-line interface."""

from unittest.mock import patch

import pytest
from click.testing import CliRunner

from src.cli import cli
from src.forward.errors import SingularSystemError
from src.validator.validator import CheckResult


@pytest.fixture
def runner():
    with patch("src.cli.setup_logging"):
        yield CliRunner()


class TestPipelineCommand:
    def test_pipeline_success(self, runner, tiny_config_path, tmp_path):
        out_dir = tmp_path / "out"
        result = runner.invoke(cli, ["pipeline", "--config", str(tiny_config_path), "--out", str(out_dir)])
        assert result.exit_code == 0, result.output
        assert "mean_abs_error=" in result.output
        assert (out_dir / "manifest.json").exists()

    def test_missing_config_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(cli, ["pipeline", "--config", str(tmp_path / "absent.ini")])
        assert result.exit_code == 2

    def test_invalid_config_is_usage_error(self, runner, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[surface]\nname = gamma1\n[physics]\nbc = dirichlet\nk_plus = -3\n")
        result = runner.invoke(cli, ["pipeline", "--config", str(path), "--out", str(tmp_path / "o")])
        assert result.exit_code == 2
        assert "physics.k_plus" in result.output

    def test_negative_delta_override(self, runner, tiny_config_path, tmp_path):
        result = runner.invoke(cli, ["pipeline", "--config", str(tiny_config_path),
                                     "--out", str(tmp_path), "--delta", "-0.1"])
        assert result.exit_code == 2

    def test_numerical_failure(self, runner, tiny_config_path, tmp_path):
        with patch("src.cli.run_full_pipeline", side_effect=SingularSystemError("singular", 1e20)):
            result = runner.invoke(cli, ["pipeline", "--config", str(tiny_config_path),
                                         "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "singular" in result.output

    def test_threads_from_environment(self, runner, tiny_config_path, tmp_path):
        with patch("src.cli.run_full_pipeline") as run:
            run.return_value.metrics = {}
            result = runner.invoke(cli, ["pipeline", "--config", str(tiny_config_path),
                                         "--out", str(tmp_path)], env={"ROUGHIMG_THREADS": "3"})
        assert result.exit_code == 0, result.output
        assert run.call_args.args[2] == 3

    def test_zero_threads_rejected(self, runner, tiny_config_path):
        result = runner.invoke(cli, ["pipeline", "--config", str(tiny_config_path), "--threads", "0"])
        assert result.exit_code == 2


class TestForwardAndImage:
    def test_forward_then_image(self, runner, tiny_config_path, tmp_path):
        result = runner.invoke(cli, ["forward", "--config", str(tiny_config_path),
                                     "--out", str(tmp_path / "f"), "--delta", "0"])
        assert result.exit_code == 0, result.output
        dataset = tmp_path / "f" / "dataset.rgh"
        assert dataset.exists()

        result = runner.invoke(cli, ["image", "--dataset", str(dataset), "--grid", "-1:1:5,0.5:1.3:9",
                                     "--window", "-1:1", "--m", "32", "--out", str(tmp_path / "i")])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "i" / "image_heatmap.csv").exists()

    def test_image_rejects_bad_grid(self, runner, tiny_config_path, tmp_path):
        runner.invoke(cli, ["forward", "--config", str(tiny_config_path), "--out", str(tmp_path)])
        result = runner.invoke(cli, ["image", "--dataset", str(tmp_path / "dataset.rgh"),
                                     "--grid", "nonsense", "--out", str(tmp_path / "i")])
        assert result.exit_code == 2

    def test_image_rejects_non_dataset(self, runner, tmp_path):
        path = tmp_path / "notes.txt"
        path.write_text("not a dataset")
        result = runner.invoke(cli, ["image", "--dataset", str(path), "--out", str(tmp_path / "i")])
        assert result.exit_code == 2


class TestVerifyCommand:
    def test_all_checks_pass(self, runner):
        checks = [CheckResult("a", 1e-9, 1e-6, True), CheckResult("b", 1e-3, 1e-2, True)]
        with patch("src.cli.run_checks", return_value=checks):
            result = runner.invoke(cli, ["verify"])
        assert result.exit_code == 0
        assert "2/2 checks passed" in result.output

    def test_failed_check_exits_one(self, runner):
        checks = [CheckResult("a", 1e-9, 1e-6, True), CheckResult("b", 0.5, 1e-2, False)]
        with patch("src.cli.run_checks", return_value=checks):
            result = runner.invoke(cli, ["verify", "--level", "full"])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_unknown_level(self, runner):
        assert runner.invoke(cli, ["verify", "--level", "huge"]).exit_code == 2
