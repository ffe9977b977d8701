"""Tests for the configuration module."""

import importlib
import json
from pathlib import Path
from unittest.mock import patch

# Project root for locating config files
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"


class TestConfigFiles:
    """Test that all config JSON files are valid and complete."""

    def test_surfaces_loads(self):
        path = CONFIG_DIR / "surfaces.json"
        with open(path) as f:
            data = json.load(f)
        assert "surfaces" in data
        assert "flat" in data
        assert len(data["surfaces"]) == 6

    def test_all_surfaces_have_required_fields(self):
        path = CONFIG_DIR / "surfaces.json"
        with open(path) as f:
            data = json.load(f)
        required = {"formula", "c1", "c2"}
        for name, entry in data["surfaces"].items():
            missing = required - set(entry.keys())
            assert not missing, f"Surface {name} missing fields: {missing}"
            assert 0 < entry["c1"] < entry["c2"], f"Surface {name} has an empty band"

    def test_solver_defaults_loads(self):
        path = CONFIG_DIR / "solver-defaults.json"
        with open(path) as f:
            data = json.load(f)
        for section in ("truncation", "solver", "imaging", "paper_scale", "desk_scale"):
            assert section in data, f"Missing section: {section}"

    def test_scales_are_complete(self):
        path = CONFIG_DIR / "solver-defaults.json"
        with open(path) as f:
            data = json.load(f)
        assert set(data["paper_scale"]) == {"N", "nodes_per_wavelength", "grid"}
        assert set(data["desk_scale"]) == {
            "N", "nodes_per_wavelength", "grid", "receivers_per_wavelength", "halfcircle_step",
        }
        assert data["desk_scale"]["N"] < data["paper_scale"]["N"]

    def test_example_experiments_exist(self):
        names = sorted(p.name for p in (CONFIG_DIR / "experiments").glob("*.ini"))
        assert names == [
            "example1.ini", "example1_gamma2.ini", "example2.ini",
            "example2_gamma4.ini", "example3.ini", "example3_gamma6.ini",
        ]

    def test_ladders_reference_shipped_files(self):
        with open(CONFIG_DIR / "experiments" / "ladders.json") as f:
            ladders = json.load(f)
        assert set(ladders) == {"example1", "example2", "example3"}
        for name, ladder in ladders.items():
            assert len(ladder["files"]) == 2, name
            for filename in ladder["files"]:
                assert (CONFIG_DIR / "experiments" / filename).exists(), filename
            assert len(ladder["steps"]) == 3, name


class TestTemplates:
    def test_heatmap_template_exists(self):
        assert (PROJECT_ROOT / "templates" / "heatmap.gp.j2").exists()


class TestLoaders:
    def test_getters_read_config_dir(self):
        from src.config import get_solver_defaults, get_surface_bounds

        assert get_solver_defaults()["truncation"]["nodes_per_wavelength"] == 40.0
        assert get_surface_bounds()["surfaces"]["gamma6"]["c2"] == 12.0


class TestEnvironment:
    def test_output_dir_from_env(self, tmp_path):
        import src.config

        with patch.dict("os.environ", {"ROUGHIMG_OUTPUT_DIR": str(tmp_path)}):
            module = importlib.reload(src.config)
            assert module.OUTPUT_DIR == tmp_path
        importlib.reload(src.config)
