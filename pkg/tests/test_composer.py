"""Tests for the imaging artifact writers."""

import csv

import numpy as np
from PIL import Image

from src.composer.composer import compose_outputs, render_gnuplot, scaled_image
from src.imaging.extract import extract_profile
from src.imaging.indicator import ImagingGrid, ImagingResult
from src.surfaces.catalog import catalog


def _result():
    grid = ImagingGrid(-1.0, 1.0, 0.5, 1.0, 3, 2)
    values = np.array([[1.0, 2.0, 4.0], [0.5, 0.0, 2.0]])
    return ImagingResult(grid=grid, values=values, k_plus=5.0)


class TestScaledImage:
    def test_scaling_and_orientation(self):
        pixels = scaled_image(np.array([[0.0, 1.0], [2.0, 4.0]]))
        assert pixels.dtype == np.uint8
        np.testing.assert_array_equal(pixels, [[128, 255], [0, 64]])

    def test_all_zero(self):
        assert not scaled_image(np.zeros((2, 2))).any()


class TestComposeOutputs:
    def test_writes_every_artifact(self, tmp_path):
        result = _result()
        paths = compose_outputs(result, extract_profile(result), tmp_path / "out", "image",
                                "flat test", catalog("flat:0.8"))
        names = sorted(p.name for p in paths)
        assert names == ["image.gp", "image.pgm", "image_heatmap.csv", "image_profile.csv",
                         "image_truth.csv"]
        assert all(p.exists() for p in paths)

    def test_heatmap_rows(self, tmp_path):
        result = _result()
        compose_outputs(result, extract_profile(result), tmp_path)
        with open(tmp_path / "image_heatmap.csv") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["x1", "x2", "I"]
        assert len(rows) == 1 + 6
        assert [float(v) for v in rows[3]] == [1.0, 0.5, 4.0]

    def test_pgm_image(self, tmp_path):
        result = _result()
        compose_outputs(result, extract_profile(result), tmp_path)
        with Image.open(tmp_path / "image.pgm") as img:
            assert img.size == (3, 2)
            pixels = np.asarray(img)
        assert pixels[1, 2] == 255
        assert pixels[0, 1] == 0

    def test_no_truth_file_without_truth(self, tmp_path):
        result = _result()
        paths = compose_outputs(result, extract_profile(result), tmp_path)
        assert not any(p.name.endswith("_truth.csv") for p in paths)
        assert "surface" not in (tmp_path / "image.gp").read_text()

    def test_gnuplot_script(self):
        script = render_gnuplot({
            "title": "gamma1", "script_name": "image.gp", "png_name": "image.png",
            "height_px": 400, "x1_min": -1, "x1_max": 1, "x2_min": 0.3, "x2_max": 1.3,
            "max_value": 2.0, "heatmap_csv": "h.csv", "profile_csv": "p.csv",
            "truth_csv": "t.csv",
        })
        assert 'set output "image.png"' in script
        assert '"t.csv"' in script
        assert "($3/2.0)" in script
