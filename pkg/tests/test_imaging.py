"""Tests for the imaging indicator, grid sweep and profile extraction."""

import numpy as np
import pytest

from src.forward.errors import GeometryError
from src.forward.measurement import CauchyDataSet, MeasurementLine
from src.forward.oracle import oracle_cauchy_data
from src.imaging.extract import (
    EmptyWindowError,
    ExtractedProfile,
    error_metrics,
    extract_profile,
    parse_window,
)
from src.imaging.indicator import (
    ImagingGrid,
    ImagingResult,
    format_number,
    indicator,
    indicator_terms,
    naive_indicator,
    sweep,
)
from src.specfun.identities import halfcircle_term
from src.surfaces.catalog import catalog


@pytest.fixture
def small_data():
    return oracle_cauchy_data(1.0, 5.0, MeasurementLine(H=1.5, A=2.0, N=5))


@pytest.fixture(scope="module")
def flat_image():
    data = oracle_cauchy_data(1.0, 10.0, MeasurementLine(H=1.5, A=10.0, N=100))
    grid = ImagingGrid.parse("-3:3:13,0.4:1.2:41")
    return sweep(grid, data, M=256)


class TestGrid:
    def test_parse_and_spec(self):
        grid = ImagingGrid.parse("-5:5:201, 0.3:1.3:101")
        assert (grid.nx1, grid.nx2) == (201, 101)
        assert grid.spec() == "-5:5:201,0.3:1.3:101"
        assert ImagingGrid.parse(grid.spec()) == grid

    def test_axes(self):
        grid = ImagingGrid(-1.0, 1.0, 0.5, 1.0, 5, 3)
        np.testing.assert_allclose(grid.x1, [-1.0, -0.5, 0.0, 0.5, 1.0])
        np.testing.assert_allclose(grid.x2, [0.5, 0.75, 1.0])
        assert grid.cell == pytest.approx((0.5, 0.25))

    def test_single_point_axis(self):
        grid = ImagingGrid(0.0, 2.0, 0.8, 0.8, 1, 1)
        np.testing.assert_array_equal(grid.x1, [1.0])
        np.testing.assert_array_equal(grid.x2, [0.8])
        assert grid.cell == (0.0, 0.0)

    @pytest.mark.parametrize("text", [
        "-5:5:201",
        "-5:5,0.3:1.3:101",
        "a:5:2,0.3:1.3:101",
        "-5:5:0,0.3:1.3:101",
        "-5:5:10,0.0:1.3:101",
        "5:-5:10,0.3:1.3:101",
    ])
    def test_invalid_grid(self, text):
        with pytest.raises(ValueError):
            ImagingGrid.parse(text)

    def test_format_number(self):
        assert format_number(0.3) == "0.3"
        assert format_number(-5.0) == "-5"
        assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2


class TestIndicator:
    def test_vectorised_sweep_matches_naive_loop(self, small_data):
        grid = ImagingGrid.parse("-1:1:5,0.5:1.3:5")
        result = sweep(grid, small_data, M=64)
        for row, x2 in enumerate(grid.x2):
            for col, x1 in enumerate(grid.x1):
                expected = naive_indicator((x1, x2), small_data, M=64)
                assert result.values[row, col] == pytest.approx(expected, rel=1e-10)

    def test_pointwise_matches_sweep(self, small_data):
        grid = ImagingGrid(0.3, 0.3, 0.9, 0.9, 1, 1)
        result = sweep(grid, small_data, M=64)
        assert result.values[0, 0] == pytest.approx(indicator((0.3, 0.9), small_data, M=64), rel=1e-10)

    def test_terms_sum_to_indicator(self, small_data):
        terms = indicator_terms((0.2, 0.7), small_data, M=32)
        assert terms.shape == (small_data.line.count,)
        assert np.all(terms >= 0)
        assert indicator((0.2, 0.7), small_data, M=32) == pytest.approx(terms.sum(), rel=1e-14)

    def test_zero_data_leaves_only_the_correction(self):
        line = MeasurementLine(H=1.5, A=1.0, N=3)
        zeros = np.zeros((line.count, line.count))
        data = CauchyDataSet(line=line, k_plus=4.0, bc_label="dirichlet", us=zeros, dnus=zeros)
        z = np.array([0.1, 0.6])
        y_ref = line.points * np.array([1.0, -1.0])
        z_ref = z * np.array([1.0, -1.0])
        correction = halfcircle_term(4.0, y_ref - z_ref, 16, "lower", "inclusive")
        expected = line.h * np.sum(np.abs(correction) ** 2)
        assert indicator(z, data, M=16) == pytest.approx(expected, rel=1e-10)

    def test_thread_count_does_not_change_image(self, small_data):
        grid = ImagingGrid.parse("-1:1:4,0.5:1.2:6")
        serial = sweep(grid, small_data, M=32, threads=1)
        parallel = sweep(grid, small_data, M=32, threads=3)
        np.testing.assert_array_equal(serial.values, parallel.values)

    def test_grid_must_stay_below_line(self, small_data):
        with pytest.raises(GeometryError):
            sweep(ImagingGrid.parse("-1:1:3,0.5:1.5:3"), small_data)

    def test_point_must_stay_below_line(self, small_data):
        with pytest.raises(GeometryError):
            indicator((0.0, 1.6), small_data)


class TestFlatPlaneImage:
    def test_peak_follows_the_plane(self, flat_image):
        extracted = extract_profile(flat_image)
        assert extracted.reliable.all()
        assert np.max(np.abs(extracted.x2 - 1.0)) <= 0.04 + 1e-9

    def test_error_metrics(self, flat_image):
        extracted = extract_profile(flat_image)
        mean, worst = error_metrics(extracted, catalog("flat:1"), (-3.0, 3.0))
        assert mean <= worst <= 0.04 + 1e-9
        assert mean < 0.02 + 1e-9

    def test_indicator_is_positive(self, flat_image):
        assert np.all(flat_image.values > 0)

    def test_peak_dominates_half_wavelength_offsets(self):
        # offsets of lambda/2 fall on the side lobes of the normal-incidence term
        data = oracle_cauchy_data(0.8, 10.0, MeasurementLine(H=1.5, A=10.0, N=50))
        half = np.pi / 10.0
        grid = ImagingGrid(-3.0, 3.0, 0.8 - half, 0.8 + half, 61, 3)
        rows = sweep(grid, data, M=256).values.mean(axis=1)
        assert rows[1] > 1.6 * rows[0]
        assert rows[1] > 1.6 * rows[2]


class TestExtraction:
    def _result(self, values):
        grid = ImagingGrid(-1.0, 1.0, 0.5, 1.0, values.shape[1], values.shape[0])
        return ImagingResult(grid=grid, values=values, k_plus=1.0)

    def test_column_peaks(self):
        values = np.array([[0.0, 5.0, 0.9], [3.0, 1.0, 0.9], [1.0, 1.0, 0.1]])
        extracted = extract_profile(self._result(values))
        np.testing.assert_allclose(extracted.x2, [0.75, 0.5, 0.5])
        np.testing.assert_array_equal(extracted.peak, [3.0, 5.0, 0.9])
        np.testing.assert_array_equal(extracted.reliable, [True, True, False])

    def test_ties_go_to_lower_row(self):
        values = np.array([[2.0], [2.0]])
        assert extract_profile(self._result(values)).x2[0] == 0.5

    def test_custom_threshold(self):
        values = np.array([[1.0, 0.5], [0.0, 0.0]])
        assert extract_profile(self._result(values), threshold=0.6).reliable.tolist() == [True, False]

    def test_metrics_skip_unreliable_columns(self):
        extracted = ExtractedProfile(
            x1=np.array([-1.0, 0.0, 1.0]),
            x2=np.array([0.9, 0.8, 2.0]),
            peak=np.array([1.0, 1.0, 0.0]),
            reliable=np.array([True, True, False]),
        )
        mean, worst = error_metrics(extracted, catalog("flat:0.8"), (-2.0, 2.0))
        assert mean == pytest.approx(0.05)
        assert worst == pytest.approx(0.1)

    def test_empty_window(self):
        extracted = ExtractedProfile(
            x1=np.array([0.0]), x2=np.array([0.8]), peak=np.array([1.0]), reliable=np.array([True]),
        )
        with pytest.raises(EmptyWindowError):
            error_metrics(extracted, catalog("flat:0.8"), (1.0, 2.0))

    def test_parse_window(self):
        assert parse_window("-3:3") == (-3.0, 3.0)
        with pytest.raises(ValueError):
            parse_window("3:-3")
        with pytest.raises(ValueError):
            parse_window("1:2:3")
