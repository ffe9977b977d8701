"""Tests for the surface catalog and boundary quadrature nodes."""

import numpy as np
import pytest

from src.surfaces.catalog import (
    CATALOG_NAMES,
    UnknownSurfaceError,
    band_check,
    catalog,
    normal_at,
)
from src.surfaces.quadrature import (
    arc_length,
    node_count,
    quadrature_nodes,
    smoothstep,
    taper_factor,
)


class TestCatalog:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_derivative_matches_finite_difference(self, name):
        profile = catalog(name)
        s = np.linspace(-6.0, 6.0, 241)
        eps = 1e-6
        fd = (profile.height(s + eps) - profile.height(s - eps)) / (2 * eps)
        np.testing.assert_allclose(profile.slope(s), fd, atol=1e-6)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_band_holds_on_imaging_window(self, name):
        assert band_check(catalog(name), 10.0, 2001)

    def test_gamma1_value(self):
        assert catalog("gamma1").height(0.5) == pytest.approx(0.8 + 0.1 * 0.0 + 0.1)

    def test_gamma3_is_periodic(self):
        profile = catalog("gamma3")
        s = np.linspace(-1.0, 1.0, 11)
        np.testing.assert_allclose(profile.height(s), profile.height(s + 2.0), atol=1e-14)

    def test_flat_surface(self):
        profile = catalog("flat:0.8")
        assert profile.label == "flat:0.8"
        np.testing.assert_array_equal(profile.height(np.array([-3.0, 0.0, 7.0])), 0.8)
        np.testing.assert_array_equal(profile.slope(np.array([1.0, 2.0])), 0.0)

    def test_flat_surface_from_params(self):
        assert catalog("flat", params=(1.2,)).height(0.0) == pytest.approx(1.2)

    @pytest.mark.parametrize("name", ["gamma9", "flat", "flat:abc", "circle"])
    def test_unknown_surface(self, name):
        with pytest.raises(UnknownSurfaceError):
            catalog(name)

    def test_unknown_surface_is_value_error(self):
        with pytest.raises(ValueError):
            catalog("gamma7")

    def test_band_violation(self):
        assert not band_check(catalog("gamma1"), 5.0, 500, c1=0.7)
        assert not band_check(catalog("gamma1"), 5.0, 500, c2=0.5)

    def test_band_grid_too_small(self):
        with pytest.raises(ValueError):
            band_check(catalog("gamma1"), 5.0, 50)

    def test_normal_is_unit_and_downward(self):
        profile = catalog("gamma5")
        s = np.linspace(-4.0, 4.0, 81)
        normals = normal_at(profile, s)
        np.testing.assert_allclose(np.hypot(normals[:, 0], normals[:, 1]), 1.0)
        assert np.all(normals[:, 1] < 0)
        tangent = np.stack([np.ones_like(s), profile.slope(s)], axis=-1)
        np.testing.assert_allclose(np.sum(normals * tangent, axis=-1), 0.0, atol=1e-14)

    def test_second_derivative(self):
        profile = catalog("gamma3")
        s = np.linspace(-2.0, 2.0, 9)
        expected = -0.16 * np.pi**2 * np.sin(np.pi * s)
        np.testing.assert_allclose(profile.d2f(s), expected, atol=1e-7)


class TestTaper:
    def test_smoothstep_endpoints(self):
        np.testing.assert_array_equal(smoothstep([-1.0, 0.0, 1.0, 2.0]), [0.0, 0.0, 1.0, 1.0])
        assert smoothstep(0.5) == pytest.approx(0.5)

    def test_taper_profile(self):
        s = np.array([-10.0, -9.0, 0.0, 9.0, 10.0])
        chi = taper_factor(s, 10.0, 2.0)
        assert chi[0] == 0.0 and chi[-1] == 0.0
        assert chi[2] == 1.0
        assert 0.0 < chi[1] < 1.0
        assert chi[1] == pytest.approx(chi[3])

    def test_no_taper(self):
        np.testing.assert_array_equal(taper_factor(np.array([-1.0, 1.0]), 1.0, 0.0), 1.0)


class TestQuadratureNodes:
    def test_node_layout(self):
        nodes = quadrature_nodes(catalog("gamma1"), 5.0, 100, taper_width=1.0)
        assert len(nodes) == 101
        assert nodes.s[0] == -5.0 and nodes.s[-1] == 5.0
        assert nodes.step == pytest.approx(0.1)
        np.testing.assert_allclose(np.diff(nodes.s), 0.1)

    def test_weights_integrate_arc_length(self):
        profile = catalog("gamma1")
        nodes = quadrature_nodes(profile, 3.0, 600)
        assert nodes.weight.sum() == pytest.approx(arc_length(profile, -3.0, 3.0), rel=1e-4)

    @pytest.mark.parametrize("name", ["flat:1", "gamma3"])
    def test_weights_are_nonnegative_and_symmetric(self, name):
        nodes = quadrature_nodes(catalog(name), 4.0, 120, taper_width=1.0)
        assert np.all(nodes.weight >= 0.0)
        np.testing.assert_allclose(nodes.weight, nodes.weight[::-1], rtol=1e-12, atol=1e-15)

    def test_taper_zeroes_end_weights(self):
        nodes = quadrature_nodes(catalog("gamma2"), 4.0, 80, taper_width=1.0)
        assert nodes.weight[0] == 0.0 and nodes.weight[-1] == 0.0
        middle = len(nodes) // 2
        assert nodes.weight[middle] == pytest.approx(nodes.step * nodes.jacobian[middle])

    def test_sequence_view(self):
        nodes = quadrature_nodes(catalog("gamma3"), 2.0, 8)
        node = nodes[4]
        assert node.s == 0.0
        assert node.point == pytest.approx((0.0, 0.8))
        assert len(list(nodes)) == 9

    @pytest.mark.parametrize("n", [2, 7, 101])
    def test_invalid_node_count(self, n):
        with pytest.raises(ValueError):
            quadrature_nodes(catalog("gamma1"), 5.0, n)

    def test_invalid_taper(self):
        with pytest.raises(ValueError):
            quadrature_nodes(catalog("gamma1"), 2.0, 20, taper_width=2.0)

    def test_invalid_half_width(self):
        with pytest.raises(ValueError):
            quadrature_nodes(catalog("gamma1"), 0.0, 20)

    def test_node_count_is_even_and_scales(self):
        profile = catalog("flat:1")
        n = node_count(profile, 5.0, 1.0, 10.0)
        assert n in (100, 102)
        assert node_count(profile, 5.0, 1.0, 10.5) % 2 == 0
        assert node_count(profile, 0.01, 1.0, 1.0) == 4

    def test_arc_length_of_flat_surface(self):
        assert arc_length(catalog("flat:0.5"), -2.0, 3.0) == pytest.approx(5.0)
