"""Sphere belts, the hat-box areas, and the plane projection limits."""

import math

import numpy as np
import pytest

from phasewave import (
    SpinSphere,
    ValidationError,
    belt_area,
    belts,
    band_table,
    convergence_report,
    project,
    projected_band,
    projected_band_area,
)


class TestBelts:
    @pytest.mark.parametrize("j", [0.5, 1.0, 5.0, 10.0, 200.0])
    def test_count_and_tiling(self, j):
        sphere = SpinSphere(j)
        bs = belts(j)
        assert len(bs) == sphere.multiplicity
        assert bs[0].z_lo == pytest.approx(-sphere.radius, abs=1e-12)
        assert bs[-1].z_hi == pytest.approx(sphere.radius, abs=1e-12)
        for a, b in zip(bs, bs[1:]):
            assert a.z_hi == b.z_lo  # exact shared boundaries, no gaps

    def test_half_spin_belts(self):
        bs = belts(0.5)
        r = math.sqrt(0.75)
        assert bs[0].z_lo == pytest.approx(-r, abs=1e-14)
        assert bs[0].z_hi == 0.0
        assert bs[1].z_lo == 0.0
        assert bs[1].z_hi == pytest.approx(r, abs=1e-14)

    def test_interior_belts_unit_width(self):
        bs = belts(10.0)
        assert len(bs) == 21
        for b in bs[1:-1]:
            assert b.width == pytest.approx(1.0, abs=1e-12)

    def test_invalid_j_rejected(self):
        with pytest.raises(ValidationError):
            SpinSphere(0.3)
        with pytest.raises(ValidationError):
            belts(-1.0)


class TestBeltAreas:
    def test_hatbox_value_interior(self):
        # 2*pi*R per unit axial width
        area = belt_area(10.0, 0.0)
        assert area == pytest.approx(2.0 * math.pi * math.sqrt(110.0), abs=1e-10)

    def test_total_area_is_sphere(self):
        j = 10.0
        total = sum(belt_area(j, b.m) for b in belts(j))
        r = SpinSphere(j).radius
        assert total == pytest.approx(4.0 * math.pi * r * r, rel=1e-12)

    def test_interior_belts_equal(self):
        j = 10.0
        areas = [belt_area(j, b.m) for b in belts(j)[1:-1]]
        assert np.allclose(areas, areas[0], atol=1e-10)

    def test_unknown_m_rejected(self):
        with pytest.raises(ValidationError):
            belt_area(1.0, 0.25)


class TestProjection:
    def test_south_pole_maps_to_origin(self):
        r = SpinSphere(3.0).radius
        assert project(3.0, -r) == 0.0

    def test_poles_and_equator(self):
        j = 12.0
        r = SpinSphere(j).radius
        assert project(j, r) == 0.0
        assert project(j, 0.0) == pytest.approx(math.sqrt(r), abs=1e-12)

    def test_monotone_on_southern_hemisphere(self):
        j = 50.0
        r = SpinSphere(j).radius
        z = np.linspace(-r, 0.0, 400)
        rho = project(j, z)
        assert np.all(np.diff(rho) > 0)

    def test_rejects_heights_beyond_sphere(self):
        with pytest.raises(ValidationError):
            project(2.0, 10.0)

    def test_band_zero_starts_at_origin(self):
        for j in (0.5, 10.0, 200.0):
            lo, _ = projected_band(j, 0)
            assert lo == 0.0

    def test_band_one_boundary_near_first_annulus_edge_at_j200(self):
        lo, _ = projected_band(200.0, 1)
        assert abs(lo - math.sqrt(2.0)) / math.sqrt(2.0) < 0.01

    def test_large_j_convergence_to_annulus_edges(self):
        targets = np.sqrt(2.0 * np.arange(1, 11))
        worst = []
        for j in (20.0, 80.0, 200.0, 800.0):
            radii = np.array([projected_band(j, n)[0] for n in range(1, 11)])
            worst.append(float(np.max(np.abs(radii - targets) / targets)))
        assert worst[0] > worst[1] > worst[2] > worst[3]
        assert worst[-1] < 0.01

    def test_mirrored_picture_on_northern_hemisphere(self):
        j = 25.0
        two_j = int(2 * j)
        for n in (0, 3, 10):
            south = projected_band(j, n)
            north = projected_band(j, two_j - n)
            assert south == pytest.approx(north, abs=1e-12)

    def test_band_index_range_enforced(self):
        with pytest.raises(ValidationError):
            projected_band(2.0, 5)


class TestProjectedAreas:
    def test_first_band_area_near_quantum(self):
        area = projected_band_area(200.0, 1)
        assert abs(area - 2.0 * math.pi) / (2.0 * math.pi) < 0.02

    def test_areas_fall_below_quantum_toward_equator(self):
        j = 200.0
        areas = np.array([projected_band_area(j, n) for n in range(1, 201)])
        assert np.all(np.diff(areas) < 0)  # monotone squeeze
        assert np.all(areas < 2.0 * math.pi)

    def test_equatorial_breakdown(self):
        j = 200.0
        for n in range(101, 201, 10):
            assert projected_band_area(j, n) < 2.0 * math.pi

    def test_band_table_shape(self):
        rows = band_table(1.5)
        assert len(rows) == 4
        n, m, lo, hi, area = rows[0]
        assert (n, m, lo) == (0, -1.5, 0.0)
        assert area == pytest.approx(math.pi * hi * hi, rel=1e-12)


class TestConvergenceReport:
    def test_report_fields(self):
        rep = convergence_report([20, 80, 200], 2)
        assert rep["J_values"] == [20.0, 80.0, 200.0]
        assert rep["n"] == 2
        assert rep["target"] == pytest.approx(2.0, abs=1e-12)
        assert len(rep["radii"]) == 3

    def test_report_serializes_to_json(self):
        import json

        rep = convergence_report([20, 80], 3)
        assert json.loads(json.dumps(rep)) == rep

    def test_rejects_missing_band(self):
        with pytest.raises(ValidationError):
            convergence_report([1.0], 5)
