"""Tests for chart metrics, local charts and sphere frames."""

import numpy as np
import pytest

from modelgeom.core.exceptions import ChartDomainError, DimensionMismatchError
from modelgeom.geometry.charts import (
    ChartMetric,
    as_point,
    identity_chart,
    quaternion_frame,
    round_metric,
    s3_chart,
    sphere_frame,
    stereographic_maps,
)


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


class TestChartMetric:
    def test_symmetrizes_on_evaluation(self) -> None:
        metric = ChartMetric(eval=lambda _y: np.array([[1.0, 0.2, 0], [0, 1, 0], [0, 0, 1]]))
        g = metric(np.zeros(3))
        assert np.allclose(g, g.T)
        assert g[0, 1] == pytest.approx(0.1)

    def test_domain_is_enforced(self) -> None:
        ball = ChartMetric(eval=lambda _y: np.eye(3), domain=lambda y: bool(y @ y < 1))
        assert ball.contains([0.5, 0, 0])
        assert not ball.contains([2.0, 0, 0])
        with pytest.raises(ChartDomainError):
            ball([2.0, 0, 0])

    def test_wrong_shape(self) -> None:
        with pytest.raises(DimensionMismatchError):
            ChartMetric(eval=lambda _y: np.eye(2))(np.zeros(3))
        with pytest.raises(DimensionMismatchError):
            as_point([1.0, 2.0])

    def test_scaled(self) -> None:
        scaled = round_metric(3).scaled(3.0)
        assert np.allclose(scaled(np.zeros(3)), 12 * np.eye(3))
        assert scaled.christoffel_oracle is not None
        with pytest.raises(ValueError, match="positive"):
            round_metric(3).scaled(0.0)

    def test_positive_definite(self) -> None:
        assert round_metric(2).is_positive_definite([0.3, -0.1, 2.0])
        assert not ChartMetric(eval=lambda _y: np.diag([1.0, -1.0, 1.0])).is_positive_definite(np.zeros(3))

    def test_round_metric_pads_with_line(self) -> None:
        g = round_metric(2)([1.0, 0.0, 5.0])
        assert np.allclose(g, np.diag([1.0, 1.0, 1.0]))


class TestIdentityChart:
    def test_translation(self) -> None:
        center = np.array([1.0, 2.0, 3.0])
        chart = identity_chart(center, lambda p: np.diag(1.0 + p**2), lambda _p: True)
        assert np.allclose(chart.to_point(np.zeros(3)), center)
        assert np.allclose(chart.to_coords(center + 0.5), [0.5, 0.5, 0.5])
        assert np.allclose(chart.metric(np.zeros(3)), np.diag([2.0, 5.0, 10.0]))

    def test_pull_field_is_identity(self) -> None:
        chart = identity_chart(np.zeros(3), lambda _p: np.eye(3), lambda _p: True)
        field = chart.pull_field(lambda p: np.array([p[1], -p[0], 1.0]))
        assert np.allclose(field(np.array([1.0, 2.0, 0.0])), [2.0, -1.0, 1.0])

    def test_oracle_is_recentred(self) -> None:
        center = np.array([0.5, 0.0, 0.0])
        chart = identity_chart(center, lambda _p: np.eye(3), lambda _p: True, lambda p: np.full((3, 3, 3), p[0]))
        assert chart.metric.christoffel_oracle is not None
        assert np.allclose(chart.metric.christoffel_oracle(np.zeros(3)), 0.5)


class TestStereographic:
    def test_maps_onto_the_sphere(self, rng: np.random.Generator) -> None:
        center = _unit(rng, 4)
        to_point, to_coords, _ = stereographic_maps(center, quaternion_frame(center))
        assert np.allclose(to_point(np.zeros(3)), center)
        for _ in range(10):
            y = rng.normal(size=3)
            q = to_point(y)
            assert np.linalg.norm(q) == pytest.approx(1.0)
            assert np.allclose(to_coords(q), y)

    def test_jacobian_matches_finite_differences(self, rng: np.random.Generator) -> None:
        center = _unit(rng, 4)
        to_point, _, jacobian = stereographic_maps(center, quaternion_frame(center))
        y, h = rng.normal(size=3) * 0.5, 1e-6
        numeric = np.column_stack([(to_point(y + h * e) - to_point(y - h * e)) / (2 * h) for e in np.eye(3)])
        assert np.allclose(jacobian(y), numeric, atol=1e-8)

    def test_pulled_back_metric_is_conformal(self, rng: np.random.Generator) -> None:
        chart = s3_chart(_unit(rng, 4))
        y = rng.normal(size=3)
        jac = chart.jacobian(y)
        assert np.allclose(jac.T @ jac, chart.metric(y))


class TestFrames:
    def test_quaternion_frame(self, rng: np.random.Generator) -> None:
        q = _unit(rng, 4)
        frame = quaternion_frame(q)
        assert np.allclose(frame.T @ frame, np.eye(3))
        assert np.allclose(frame.T @ q, 0.0)

    def test_hopf_direction_is_multiplication_by_i(self) -> None:
        q = np.array([0.6, 0.0, 0.0, 0.8])  # (z1, z2) = (0.6, 0.8i)
        iq = quaternion_frame(q)[:, 0]
        assert np.allclose(iq, [0.0, 0.6, -0.8, 0.0])

    def test_sphere_frame_is_oriented(self, rng: np.random.Generator) -> None:
        for _ in range(5):
            s = _unit(rng, 3)
            frame = sphere_frame(s)
            assert np.allclose(frame.T @ frame, np.eye(2))
            assert np.linalg.det(np.column_stack([frame, s])) > 0
