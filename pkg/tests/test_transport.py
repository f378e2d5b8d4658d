import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from maglab.errors import ConfigError
from maglab.geometry import curvature
from maglab.integrate import IntegratorConfig
from maglab.spacetimes.flat import euclidean_polar_space, euclidean_space, minkowski_space, sphere_space
from maglab.spacetimes.synthetic import constant_torsion_space, nonmetric_space, random_field, random_point, random_space
from maglab.tensor_core import AnalyticField, ConstantField
from maglab.transport import (
    autoparallel,
    connection_field,
    curve_length,
    extremal,
    field_strength,
    field_strength_coordinate,
    forced_motion,
    frenet_frame,
    frenet_matrix,
    frenet_transport,
    gap_convergence,
    holonomy_loop,
    parallel_transport,
    parallelogram_gap,
    tangent_norm,
    tidal_deviation,
    tidal_lie_residual,
    torsion_bilinear,
    two_trajectory_deviation,
)
from maglab.verify import tidal_convergence


def uniform_magnetic(b):
    """Symmetric-gauge potential A = (-B y / 2, B x / 2)."""
    return AnalyticField(
        lambda x: np.array([-0.5 * b * x[1], 0.5 * b * x[0]]),
        grad=lambda x: np.array([[0.0, -0.5 * b], [0.5 * b, 0.0]]),
        hess=lambda x: np.zeros((2, 2, 2)),
    )


def helix(a, b):
    w = np.hypot(a, b)
    return lambda s: np.array([a * np.cos(s / w), a * np.sin(s / w), b * s / w])


class TestConnectionSelection:
    def test_names(self, rng):
        space = random_space(rng, 3)
        assert connection_field(space, "gamma") is space.connection
        with pytest.raises(ConfigError):
            connection_field(space, "shifted")
        with pytest.raises(ConfigError):
            connection_field(space, "weyl")


class TestParallelTransport:
    def test_flat_polar_keeps_cartesian_vector(self):
        space = euclidean_polar_space()
        r = 2.0
        curve = lambda s: np.array([r, s])
        velocity = lambda s: np.array([0.0, 1.0])
        # unit x vector at phi = 0 has components (1, 0) in (d_r, d_phi)
        _, v = parallel_transport(space, curve, velocity, [1.0, 0.0], (0.0, 1.0))
        expected = np.array([np.cos(1.0), -np.sin(1.0) / r])
        assert np.allclose(v[-1], expected, atol=1e-10)

    @given(st.integers(0, 2**31))
    def test_metric_connection_preserves_length(self, seed):
        rng = np.random.default_rng(seed)
        space = random_space(rng, 3).cartan()
        x0 = random_point(rng, 3)
        u = np.array([0.5, -0.2, 0.3])
        v0 = rng.normal(size=3)
        _, v = parallel_transport(space, lambda s: x0 + s * u, lambda s: u, v0, (0.0, 1.0))
        g0 = v0 @ space.metric(x0) @ v0
        g1 = v[-1] @ space.metric(x0 + u) @ v[-1]
        assert g1 == pytest.approx(g0, rel=1e-9)

    def test_stack_of_vectors(self, rng):
        space = random_space(rng, 3)
        u = np.array([1.0, 0.0, 0.0])
        vs = rng.normal(size=(3, 2))
        _, stack = parallel_transport(space, lambda s: s * u, lambda s: u, vs, (0.0, 0.5))
        _, single = parallel_transport(space, lambda s: s * u, lambda s: u, vs[:, 1], (0.0, 0.5))
        assert stack.shape[1:] == (3, 2)
        assert np.allclose(stack[-1][:, 1], single[-1], atol=1e-12)


class TestAutoparallel:
    def test_straight_in_flat_space(self):
        traj = autoparallel(euclidean_space(3), [0, 0, 0], [1, 2, 3], (0.0, 2.0))
        assert np.allclose(traj.x[-1], [2, 4, 6])

    def test_great_circle_on_sphere(self):
        space = sphere_space(1.0)
        traj = autoparallel(space, [0.5 * np.pi, 0.0], [0.0, 1.0], (0.0, np.pi), s_eval=np.linspace(0, np.pi, 5))
        assert np.allclose(traj.x[:, 0], 0.5 * np.pi, atol=1e-10)
        assert np.allclose(traj.x[:, 1], np.linspace(0, np.pi, 5), atol=1e-10)

    def test_zero_tangent_rejected(self):
        with pytest.raises(ConfigError):
            autoparallel(euclidean_space(2), [0, 0], [0, 0], (0, 1))


class TestExtremal:
    @pytest.mark.parametrize("seed", [0, 3])
    def test_length_conserved_and_matches_cartan(self, seed):
        rng = np.random.default_rng(seed)
        space = nonmetric_space(rng, 3)
        x0 = random_point(rng, 3)
        u0 = np.array([1.0, 0.3, -0.2])
        samples = np.linspace(0.0, 1.0, 6)
        cfg = IntegratorConfig(rtol=1e-12, atol=1e-14)
        ext = extremal(space, x0, u0, (0.0, 1.0), config=cfg, s_eval=samples)
        aut = autoparallel(space, x0, u0, (0.0, 1.0), connection="cartan", config=cfg, s_eval=samples)
        norms = tangent_norm(space, ext)
        assert np.max(np.abs(norms / norms[0] - 1.0)) < 1e-9
        assert np.max(np.abs(ext.x - aut.x)) < 1e-9

    def test_with_torsion_differs_from_autoparallel(self, rng):
        # the extremal only sees the metric; a torsionful autoparallel bends differently
        space = random_space(rng, 3, nonmetric=False)
        x0 = random_point(rng, 3)
        u0 = np.array([1.0, 0.3, -0.2])
        ext = extremal(space, x0, u0, (0.0, 1.0))
        aut = autoparallel(space, x0, u0, (0.0, 1.0))
        assert np.max(np.abs(ext.x[-1] - aut.x[-1])) > 1e-5

    def test_curve_length(self):
        pts = np.array([[0, 0], [3, 4], [3, 5]], float)
        assert curve_length(euclidean_space(2), pts) == pytest.approx(6.0)


class TestFrenet:
    @pytest.mark.parametrize("a,b", [(1.0, 0.5), (2.0, 1.0), (0.5, 2.0)])
    def test_helix_curvatures(self, a, b):
        w2 = a * a + b * b
        nu, xi, eps = frenet_frame(euclidean_space(3), helix(a, b), 0.7)
        assert xi[0] == pytest.approx(a / w2, rel=1e-9)
        assert xi[1] == pytest.approx(b / w2, rel=1e-5)
        assert np.allclose(nu.T @ nu, np.eye(3), atol=1e-6)
        assert np.array_equal(eps, np.ones(3))

    def test_cylindrical_chart(self):
        a, b = 1.5, 0.4
        w = np.hypot(a, b)
        metric = AnalyticField(lambda x: np.diag([1.0, x[0] ** 2, 1.0]))
        from maglab.geometry import MetricAffineSpace

        space = MetricAffineSpace.riemannian(metric, 3)
        curve = lambda s: np.array([a, s / w, b * s / w])
        _, xi, _ = frenet_frame(space, curve, 0.3)
        assert xi[0] == pytest.approx(a / w**2, rel=1e-6)
        assert xi[1] == pytest.approx(b / w**2, rel=1e-5)

    def test_straight_line_completes_frame(self):
        nu, xi, _ = frenet_frame(euclidean_space(3), lambda s: np.array([s, 0.0, 0.0]), 0.0)
        assert np.allclose(xi, 0.0)
        assert np.allclose(nu.T @ nu, np.eye(3), atol=1e-10)

    def test_matrix(self):
        a = frenet_matrix([2.0, 3.0], [1.0, -1.0, 1.0])
        assert np.array_equal(a, [[0, 2.0, 0], [2.0, 0, 3.0], [0, 3.0, 0]])

    def test_transport_follows_frame(self):
        curve = helix(1.0, 0.5)
        space = euclidean_space(3)
        s, frames = frenet_transport(space, curve, (0.0, 1.0))
        nu1, _, _ = frenet_frame(space, curve, 1.0)
        assert np.max(np.abs(frames[-1] - nu1)) < 1e-5


class TestForcedMotion:
    def test_uniform_potential_has_no_field(self):
        pot = ConstantField([0.3, -1.2])
        assert not np.any(field_strength_coordinate(pot, [0.4, 0.1]))

    def test_field_strength_routes_agree(self, rng):
        space = random_space(rng, 3)
        pot = random_field(rng, (3,), 3, amplitude=0.3)
        x = random_point(rng, 3)
        assert np.allclose(field_strength(space, pot, x), field_strength_coordinate(pot, x), atol=1e-10)

    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
    def test_uniform_magnetic_circle(self, b):
        samples = np.linspace(0.0, 3.0, 13)
        traj = forced_motion(euclidean_space(2), [0, 0], [1, 0], (0.0, 3.0), vector_potential=uniform_magnetic(b), c=1.0, s_eval=samples)
        centre = np.array([0.0, -1.0 / b])
        assert np.allclose(np.linalg.norm(traj.x - centre, axis=1), 1.0 / b, atol=1e-10)

    def test_gauge_invariance(self, rng):
        space = random_space(rng, 3)
        pot = random_field(rng, (3,), 3, amplitude=0.3)
        k = rng.normal(size=3)
        shifted = AnalyticField(lambda x: pot(x) + np.cos(k @ x) * k, grad=lambda x: pot.grad(x) - np.sin(k @ x) * np.outer(k, k))
        x0 = random_point(rng, 3)
        one = forced_motion(space, x0, [1, 0.2, 0], (0, 1), vector_potential=pot, c=1.0)
        two = forced_motion(space, x0, [1, 0.2, 0], (0, 1), vector_potential=shifted, c=1.0)
        assert np.allclose(one.x, two.x, atol=1e-9)

    def test_scalar_time_term_keeps_norm(self):
        space = minkowski_space(c=1.0, n=2)
        pot = AnalyticField(lambda x: np.array(0.2 * x[1] ** 2), grad=lambda x: np.array([0.0, 0.4 * x[1]]))
        u0 = np.array([1.25, 0.75])  # g(u, u) = 1
        kept = forced_motion(space, [0, 0.5], u0, (0.0, 2.0), scalar_potential=pot, c=1.0, time_term=True)
        plain = forced_motion(space, [0, 0.5], u0, (0.0, 2.0), scalar_potential=pot, c=1.0)
        assert tangent_norm(space, kept)[-1] == pytest.approx(1.0, rel=1e-9)
        assert abs(tangent_norm(space, plain)[-1] - 1.0) > 1e-3

    def test_mass_must_be_positive(self):
        with pytest.raises(ConfigError):
            forced_motion(euclidean_space(2), [0, 0], [1, 0], (0, 1), mass=0.0)


def _discrete_action_path(pot, start, end, count):
    """Minimize sum |dx| + A(mid).dx over interior points with fixed ends (m = e = c = 1)."""
    line = np.linspace(start, end, count + 1)

    def action(flat):
        pts = np.vstack([start, flat.reshape(-1, 2), end])
        d = np.diff(pts, axis=0)
        mid = 0.5 * (pts[1:] + pts[:-1])
        a = np.array([pot(m) for m in mid])
        return np.sum(np.linalg.norm(d, axis=1)) + np.sum(a * d)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = minimize(action, line[1:-1].ravel(), method="BFGS", options={"gtol": 1e-12})
    return res.x.reshape(-1, 2)


class TestActionOracle:
    def test_minimizer_lies_on_forced_circle(self):
        b = 1.0
        pot = uniform_magnetic(b)
        span = 2.0
        traj = forced_motion(euclidean_space(2), [0, 0], [1, 0], (0.0, span), vector_potential=pot, c=1.0)
        centre = np.array([0.0, -1.0 / b])
        errors = []
        for count in (10, 20, 40):
            pts = _discrete_action_path(pot, traj.x[0], traj.x[-1], count)
            errors.append(np.max(np.abs(np.linalg.norm(pts - centre, axis=1) - 1.0 / b)))
        assert errors[-1] < 5e-4
        assert errors[0] / errors[1] > 3.0 and errors[1] / errors[2] > 3.0


class TestParallelogram:
    def test_gap_is_torsion(self):
        space = constant_torsion_space(3, {(0, 2, 1): 0.7})
        a = np.array([0.0, 1.0, 0.3])
        b = np.array([0.2, 0.4, 1.0])
        exponent, coeff, _ = gap_convergence(space, np.zeros(3), a, b, [0.2, 0.1, 0.05])
        target = torsion_bilinear(space, np.zeros(3), a, b)
        assert exponent == pytest.approx(2.0, abs=0.05)
        assert np.allclose(coeff, target, atol=1e-8)

    def test_torsion_free_gap_is_cubic(self, rng):
        space = nonmetric_space(rng, 3)
        exponent, _, _ = gap_convergence(space, np.zeros(3), [1, 0, 0], [0, 1, 0], [0.1, 0.05, 0.025])
        assert exponent == pytest.approx(3.0, abs=0.15)

    def test_collinear_rejected(self):
        with pytest.raises(ConfigError):
            parallelogram_gap(euclidean_space(2), [0, 0], [1, 0], [2, 0], 0.1)


class TestHolonomy:
    def test_sphere_loop_matches_curvature(self):
        space = sphere_space(1.0)
        p = np.array([1.0, 0.2])
        d = 1e-3
        v0 = np.array([0.3, 0.8])
        dv = holonomy_loop(space, p, np.array([1.0, 0]), np.array([0, 1.0]), d, d, v0)
        expected = -np.einsum("ab,b->a", curvature(space, p)[:, :, 0, 1], v0) * d * d
        assert np.allclose(dv, expected, rtol=5e-3, atol=1e-10)


class TestTidal:
    @pytest.mark.parametrize("seed", [0, 5])
    def test_quadratic_convergence(self, seed):
        rng = np.random.default_rng(seed)
        space = random_space(rng, 3)
        _, ratio = tidal_convergence(space, random_point(rng, 3), np.array([1.0, 0.2, 0.1]), span=1.0)
        assert 3.5 < ratio < 4.5

    def test_lie_identity_autoparallel(self, rng):
        space = random_space(rng, 3)
        dev = tidal_deviation(space, random_point(rng, 3), [1, 0.2, 0.1], [0.01, 0.02, 0], [0, 0.01, 0], (0, 1), s_eval=[0, 0.5, 1])
        for k in range(3):
            res, scale = tidal_lie_residual(space, dev, k)
            assert np.max(np.abs(res)) < 1e-6 * max(scale, 1.0)

    def test_lie_identity_forced(self, rng):
        space = random_space(rng, 3)
        accel = lambda x, v: 0.2 * np.array([np.sin(x[1]), v[0] * v[2], 0.1])
        dev = tidal_deviation(space, random_point(rng, 3), [1, 0.2, 0.1], [0.01, 0.02, 0], [0, 0.01, 0], (0, 1), accel=accel, s_eval=[0, 1])
        res, scale = tidal_lie_residual(space, dev, 1, accel=accel)
        assert np.max(np.abs(res)) < 1e-6 * max(scale, 1.0)

    def test_zero_deviation_stays_zero(self, rng):
        space = random_space(rng, 2)
        s, dx = two_trajectory_deviation(space, [0, 0], [1, 0], [0, 0], [0, 0], (0, 1))
        assert not np.any(dx)
