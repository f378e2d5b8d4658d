import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maglab.geometry import (
    MetricAffineSpace,
    bianchi_residual,
    cartan_connection,
    cartan_symbol,
    commutator_residual,
    curvature,
    killing2_consequence,
    killing2_residual,
    killing_residual,
    lie_derivative_connection,
    lie_derivative_connection_coordinate,
    lie_derivative_connection_riemann,
    lie_derivative_metric,
    lie_derivative_metric_coordinate,
    metric_covariant_derivative,
    nonmetricity,
    reconstruct_connection,
    ricci,
    scalar_curvature,
    shifted_curvature,
    torsion,
)
from maglab.spacetimes.flat import euclidean_polar_space, sphere_space
from maglab.spacetimes.synthetic import (
    constant_torsion_space,
    random_field,
    random_point,
    random_space,
    random_vector_field,
)
from maglab.tensor_core import AnalyticField, ConstantField

seeds = st.integers(0, 2**31)
dims = st.integers(2, 4)


def _setup(seed, n, **kw):
    rng = np.random.default_rng(seed)
    space = random_space(rng, n, **kw)
    return rng, space, random_point(rng, n)


class TestSpace:
    def test_label_checked(self):
        with pytest.raises(ValueError):
            MetricAffineSpace(ConstantField(np.eye(2)), ConstantField(np.zeros((2, 2, 2))), 2, "weyl")

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            MetricAffineSpace(ConstantField(np.eye(1)), ConstantField(np.zeros((1, 1, 1))), 1)

    def test_cartan_of_riemannian_is_itself(self):
        space = sphere_space(2.0)
        assert space.cartan() is space


class TestTorsionNonmetricity:
    def test_torsion_sign(self):
        space = constant_torsion_space(3, {(0, 1, 2): 0.5})
        t = torsion(space, np.zeros(3))
        assert t[0, 2, 1] == 0.5 and t[0, 1, 2] == -0.5

    @given(seeds, dims)
    def test_torsion_antisymmetric(self, seed, n):
        _, space, x = _setup(seed, n)
        t = torsion(space, x)
        assert np.array_equal(t, -t.transpose(0, 2, 1))

    @given(seeds, dims)
    def test_levi_civita_is_metric_and_symmetric(self, seed, n):
        _, space, x = _setup(seed, n, torsion=False, nonmetric=False)
        assert np.max(np.abs(nonmetricity(space, x))) < 1e-12
        assert np.max(np.abs(torsion(space, x))) < 1e-14

    @given(seeds, dims)
    def test_nonmetricity_symmetric(self, seed, n):
        _, space, x = _setup(seed, n)
        q, qup = nonmetricity(space, x, contravariant=True)
        assert np.allclose(q, q.transpose(0, 2, 1), atol=1e-14)
        assert np.allclose(qup, qup.transpose(0, 2, 1), atol=1e-14)


class TestReconstruction:
    @given(seeds, dims)
    def test_roundtrip(self, seed, n):
        _, space, x = _setup(seed, n)
        tor = lambda y: torsion(space, y)
        q = lambda y: nonmetricity(space, y)
        gam = reconstruct_connection(space.metric, tor, q, x)
        assert np.allclose(gam, space.connection(x), atol=1e-12)

    def test_prescribed_fields(self, rng):
        n = 3
        metric = random_space(rng, n).metric
        t_field = random_field(rng, (n, n, n), n, pair=(1, 2), kind="anti")
        q_field = random_field(rng, (n, n, n), n, pair=(1, 2), kind="sym")
        x = random_point(rng, n)
        space = MetricAffineSpace(
            metric, AnalyticField(lambda y: reconstruct_connection(metric, t_field, q_field, y)), n
        )
        assert np.allclose(torsion(space, x), t_field(x), atol=1e-12)
        assert np.allclose(nonmetricity(space, x), q_field(x), atol=1e-8)


class TestCartan:
    @given(seeds, dims)
    def test_cartan_is_metric_with_same_torsion(self, seed, n):
        _, space, x = _setup(seed, n)
        hat = space.cartan()
        assert np.max(np.abs(metric_covariant_derivative(hat, x))) < 1e-8
        assert np.allclose(torsion(hat, x), torsion(space, x), atol=1e-12)
        assert np.allclose(hat.connection(x), cartan_connection(space, x), atol=1e-14)

    @given(seeds, dims)
    def test_symbol_vanishes_for_cartan_connection(self, seed, n):
        _, space, x = _setup(seed, n)
        assert np.max(np.abs(cartan_symbol(space.cartan(), x))) < 1e-8


class TestCurvature:
    def test_sphere(self):
        radius = 1.7
        space = sphere_space(radius)
        x = np.array([0.9, 0.3])
        r = curvature(space, x)
        assert r[0, 1, 0, 1] == pytest.approx(np.sin(0.9) ** 2, rel=1e-12)
        assert scalar_curvature(space, x) == pytest.approx(2.0 / radius**2, rel=1e-12)

    def test_flat_polar(self):
        space = euclidean_polar_space()
        assert np.max(np.abs(curvature(space, [1.3, 0.2]))) < 1e-14

    @given(seeds, dims)
    def test_antisymmetric_last_pair(self, seed, n):
        _, space, x = _setup(seed, n)
        r = curvature(space, x)
        assert np.allclose(r, -r.transpose(0, 1, 3, 2), atol=1e-15)

    @given(seeds, dims)
    def test_lowered_pair_antisymmetry_for_levi_civita(self, seed, n):
        _, space, x = _setup(seed, n, torsion=False, nonmetric=False)
        low = np.einsum("ae,ebij->abij", space.metric(x), curvature(space, x))
        assert np.allclose(low, -low.transpose(1, 0, 2, 3), atol=1e-12)
        ric = ricci(space, x)
        assert np.allclose(ric, ric.T, atol=1e-12)

    @given(seeds, dims, st.booleans())
    def test_bianchi_with_torsion(self, seed, n, analytic):
        _, space, x = _setup(seed, n, analytic=analytic)
        tol = 1e-9 if analytic else 1e-6
        assert np.max(np.abs(bianchi_residual(space, x))) < tol

    @given(seeds, dims)
    def test_commutator(self, seed, n):
        rng, space, x = _setup(seed, n)
        u = random_vector_field(rng, n)
        assert np.max(np.abs(commutator_residual(space, u, x))) < 1e-9

    @given(seeds, dims)
    def test_shifted_curvature(self, seed, n):
        rng, space, x = _setup(seed, n)
        shift = random_field(rng, (n, n, n), n, amplitude=0.1, pair=(1, 2))
        direct = curvature(space.shifted(shift), x)
        assert np.allclose(shifted_curvature(space, shift, x), direct, atol=1e-10)


class TestLie:
    @given(seeds, dims)
    def test_metric_two_routes(self, seed, n):
        rng, space, x = _setup(seed, n)
        xi = random_vector_field(rng, n)
        assert np.allclose(lie_derivative_metric(space, xi, x), lie_derivative_metric_coordinate(space, xi, x), atol=1e-10)

    @given(seeds, dims)
    def test_connection_two_routes(self, seed, n):
        rng, space, x = _setup(seed, n)
        xi = random_vector_field(rng, n)
        cov = lie_derivative_connection(space, xi, x)
        assert np.allclose(cov, lie_derivative_connection_coordinate(space, xi, x), atol=1e-10)
        assert np.allclose(killing2_residual(space, xi, x), cov)

    @given(seeds, dims)
    def test_connection_riemann_form(self, seed, n):
        rng, space, x = _setup(seed, n, torsion=False, nonmetric=False)
        xi = random_vector_field(rng, n)
        assert np.allclose(
            lie_derivative_connection_riemann(space, xi, x), lie_derivative_connection_coordinate(space, xi, x), atol=1e-10
        )

    @given(seeds, dims)
    def test_killing2_consequence(self, seed, n):
        rng, space, x = _setup(seed, n)
        xi = random_vector_field(rng, n)
        k = killing2_residual(space, xi, x)
        assert np.allclose(killing2_consequence(space, xi, x), k - k.transpose(0, 2, 1), atol=1e-10)

    def test_rotation_is_killing_on_sphere(self):
        space = sphere_space(1.3)
        xi = AnalyticField(lambda y: np.array([0.0, 1.0]), grad=lambda y: np.zeros((2, 2)), hess=lambda y: np.zeros((2, 2, 2)))
        x = np.array([1.1, 0.4])
        assert np.max(np.abs(killing_residual(space, xi, x))) < 1e-14
        assert np.max(np.abs(killing2_residual(space, xi, x))) < 1e-12

    def test_second_type_not_an_identity(self, rng):
        space = random_space(rng, 3, torsion=False, nonmetric=False)
        xi = random_vector_field(rng, 3)
        assert np.max(np.abs(killing2_residual(space, xi, random_point(rng, 3)))) > 1e-3
