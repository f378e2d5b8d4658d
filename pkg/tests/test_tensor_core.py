import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maglab.errors import (
    BasisMismatchError,
    ContractionError,
    DegenerateMetricError,
    DifferentiationError,
    SymmetryError,
)
from maglab.tensor_core import (
    AnalyticField,
    ConstantField,
    FiniteDifferenceOnly,
    PolynomialField,
    SumField,
    Tensor,
    TrigField,
    as_point,
    contract,
    derivative,
    gradient,
    hessian,
    invert_metric,
    jet,
    kronecker,
    partial_derivative,
)


class TestPoint:
    def test_copy(self):
        p = [1, 2, 3]
        x = as_point(p)
        assert x.dtype == float
        x[0] = 9
        assert p[0] == 1

    @pytest.mark.parametrize("bad", [[1.0], [np.nan, 1.0], [np.inf, 0.0]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            as_point(bad)


class TestTensor:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            Tensor(np.zeros((2, 2)), 1, 0)
        with pytest.raises(ValueError):
            Tensor(np.zeros((2, 3)), 1, 1)
        with pytest.raises(ValueError):
            Tensor(np.zeros((2, 2)), 1, 1, basis="polar")

    def test_declared_symmetry(self):
        Tensor(np.eye(3), 0, 2, symmetric=((0, 1),))
        with pytest.raises(SymmetryError):
            Tensor(np.arange(9.0).reshape(3, 3), 0, 2, symmetric=((0, 1),))
        with pytest.raises(SymmetryError):
            Tensor(np.eye(3), 0, 2, antisymmetric=((0, 1),))

    def test_values_are_readonly(self):
        t = kronecker(3)
        with pytest.raises(ValueError):
            t.values[0, 0] = 2.0

    def test_arithmetic(self):
        a = Tensor(np.ones(3), 1, 0)
        assert np.allclose((2 * a + a - a).values, 2.0)
        with pytest.raises(BasisMismatchError):
            a + Tensor(np.ones(3), 1, 0, "frame")
        with pytest.raises(ContractionError):
            a + Tensor(np.ones(3), 0, 1)


class TestContract:
    def test_matrix_vector(self, rng):
        m = rng.normal(size=(3, 3))
        v = rng.normal(size=3)
        out = contract(Tensor(m, 1, 1), Tensor(v, 1, 0), [(1, 0)])
        assert (out.up, out.down) == (1, 0)
        assert np.allclose(out.values, m @ v)

    def test_slot_order(self, rng):
        # remaining upper slots of a then b, then lower slots
        a = rng.normal(size=(2, 2, 2))  # (1, 2)
        b = rng.normal(size=(2, 2))  # (1, 1)
        out = contract(Tensor(a, 1, 2), Tensor(b, 1, 1), [(2, 0)])
        expected = np.einsum("aik,kj->aij", a, b)
        assert (out.up, out.down) == (1, 2)
        assert np.allclose(out.values, expected)

    def test_kronecker_identity(self, rng):
        t = Tensor(rng.normal(size=(3, 3)), 1, 1)
        assert np.allclose(contract(kronecker(3), t, [(1, 0)]).values, t.values)

    @pytest.mark.parametrize(
        "pairs,err",
        [([(0, 0)], ContractionError), ([(0, 1), (0, 0)], ContractionError), ([(5, 0)], ContractionError)],
    )
    def test_bad_pairs(self, pairs, err):
        with pytest.raises(err):
            contract(Tensor(np.eye(3), 1, 1), Tensor(np.eye(3), 1, 1), pairs)

    def test_basis_mismatch(self):
        with pytest.raises(BasisMismatchError):
            contract(kronecker(2), kronecker(2, "frame"), [(1, 0)])


class TestInvertMetric:
    @given(st.integers(2, 4), st.integers(0, 2**31))
    def test_inverse(self, n, seed):
        r = np.random.default_rng(seed)
        a = r.normal(size=(n, n))
        g = a @ a.T + n * np.eye(n)
        inv = invert_metric(g)
        assert np.allclose(inv @ g, np.eye(n), atol=1e-10)
        assert np.array_equal(inv, inv.T)

    def test_tensor_in_tensor_out(self):
        out = invert_metric(Tensor(np.diag([1.0, -4.0]), 0, 2))
        assert (out.up, out.down) == (2, 0)
        assert np.allclose(out.values, np.diag([1.0, -0.25]))

    def test_wide_scales_accepted(self):
        g = np.diag([9e20, -1.0, -1e26, -1e26])
        assert np.allclose(invert_metric(g) @ g, np.eye(4))

    @pytest.mark.parametrize("g", [np.zeros((2, 2)), np.array([[1.0, 1.0], [1.0, 1.0]]), np.diag([1.0, 0.0])])
    def test_degenerate(self, g):
        with pytest.raises(DegenerateMetricError):
            invert_metric(g)


class TestDerivatives:
    def test_partial_matches_analytic(self):
        f = lambda x: np.array([np.sin(x[0]) * x[1] ** 3, np.exp(x[1])])
        x = np.array([0.4, 1.3])
        d0 = partial_derivative(f, x, 0)
        assert np.allclose(d0, [np.cos(0.4) * 1.3**3, 0.0], atol=1e-10)

    def test_derivative_1d(self):
        assert derivative(np.cos, 0.7) == pytest.approx(-np.sin(0.7), abs=1e-10)

    def test_nonfinite_raises(self):
        f = lambda x: np.array([1.0 / x[0]]) if x[0] > 0 else np.array([np.nan])
        with pytest.raises(DifferentiationError) as info:
            partial_derivative(f, [0.0, 0.0], 0)
        assert info.value.axis == 0

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            partial_derivative(np.sin, [0.0, 0.0], 0, h=0.0)

    @pytest.mark.parametrize("shape", [(), (3,), (2, 2)])
    def test_fd_matches_polynomial(self, rng, shape):
        field = PolynomialField.random(rng, shape, 3, scale=(1.0, 0.5, 0.5, 0.5))
        x = rng.uniform(-0.5, 0.5, 3)
        hidden = FiniteDifferenceOnly(field)
        assert np.allclose(gradient(hidden, x), field.grad(x), atol=1e-9)
        assert np.allclose(hessian(hidden, x), field.hess(x), atol=1e-6)

    def test_trig_field_derivatives(self, rng):
        field = TrigField.random(rng, (2,), 3, amplitude=1.0)
        x = rng.uniform(-1, 1, 3)
        hidden = FiniteDifferenceOnly(field)
        assert np.allclose(gradient(hidden, x), field.grad(x), atol=1e-9)
        assert np.allclose(hessian(hidden, x), field.hess(x), atol=1e-6)

    def test_hessian_symmetric(self, rng):
        f = FiniteDifferenceOnly(TrigField.random(rng, (), 3, amplitude=1.0))
        h = hessian(f, rng.uniform(-1, 1, 3))
        assert np.array_equal(h, h.T)

    def test_jet_orders(self, rng):
        f = PolynomialField.random(rng, (2,), 2)
        v, g = jet(f, [0.1, 0.2])
        v2, g2, h2 = jet(f, [0.1, 0.2], order=2)
        assert v.shape == (2,) and g.shape == (2, 2) and h2.shape == (2, 2, 2)
        assert np.array_equal(g, g2)


class TestFields:
    def test_constant_field(self):
        f = ConstantField(np.eye(2))
        assert np.array_equal(f([1.0, 2.0]), np.eye(2))
        assert not np.any(f.grad([1.0, 2.0])) and f.hess([1.0, 2.0]).shape == (2, 2, 2, 2)

    def test_sum_field_derivatives(self, rng):
        a = PolynomialField.random(rng, (2,), 2)
        b = TrigField.random(rng, (2,), 2)
        s = SumField(a, b)
        x = np.array([0.3, -0.2])
        assert np.allclose(s(x), a(x) + b(x))
        assert np.allclose(s.grad(x), a.grad(x) + b.grad(x))
        assert not hasattr(SumField(a, FiniteDifferenceOnly(b)), "grad")

    def test_analytic_field_optional_derivatives(self):
        f = AnalyticField(lambda x: x**2, grad=lambda x: np.diag(2 * x))
        assert hasattr(f, "grad") and not hasattr(f, "hess")

    @given(st.integers(0, 2**31))
    def test_polynomial_coefficients_symmetric(self, seed):
        f = PolynomialField.random(np.random.default_rng(seed), (2,), 3)
        _, _, c2, c3 = f.coefficients()
        assert np.allclose(c2, c2.transpose(0, 2, 1))
        assert np.allclose(c3, c3.transpose(0, 3, 2, 1))
