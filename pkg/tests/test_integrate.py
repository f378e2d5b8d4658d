import numpy as np
import pytest

from maglab.errors import IntegrationError, RegionError
from maglab.integrate import IntegratorConfig, integrate


def oscillator(s, y):
    return np.array([y[1], -y[0]])


class TestConfig:
    @pytest.mark.parametrize(
        "kw", [{"method": "euler"}, {"rtol": 0.0}, {"atol": -1.0}, {"step": 0.0}, {"method": "rk4"}]
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            IntegratorConfig(**kw)


class TestIntegrate:
    def test_rk45_accuracy(self):
        sol = integrate(oscillator, (0.0, 10.0), [1.0, 0.0], IntegratorConfig(rtol=1e-12, atol=1e-14))
        assert np.allclose(sol.y[-1], [np.cos(10.0), -np.sin(10.0)], atol=1e-10)
        assert sol.nfev > sol.nsteps > 0

    def test_backward(self):
        sol = integrate(oscillator, (1.0, 0.0), [np.cos(1.0), -np.sin(1.0)])
        assert np.allclose(sol.y[-1], [1.0, 0.0], atol=1e-9)

    def test_samples_hit_exactly(self):
        pts = np.linspace(0.0, 2.0, 7)
        sol = integrate(oscillator, (0.0, 2.0), [1.0, 0.0], s_eval=pts)
        assert np.array_equal(sol.s, pts)
        assert np.allclose(sol.y[:, 0], np.cos(pts), atol=1e-9)

    def test_rk4_fourth_order(self):
        errs = []
        for h in (0.1, 0.05):
            sol = integrate(oscillator, (0.0, 2.0), [1.0, 0.0], IntegratorConfig(method="rk4", step=h))
            errs.append(abs(sol.y[-1, 0] - np.cos(2.0)))
        assert 14.0 < errs[0] / errs[1] < 18.0

    def test_nonfinite_rhs(self):
        with pytest.raises(IntegrationError) as info:
            integrate(lambda s, y: np.array([np.nan]), (0.0, 1.0), [1.0])
        assert info.value.s == 0.0

    def test_domain_error_is_wrapped(self):
        def rhs(s, y):
            if s > 0.5:
                raise RegionError("left the chart")
            return np.ones(1)

        with pytest.raises(IntegrationError) as info:
            integrate(rhs, (0.0, 1.0), [0.0])
        assert info.value.s <= 0.5

    def test_step_limit(self):
        with pytest.raises(IntegrationError):
            integrate(oscillator, (0.0, 100.0), [1.0, 0.0], IntegratorConfig(max_steps=5))
