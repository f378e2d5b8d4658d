"""Friedmann cosmologies: conformal chart and cosmic-time chart.

Conformal chart (t, chi, theta, phi):
    ds^2 = a(t)^2 (dt^2 - dchi^2 - S(chi)^2 (dtheta^2 + sin^2(theta) dphi^2))
with S = sin (closed) or sinh (open). Light moves along dt = dchi.

Cosmic-time chart:
    ds^2 = c^2 dt^2 - a(t)^2 (dchi^2 + S(chi)^2 (dtheta^2 + sin^2(theta) dphi^2)).
"""

from dataclasses import dataclass

import numpy as np

from ..constants import C
from ..errors import ConfigError
from ..frames import Frame, boost_frame, boost_map
from ..geometry import LeviCivitaConnection, MetricAffineSpace
from ..integrate import IntegratorConfig, integrate
from ..tensor_core import as_point

MODELS = ("closed", "open")
ETA = np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class ScaleFactor:
    """Scale factor a(t) with its first two derivatives."""

    a: object
    adot: object
    addot: object

    @classmethod
    def cosh(cls):
        return cls(np.cosh, np.sinh, np.cosh)

    @classmethod
    def power(cls, exponent, t0=1.0):
        """a = (t / t0)^exponent."""
        p = float(exponent)
        return cls(
            lambda t: (t / t0) ** p,
            lambda t: p / t0 * (t / t0) ** (p - 1),
            lambda t: p * (p - 1) / t0**2 * (t / t0) ** (p - 2),
        )


def _profile(model):
    if model == "closed":
        return np.sin, np.cos, lambda x: -np.sin(x)
    if model == "open":
        return np.sinh, np.cosh, np.sinh
    raise ConfigError(f"model must be one of {MODELS}")


class ConformalMetric:
    """Conformal-chart metric with analytic gradient and Hessian."""

    def __init__(self, model, scale):
        self.model = model
        self.scale = scale
        self._s, self._ds, self._dds = _profile(model)

    def _h(self, x):
        """Spatial factors h_alpha with their chi, theta derivatives."""
        chi, th = x[1], x[2]
        s, ds, dds = self._s(chi), self._ds(chi), self._dds(chi)
        h = np.array([1.0, 1.0, s * s, s * s * np.sin(th) ** 2])
        dh = np.zeros((4, 4))
        dh[2, 1] = 2 * s * ds
        dh[3, 1] = 2 * s * ds * np.sin(th) ** 2
        dh[3, 2] = s * s * np.sin(2 * th)
        ddh = np.zeros((4, 4, 4))
        ddh[2, 1, 1] = 2 * (ds * ds + s * dds)
        ddh[3, 1, 1] = 2 * (ds * ds + s * dds) * np.sin(th) ** 2
        ddh[3, 1, 2] = ddh[3, 2, 1] = 2 * s * ds * np.sin(2 * th)
        ddh[3, 2, 2] = 2 * s * s * np.cos(2 * th)
        return h, dh, ddh

    def __call__(self, x):
        a = self.scale.a(x[0])
        h, _, _ = self._h(x)
        return a * a * np.diag(h * np.array([1.0, -1.0, -1.0, -1.0]))

    def grad(self, x):
        t = x[0]
        a, ad = self.scale.a(t), self.scale.adot(t)
        h, dh, _ = self._h(x)
        sig = np.array([1.0, -1.0, -1.0, -1.0])
        d = np.zeros((4, 4, 4))
        for i in range(4):
            d[i, i, 0] = 2 * a * ad * sig[i] * h[i]
            d[i, i, 1:] = a * a * sig[i] * dh[i, 1:]
        return d

    def hess(self, x):
        t = x[0]
        a, ad, add = self.scale.a(t), self.scale.adot(t), self.scale.addot(t)
        h, dh, ddh = self._h(x)
        sig = np.array([1.0, -1.0, -1.0, -1.0])
        out = np.zeros((4, 4, 4, 4))
        for i in range(4):
            out[i, i, 0, 0] = 2 * (ad * ad + a * add) * sig[i] * h[i]
            out[i, i, 0, 1:] = out[i, i, 1:, 0] = 2 * a * ad * sig[i] * dh[i, 1:]
            out[i, i, 1:, 1:] = a * a * sig[i] * ddh[i, 1:, 1:]
        return out


def friedmann_space(model="closed", scale=None):
    """Conformal-chart Friedmann space with Levi-Civita connection."""
    scale = scale or ScaleFactor.cosh()
    metric = ConformalMetric(model, scale)
    space = MetricAffineSpace(metric, LeviCivitaConnection(metric), 4, "levi-civita")
    return space


def friedmann_connection_time_components(space, p):
    """Closed-form Gamma^0_00 = a'/a, Gamma^0_aa = (a'/a) h_a, Gamma^a_0a = a'/a.

    Returns the (4, 4, 4) array holding only these components, for
    comparison with the full Christoffel symbols.
    """
    x = as_point(p)
    scale = space.metric.scale
    hub = scale.adot(x[0]) / scale.a(x[0])
    h, _, _ = space.metric._h(x)
    g = np.zeros((4, 4, 4))
    g[0, 0, 0] = hub
    for al in range(1, 4):
        g[0, al, al] = hub * h[al]
        g[al, 0, al] = g[al, al, 0] = hub
    return g


def redshift_factor(scale, t1, t2):
    """K = omega_2 / omega_1 = a(t1) / a(t2)."""
    return scale.a(t1) / scale.a(t2)


def redshift_rate(scale, t1, t2):
    """dK/dt1 with both ends shifted together: (a1' a2 - a1 a2') / a2^2."""
    a1, a2 = scale.a(t1), scale.a(t2)
    return (scale.adot(t1) * a2 - a1 * scale.adot(t2)) / a2**2


def friedmann_redshift(space, t1, chi1, chi2):
    """Redshift between comoving points chi1 -> chi2 for light leaving at t1.

    Returns
    -------
    K : float
        a(t1)/a(t2) with t2 = t1 + |chi2 - chi1|.
    K_dot : float
        Its rate of change with t1.
    t2 : float
        Arrival time.
    """
    scale = space.metric.scale
    t2 = t1 + abs(chi2 - chi1)
    return redshift_factor(scale, t1, t2), redshift_rate(scale, t1, t2), t2


def null_ray(space, t1, t2, chi1=0.5, theta=0.5 * np.pi, phi=0.0, omega1=1.0, config=None, samples=20):
    """Integrate a radial null geodesic in the conformal chart, t as parameter.

    Starts with k^0 = omega1 / a(t1), k^1 = k^0 and integrates
    dk^i = -Gamma^i_jk k^j dx^k with dx^i = (k^i / k^0) dt.

    Returns
    -------
    dict
        ``t``, ``chi``, ``k0``, ``k1`` samples, the comoving frequency
        ``omega`` = a k^0 and the conserved product ``a_omega``.
    """
    x0 = as_point([t1, chi1, theta, phi])
    a1 = space.metric.scale.a(t1)
    k0 = omega1 / a1

    def rhs(t, y):
        chi, c0, c1 = y
        x = np.array([t, chi, theta, phi])
        gam = space.connection(x)
        k = np.array([c0, c1, 0.0, 0.0])
        dk = -np.einsum("ijk,j,k->i", gam, k, k) / c0
        return np.array([c1 / c0, dk[0], dk[1]])

    cfg = config or IntegratorConfig(rtol=1e-12, atol=1e-14)
    sol = integrate(rhs, (t1, t2), [x0[1], k0, k0], cfg, np.linspace(t1, t2, samples))
    a = np.array([space.metric.scale.a(t) for t in sol.s])
    return {"t": sol.s, "chi": sol.y[:, 0], "k0": sol.y[:, 1], "k1": sol.y[:, 2], "omega": a * sol.y[:, 1], "a_omega": a * a * sol.y[:, 1]}


# ---------------------------------------------------------------------------
# cosmic-time chart and boosts


class CosmicMetric:
    """Cosmic-time metric c^2 dt^2 - a^2 (dchi^2 + S^2 dOmega^2); no derivatives supplied."""

    def __init__(self, model, scale, c=C):
        self.model = model
        self.scale = scale
        self.c = float(c)
        self._s = _profile(model)[0]

    def __call__(self, x):
        t, chi, th = x[0], x[1], x[2]
        a = self.scale.a(t)
        s = self._s(chi)
        return np.diag([self.c**2, -(a**2), -(a * s) ** 2, -(a * s * np.sin(th)) ** 2])


def cosmic_space(model="closed", scale=None, c=C):
    scale = scale or ScaleFactor.cosh()
    metric = CosmicMetric(model, scale, c)
    return MetricAffineSpace(metric, LeviCivitaConnection(metric), 4, "levi-civita")


def comoving_frame(space, p):
    """Frame of a comoving observer: e_0 = (1/c, 0, 0, 0), e_1 = (0, 1/a, 0, 0), ..."""
    x = as_point(p)
    g = space.metric(x)
    return Frame(np.diag(1.0 / np.sqrt(np.abs(np.diag(g)))), ETA)


def friedmann_boost(space, p, v=None, V=None):
    """Comoving frame and the frame of an observer moving along chi.

    Parameters
    ----------
    v : float, optional
        Coordinate speed dchi/dt.
    V : float, optional
        Measured speed a v; give exactly one of ``v`` and ``V``.

    Returns
    -------
    e, e_prime : Frame
        e'_0 = gamma e_0 + gamma (V/c) e_1, e'_1 = gamma (V/c) e_0 + gamma e_1.
    """
    x = as_point(p)
    a = space.metric.scale.a(x[0])
    c = space.metric.c
    if (v is None) == (V is None):
        raise ConfigError("give exactly one of v and V")
    if V is None:
        V = a * v
    e = comoving_frame(space, x)
    return e, boost_frame(e, boost_map(V / c, 1, ETA))


def friedmann_boost_closed_form(space, p, V):
    """Components of e'_0 and e'_1 written out directly.

    e'_0 = (gamma/c, gamma V/(c a), 0, 0), e'_1 = (gamma V/c^2, gamma/a, 0, 0).
    """
    x = as_point(p)
    a = space.metric.scale.a(x[0])
    c = space.metric.c
    gamma = 1.0 / np.sqrt(1.0 - (V / c) ** 2)
    e0 = np.array([gamma / c, gamma * V / (c * a), 0.0, 0.0])
    e1 = np.array([gamma * V / c**2, gamma / a, 0.0, 0.0])
    return e0, e1
