"""Schwarzschild spacetime in the chart (t, r, phi, theta), phi polar.

ds^2 = (r - rg)/r c^2 dt^2 - r/(r - rg) dr^2 - r^2 dphi^2 - r^2 sin^2(phi) dtheta^2.

Metric and connection carry analytic first and second derivatives, so the
geometry routines run without finite differences on this space.
"""

import numpy as np

from ..constants import C, G, schwarzschild_radius
from ..errors import RegionError
from ..frames import Frame, FrameField, boost_map, boost_frame
from ..geometry import MetricAffineSpace
from ..integrate import IntegratorConfig, integrate
from ..tensor_core import as_point

T, R, PHI, THETA = range(4)
ETA = np.array([1.0, -1.0, -1.0, -1.0])


def _check(rg, r):
    if not r > rg:
        raise RegionError(f"r = {r:.6g} is not outside the Schwarzschild radius {rg:.6g}")


class SchwarzschildMetric:
    """Metric field with analytic gradient and Hessian."""

    def __init__(self, rg, c=C):
        self.rg = float(rg)
        self.c = float(c)

    def __call__(self, x):
        r, ph = x[R], x[PHI]
        _check(self.rg, r)
        f = (r - self.rg) / r
        return np.diag([f * self.c**2, -1.0 / f, -(r**2), -(r**2) * np.sin(ph) ** 2])

    def grad(self, x):
        r, ph = x[R], x[PHI]
        _check(self.rg, r)
        rg, c = self.rg, self.c
        d = np.zeros((4, 4, 4))
        d[0, 0, R] = c**2 * rg / r**2
        d[1, 1, R] = rg / (r - rg) ** 2
        d[2, 2, R] = -2.0 * r
        d[3, 3, R] = -2.0 * r * np.sin(ph) ** 2
        d[3, 3, PHI] = -(r**2) * np.sin(2.0 * ph)
        return d

    def hess(self, x):
        r, ph = x[R], x[PHI]
        _check(self.rg, r)
        rg, c = self.rg, self.c
        h = np.zeros((4, 4, 4, 4))
        h[0, 0, R, R] = -2.0 * c**2 * rg / r**3
        h[1, 1, R, R] = -2.0 * rg / (r - rg) ** 3
        h[2, 2, R, R] = -2.0
        h[3, 3, R, R] = -2.0 * np.sin(ph) ** 2
        h[3, 3, R, PHI] = h[3, 3, PHI, R] = -2.0 * r * np.sin(2.0 * ph)
        h[3, 3, PHI, PHI] = -2.0 * r**2 * np.cos(2.0 * ph)
        return h


class SchwarzschildConnection:
    """Analytic Christoffel symbols of :class:`SchwarzschildMetric` with gradient."""

    def __init__(self, rg, c=C):
        self.rg = float(rg)
        self.c = float(c)

    def __call__(self, x):
        r, ph = x[R], x[PHI]
        _check(self.rg, r)
        rg, c = self.rg, self.c
        g = np.zeros((4, 4, 4))
        g[0, 0, 1] = g[0, 1, 0] = rg / (2.0 * r * (r - rg))
        g[1, 0, 0] = c**2 * rg * (r - rg) / (2.0 * r**3)
        g[1, 1, 1] = -rg / (2.0 * r * (r - rg))
        g[1, 2, 2] = -(r - rg)
        g[1, 3, 3] = -(r - rg) * np.sin(ph) ** 2
        g[2, 1, 2] = g[2, 2, 1] = 1.0 / r
        g[2, 3, 3] = -np.sin(ph) * np.cos(ph)
        g[3, 1, 3] = g[3, 3, 1] = 1.0 / r
        g[3, 2, 3] = g[3, 3, 2] = np.cos(ph) / np.sin(ph)
        return g

    def grad(self, x):
        r, ph = x[R], x[PHI]
        _check(self.rg, r)
        rg, c = self.rg, self.c
        d = np.zeros((4, 4, 4, 4))
        d[0, 0, 1, R] = d[0, 1, 0, R] = -rg * (2.0 * r - rg) / (2.0 * r**2 * (r - rg) ** 2)
        d[1, 0, 0, R] = c**2 * rg * (3.0 * rg - 2.0 * r) / (2.0 * r**4)
        d[1, 1, 1, R] = rg * (2.0 * r - rg) / (2.0 * r**2 * (r - rg) ** 2)
        d[1, 2, 2, R] = -1.0
        d[1, 3, 3, R] = -np.sin(ph) ** 2
        d[1, 3, 3, PHI] = -(r - rg) * np.sin(2.0 * ph)
        d[2, 1, 2, R] = d[2, 2, 1, R] = -1.0 / r**2
        d[2, 3, 3, PHI] = -np.cos(2.0 * ph)
        d[3, 1, 3, R] = d[3, 3, 1, R] = -1.0 / r**2
        d[3, 2, 3, PHI] = d[3, 3, 2, PHI] = -1.0 / np.sin(ph) ** 2
        return d


def schwarzschild_space(rg=None, mass=None, c=C, g_const=G):
    """Schwarzschild space from ``rg`` (cm) or a central ``mass`` (g)."""
    if rg is None:
        if mass is None:
            raise ValueError("give rg or mass")
        rg = schwarzschild_radius(mass, g_const, c)
    space = MetricAffineSpace(SchwarzschildMetric(rg, c), SchwarzschildConnection(rg, c), 4, "levi-civita")
    return space


def rg_of(space):
    return space.metric.rg


def c_of(space):
    return space.metric.c


def schwarzschild_connection(space, p):
    """Analytic Christoffel symbols at ``p``."""
    return space.connection(as_point(p))


# ---------------------------------------------------------------------------
# static frame


def static_frame(space):
    """Frame of observers at rest: e_(0) ~ d_t, e_(1) ~ d_r, e_(2) ~ d_phi, e_(3) ~ d_theta."""
    rg, c = rg_of(space), c_of(space)

    def vectors(x):
        r, ph = x[R], x[PHI]
        _check(rg, r)
        return np.diag([np.sqrt(r / (r - rg)) / c, np.sqrt((r - rg) / r), 1.0 / r, 1.0 / (r * np.sin(ph))])

    def duals(x):
        return np.linalg.inv(vectors(x))

    return FrameField(vectors, ETA, duals)


def equatorial_circular_orbit(space, r, omega, t0=0.0):
    """Circular orbit in theta at phi = pi/2 with dtheta/dt = omega.

    Returns
    -------
    curve : callable
        ``t -> x``.
    velocity : callable
        ``t -> dx/dt``.
    """
    _check(rg_of(space), r)

    def curve(t):
        return np.array([t, r, 0.5 * np.pi, omega * (t - t0)])

    def velocity(t):
        return np.array([1.0, 0.0, 0.0, omega])

    return curve, velocity


def kepler_angular_speed(space, r):
    """Coordinate angular speed dtheta/dt of a circular geodesic, sqrt(rg c^2 / (2 r^3))."""
    rg, c = rg_of(space), c_of(space)
    _check(rg, r)
    return np.sqrt(rg * c**2 / (2.0 * r**3))


def orbiting_frame(space, omega, axis=THETA):
    """Frame of observers circling with coordinate angular speed ``omega``.

    Boosts the static frame along ``axis`` (PHI or THETA) with the locally
    measured speed V = sqrt(r/(r - rg)) r omega (times sin(phi) for the
    theta direction).
    """
    rg, c = rg_of(space), c_of(space)
    base = static_frame(space)

    def vectors(x):
        r, ph = x[R], x[PHI]
        scale = r if axis == PHI else r * np.sin(ph)
        v = np.sqrt(r / (r - rg)) * scale * omega
        frame = Frame(base(x), ETA)
        return boost_frame(frame, boost_map(v / c, axis, ETA)).vectors

    return FrameField(vectors, ETA)


# ---------------------------------------------------------------------------
# radial photon


def radial_photon_redshift(space, r_emit, r_obs, omega_emit):
    """Frequency seen by a static observer at ``r_obs`` for light emitted at ``r_emit``.

    omega_obs = omega_emit sqrt((r_emit - rg) r_obs / (r_emit (r_obs - rg))),
    the ratio of the local factors sqrt(r/(r - rg)).
    """
    rg = rg_of(space)
    _check(rg, r_emit)
    _check(rg, r_obs)
    return omega_emit * np.sqrt((r_emit - rg) * r_obs / (r_emit * (r_obs - rg)))


def local_frequency(space, r, k0):
    """Frequency measured by a static observer, c k^0 sqrt((r - rg)/r)."""
    rg, c = rg_of(space), c_of(space)
    return c * k0 * np.sqrt((r - rg) / r)


def radial_photon_ode(space, r_emit, r_obs, omega_emit, config=None, samples=None):
    """Integrate dk^i = -Gamma^i_kl k^k dx^l along a radial null ray.

    Uses r as the integration variable (dlambda = dr / k^1) and starts from
    k^0 = (omega/c) sqrt(r/(r - rg)), k^1 = +-omega sqrt((r - rg)/r).

    Returns
    -------
    omega_obs : float
        Local frequency at ``r_obs``.
    path : dict
        ``r``, ``t``, ``k0``, ``k1`` samples along the ray.
    """
    rg, c = rg_of(space), c_of(space)
    _check(rg, r_emit)
    _check(rg, r_obs)
    if r_emit == r_obs:
        return float(omega_emit), {"r": np.array([r_emit]), "t": np.zeros(1), "k0": None, "k1": None}
    sign = 1.0 if r_obs > r_emit else -1.0
    # dimensionless state: tau = c t / rg, kappa0 = c k^0 / omega, kappa1 = k^1 / omega
    kappa0 = np.sqrt(r_emit / (r_emit - rg))
    kappa1 = sign * np.sqrt((r_emit - rg) / r_emit)
    gam_field = space.connection

    def rhs(rho, y):
        tau, q0, q1 = y
        x = np.array([tau * rg / c, rho * rg, 0.5 * np.pi, 0.0])
        gam = gam_field(x)
        k = np.array([q0 * omega_emit / c, q1 * omega_emit, 0.0, 0.0])
        dk = -np.einsum("ikl,k,l->i", gam, k, k) / k[1]
        return np.array([c * k[0] / k[1], c * rg * dk[0] / omega_emit, rg * dk[1] / omega_emit])

    cfg = config or IntegratorConfig(rtol=1e-12, atol=1e-14)
    rho0, rho1 = r_emit / rg, r_obs / rg
    s_eval = None if samples is None else np.linspace(rho0, rho1, samples)
    sol = integrate(rhs, (rho0, rho1), [0.0, kappa0, kappa1], cfg, s_eval)
    k0_end = sol.y[-1, 1] * omega_emit / c
    path = {
        "r": sol.s * rg,
        "t": sol.y[:, 0] * rg / c,
        "k0": sol.y[:, 1] * omega_emit / c,
        "k1": sol.y[:, 2] * omega_emit,
    }
    return float(local_frequency(space, r_obs, k0_end)), path
