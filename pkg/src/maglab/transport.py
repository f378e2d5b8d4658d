"""Transport along curves: parallel and Cartan transport, autoparallels,
extremals, Frenet frames, tidal deviation, parallelogram closure and motion
under scalar or vector potentials.

Transport equations use the connection convention of :mod:`maglab.geometry`,
da^k = -Gamma^k_ij a^i dx^j, with the direction of motion in the last slot.
Three connections can drive a transport: the space's own (``"gamma"``), its
Cartan connection Gamma - Gamma(C) (``"cartan"``), or the space's connection
plus a user shift A (``"shifted"``).
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .constants import C
from .errors import ConfigError, OrthogonalizationError
from .geometry import (
    CartanConnection,
    ShiftedConnection,
    cartan_connection,
    covariant_derivative,
    lie_derivative_connection,
    metric_covariant_derivative,
    torsion,
)
from .integrate import IntegratorConfig, integrate
from .tensor_core import as_point, derivative, gradient, invert_metric

CONNECTIONS = ("gamma", "cartan", "shifted")
FRENET_MIN_CURVATURE = 1e-10


@dataclass(frozen=True)
class Trajectory:
    """Sampled curve with tangent and optional carried quantities.

    Attributes
    ----------
    s : ndarray
        Arc parameter values.
    x : ndarray
        ``(len(s), n)`` positions.
    u : ndarray
        ``(len(s), n)`` tangents dx/ds.
    carried : dict
        Extra transported arrays keyed by name, first axis along ``s``.
    nsteps : int
        Accepted integrator steps.
    """

    s: np.ndarray
    x: np.ndarray
    u: np.ndarray
    carried: dict = field(default_factory=dict)
    nsteps: int = 0


def connection_field(space, connection="gamma", shift=None):
    """Connection field selected by name."""
    if connection == "gamma":
        return space.connection
    if connection == "cartan":
        if space.label in ("levi-civita", "cartan"):
            return space.connection
        return CartanConnection(space)
    if connection == "shifted":
        if shift is None:
            raise ConfigError("the shifted connection needs a shift field")
        return ShiftedConnection(space.connection, shift)
    raise ConfigError(f"connection must be one of {CONNECTIONS}, got {connection!r}")


def tangent_norm(space, traj):
    """g_ij u^i u^j along a trajectory."""
    return np.array([u @ space.metric(x) @ u for x, u in zip(traj.x, traj.u)])


def _config(config):
    return config or IntegratorConfig()


# ---------------------------------------------------------------------------
# transport along a given curve and self-transport


def parallel_transport(space, curve, velocity, v0, s_span, connection="gamma", shift=None, config=None, s_eval=None):
    """Transport vectors along a prescribed curve.

    Solves dv^k/ds = -Gamma^k_ij v^i u^j with u = velocity(s).

    Parameters
    ----------
    curve, velocity : callable
        ``s -> x`` and ``s -> dx/ds``.
    v0 : array_like
        ``(n,)`` vector or ``(n, m)`` stack of column vectors at ``s_span[0]``.
    connection : {"gamma", "cartan", "shifted"}

    Returns
    -------
    s : ndarray
    v : ndarray
        Shape ``(len(s),) + v0.shape``.
    """
    gam_field = connection_field(space, connection, shift)
    v0 = np.asarray(v0, dtype=float)
    shape = v0.shape

    def rhs(s, y):
        x = as_point(curve(s))
        gam = gam_field(x)
        u = np.asarray(velocity(s), dtype=float)
        v = y.reshape(shape)
        return -np.einsum("kij,i...,j->k...", gam, v, u).reshape(-1)

    sol = integrate(rhs, s_span, v0.reshape(-1), _config(config), s_eval)
    return sol.s, sol.y.reshape((len(sol.s),) + shape)


def autoparallel(space, x0, u0, s_span, connection="gamma", shift=None, config=None, s_eval=None, carry=None):
    """Curve whose tangent is transported along itself.

    du^k/ds = -Gamma^k_ij u^i u^j. Optional ``carry`` vectors ``(n, m)``
    are transported along the curve with the same connection and returned
    in ``carried["vectors"]``.
    """
    gam_field = connection_field(space, connection, shift)
    x0 = as_point(x0)
    u0 = np.asarray(u0, dtype=float)
    if not np.any(u0):
        raise ConfigError("initial tangent must be nonzero")
    n = x0.size
    extra = None if carry is None else np.asarray(carry, dtype=float).reshape(n, -1)

    def rhs(s, y):
        x, u = y[:n], y[n : 2 * n]
        gam = gam_field(x)
        out = [u, -kernels.quadratic(gam, u, u)]
        if extra is not None:
            v = y[2 * n :].reshape(extra.shape)
            out.append(-np.einsum("kij,im,j->km", gam, v, u).reshape(-1))
        return np.concatenate(out)

    y0 = np.concatenate([x0, u0] + ([] if extra is None else [extra.reshape(-1)]))
    sol = integrate(rhs, s_span, y0, _config(config), s_eval)
    carried = {}
    if extra is not None:
        carried["vectors"] = sol.y[:, 2 * n :].reshape((len(sol.s),) + extra.shape)
    return Trajectory(sol.s, sol.y[:, :n], sol.y[:, n : 2 * n], carried, sol.nsteps)


def extremal_acceleration(space, x, u):
    """Right side of the extremal equation, 1/2 g^il (g_kj;i - g_ik;j - g_ij;k) u^k u^j.

    This is the covariant acceleration D u^l / ds of a curve of stationary
    length in a space whose connection need not preserve the metric.
    """
    x = as_point(x)
    ginv = invert_metric(space.metric(x))
    d = metric_covariant_derivative(space, x)  # d[i, j, k] = g_ij;k
    comb = np.einsum("kji->ikj", d) - np.einsum("ikj->ikj", d) - np.einsum("ijk->ikj", d)
    return 0.5 * ginv @ np.einsum("ikj,k,j->i", comb, u, u)


def extremal(space, x0, u0, s_span, config=None, s_eval=None):
    """Extremal line: du^l/ds = -Gamma^l_kj u^k u^j + 1/2 g^il (g_kj;i - g_ik;j - g_ij;k) u^k u^j.

    Integrated from the metric covariant derivative of the space's own
    connection, independently of :func:`cartan_connection`. The tangent
    length g_ij u^i u^j is conserved.
    """
    x0 = as_point(x0)
    u0 = np.asarray(u0, dtype=float)
    if not np.any(u0):
        raise ConfigError("initial tangent must be nonzero")
    n = x0.size

    def rhs(s, y):
        x, u = y[:n], y[n:]
        gam = space.connection(x)
        return np.concatenate([u, -kernels.quadratic(gam, u, u) + extremal_acceleration(space, x, u)])

    sol = integrate(rhs, s_span, np.concatenate([x0, u0]), _config(config), s_eval)
    return Trajectory(sol.s, sol.y[:, :n], sol.y[:, n:], {}, sol.nsteps)


def curve_length(space, points):
    """Length sum sqrt(|g_ij dx^i dx^j|) of a polyline, metric at segment midpoints."""
    pts = np.asarray(points, dtype=float)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        d = b - a
        total += np.sqrt(abs(d @ space.metric(0.5 * (a + b)) @ d))
    return total


# ---------------------------------------------------------------------------
# Frenet frames


def _covariant_rate(space, gam_field, curve, vec, s):
    """D w / ds for a vector function ``vec(s)`` along ``curve``."""
    x = as_point(curve(s))
    u = derivative(curve, s)
    return derivative(vec, s) + kernels.quadratic(gam_field(x), vec(s), u)


def frenet_frame(space, curve, s, order=None, connection="cartan"):
    """Frenet vectors and curvatures of a curve at parameter ``s``.

    nu_1 is the unit tangent; each next vector is the normalized part of
    D nu_p / ds orthogonal to nu_1..nu_p, where D is the covariant
    derivative of the chosen connection (Cartan by default, so lengths are
    measured consistently with the metric). Once a curvature drops below
    ``FRENET_MIN_CURVATURE`` the remaining vectors are completed by
    Gram-Schmidt on the coordinate basis and their curvatures set to 0.

    Returns
    -------
    nu : ndarray
        ``(n, m)`` Frenet vectors as columns, m = order + 1.
    curvatures : ndarray
        ``(m - 1,)`` values xi_p.
    eps : ndarray
        Signs g(nu_p, nu_p).

    Raises
    ------
    OrthogonalizationError
        If some D nu_p / ds has an isotropic (null) orthogonal part.
    """
    gam_field = connection_field(space, connection)
    x = as_point(curve(s))
    n = x.size
    m = n if order is None else order + 1

    def nu_chain(t, upto):
        """Frenet vectors nu_0..nu_upto and curvatures at parameter t."""
        g = space.metric(as_point(curve(t)))
        u = derivative(curve, t)
        nrm = u @ g @ u
        if abs(nrm) == 0.0:
            raise OrthogonalizationError("curve tangent is null")
        vecs = [u / np.sqrt(abs(nrm))]
        eps = [np.sign(nrm)]
        xis = []
        for p in range(upto):

            def nu_p(tt, p=p):
                return nu_chain(tt, p)[0][p]

            rate = _covariant_rate(space, gam_field, curve, nu_p, t)
            r = rate.copy()
            for q in range(p + 1):
                r -= eps[q] * (rate @ g @ vecs[q]) * vecs[q]
            n2 = r @ g @ r
            size = np.abs(r) @ np.abs(g) @ np.abs(r)
            xi = np.sqrt(abs(n2))
            if np.sqrt(size) < FRENET_MIN_CURVATURE:
                return vecs, xis, eps, False
            if abs(n2) <= 1e-10 * size:
                raise OrthogonalizationError(f"Frenet vector {p + 1} is isotropic")
            vecs.append(r / xi)
            eps.append(np.sign(n2))
            xis.append(xi)
        return vecs, xis, eps, True

    vecs, xis, eps, complete = nu_chain(s, m - 1)
    if not complete:
        g = space.metric(x)
        seeds = np.column_stack(vecs + [np.eye(n)[:, k] for k in range(n)])
        filled = list(vecs)
        signs = list(eps)
        for k in range(len(vecs), seeds.shape[1]):
            if len(filled) == m:
                break
            v = seeds[:, k].copy()
            for q, w in enumerate(filled):
                v -= signs[q] * (v @ g @ w) * w
            n2 = v @ g @ v
            if abs(n2) > 1e-8:
                filled.append(v / np.sqrt(abs(n2)))
                signs.append(np.sign(n2))
        vecs, eps = filled, signs
        xis = xis + [0.0] * (m - 1 - len(xis))
    return np.column_stack(vecs), np.asarray(xis, dtype=float), np.asarray(eps, dtype=float)


def frenet_matrix(curvatures, eps):
    """Coefficients a^q_p of D nu_p / ds = a^q_p nu_q.

    a^{p+1}_p = xi_p, a^p_{p+1} = -eps_p eps_{p+1} xi_p, zero diagonal;
    returned as ``a[q, p]``.
    """
    m = len(eps)
    a = np.zeros((m, m))
    for p, xi in enumerate(curvatures):
        a[p + 1, p] = xi
        a[p, p + 1] = -eps[p] * eps[p + 1] * xi
    return a


def frenet_transport(space, curve, s_span, frame0=None, order=None, connection="cartan", config=None, s_eval=None):
    """Carry a Frenet frame along a curve with D nu_p / ds = a^q_p nu_q.

    The curvatures are recomputed from the curve at each step, and the
    frame is transported with the chosen connection. Higher curvatures come
    from nested finite differences and carry noise near 1e-6, so the
    default tolerances are looser than elsewhere (rtol 1e-8).

    Returns
    -------
    s : ndarray
    frames : ndarray
        ``(len(s), n, m)`` carried frames (columns are nu_p).
    """
    gam_field = connection_field(space, connection)
    s0 = s_span[0]
    nu0, _, eps = frenet_frame(space, curve, s0, order, connection)
    if frame0 is not None:
        nu0 = np.asarray(frame0, dtype=float)
    shape = nu0.shape

    def rhs(s, y):
        nu = y.reshape(shape)
        x = as_point(curve(s))
        u = derivative(curve, s)
        _, xis, _ = frenet_frame(space, curve, s, order, connection)
        a = frenet_matrix(xis, eps)
        return (-np.einsum("kij,im,j->km", gam_field(x), nu, u) + nu @ a).reshape(-1)

    cfg = config or IntegratorConfig(rtol=1e-8, atol=1e-10)
    sol = integrate(rhs, s_span, nu0.reshape(-1), cfg, s_eval)
    return sol.s, sol.y.reshape((len(sol.s),) + shape)


# ---------------------------------------------------------------------------
# tidal deviation


@dataclass(frozen=True)
class Deviation:
    """Base trajectory with its deviation vector and covariant rate.

    Attributes
    ----------
    s, x, v : ndarray
        Base curve samples and tangent.
    dx : ndarray
        Deviation vector delta x^i.
    w : ndarray
        Covariant rate D delta x^i / ds.
    """

    s: np.ndarray
    x: np.ndarray
    v: np.ndarray
    dx: np.ndarray
    w: np.ndarray


def _zero_accel(x, v):
    return np.zeros_like(v)


def linearized_accel_difference(accel):
    """a2 - a1 to first order for two observers sharing one law a(x, v).

    Returns a callable ``(x, v, dx, dxdot) -> d_x a . dx + d_v a . dxdot``
    where ``dxdot`` is the coordinate rate of the deviation.
    """

    def diff(x, v, dx, dxdot):
        n = x.size
        ax = gradient(lambda y: accel(y[:n], y[n:]), np.concatenate([x, v]))
        return ax[:, :n] @ dx + ax[:, n:] @ dxdot

    return diff


def tidal_rhs(space, x, v, dx, w, a1, a_diff):
    """Covariant tidal acceleration D^2 delta x^i / ds^2.

    T^i_ln w^n v^l + (R^i_klm + T^i_km;l) dx^m v^k v^l + (a2 - a1)
    + Gamma^i_ml dx^m a1^l, with w = D delta x / ds.
    """
    gam = space.connection(x)
    dgam = gradient(space.connection, x)
    r = kernels.riemann(gam, dgam)
    tor = gam.transpose(0, 2, 1) - gam
    ntor = covariant_derivative(tor, dgam.transpose(0, 2, 1, 3) - dgam, gam, 1)
    return (
        np.einsum("iln,n,l->i", tor, w, v)
        + np.einsum("iklm,m,k,l->i", r + ntor.transpose(0, 1, 3, 2), dx, v, v)
        + a_diff
        + np.einsum("iml,m,l->i", gam, dx, a1)
    )


def tidal_deviation(space, x0, v0, dx0, w0, s_span, accel=None, accel_difference=None, config=None, s_eval=None):
    """Integrate a base trajectory together with the tidal equation.

    Parameters
    ----------
    x0, v0 : array_like
        Base observer's start point and tangent.
    dx0, w0 : array_like
        Initial deviation and its covariant rate D delta x / ds.
    accel : callable, optional
        ``(x, v) -> a1``, the base observer's covariant acceleration
        D v / ds. Zero (autoparallel motion) by default.
    accel_difference : callable, optional
        ``(x, v, dx, dxdot) -> a2 - a1``. Defaults to the linearization of
        ``accel``, meaning both observers obey the same force law.

    Returns
    -------
    Deviation
    """
    accel = accel or _zero_accel
    if accel_difference is None:
        accel_difference = linearized_accel_difference(accel) if accel is not _zero_accel else None
    x0 = as_point(x0)
    n = x0.size

    def rhs(s, y):
        x, v, dx, w = y[:n], y[n : 2 * n], y[2 * n : 3 * n], y[3 * n :]
        gam = space.connection(x)
        a1 = np.asarray(accel(x, v), dtype=float)
        dxdot = w - kernels.quadratic(gam, dx, v)
        a_diff = np.zeros(n) if accel_difference is None else accel_difference(x, v, dx, dxdot)
        dv = -kernels.quadratic(gam, v, v) + a1
        dw = tidal_rhs(space, x, v, dx, w, a1, a_diff) - kernels.quadratic(gam, w, v)
        return np.concatenate([v, dv, dxdot, dw])

    y0 = np.concatenate([x0, np.asarray(v0, float), np.asarray(dx0, float), np.asarray(w0, float)])
    sol = integrate(rhs, s_span, y0, _config(config), s_eval)
    y = sol.y
    return Deviation(sol.s, y[:, :n], y[:, n : 2 * n], y[:, 2 * n : 3 * n], y[:, 3 * n :])


def two_trajectory_deviation(space, x0, v0, dx0, w0, s_span, accel=None, config=None, s_eval=None):
    """Deviation from integrating both observers and subtracting.

    The second observer starts at x0 + dx0 with tangent
    v0 + (w0 - Gamma(dx0, v0)), the coordinate form of the same initial
    data, and obeys the same force law ``accel``.

    Returns
    -------
    s : ndarray
    dx : ndarray
        Coordinate difference x2 - x1 at each sample.
    """
    accel = accel or _zero_accel
    x0 = as_point(x0)
    n = x0.size
    v0 = np.asarray(v0, dtype=float)
    dx0 = np.asarray(dx0, dtype=float)
    gam0 = space.connection(x0)
    v2 = v0 + np.asarray(w0, dtype=float) - kernels.quadratic(gam0, dx0, v0)

    def rhs(s, y):
        out = []
        for k in (0, 1):
            x, v = y[2 * n * k : 2 * n * k + n], y[2 * n * k + n : 2 * n * (k + 1)]
            out += [v, -kernels.quadratic(space.connection(x), v, v) + accel(x, v)]
        return np.concatenate(out)

    sol = integrate(rhs, s_span, np.concatenate([x0, v0, x0 + dx0, v2]), _config(config), s_eval)
    return sol.s, sol.y[:, 2 * n : 3 * n] - sol.y[:, :n]


def deviation_extension(x, v, dx, dxdot, dxddot, dv):
    """Quadratic vector field xi with xi = dx along the curve to second order.

    xi(y) = dx + B (y - x) + 1/2 C (y - x)(y - x) with B v = dxdot and
    C(v, v) + B dv = dxddot, choosing the minimum-norm B and C.

    Returns
    -------
    callable
        Field with analytic ``grad`` and ``hess``.
    """
    vv = float(v @ v)
    b = np.outer(dxdot, v) / vv
    target = dxddot - b @ dv
    cc = np.einsum("a,b,c->abc", target, v, v) / vv**2

    class _Extension:
        def __call__(self, y):
            d = np.asarray(y, dtype=float) - x
            return dx + b @ d + 0.5 * np.einsum("abc,b,c->a", cc, d, d)

        def grad(self, y):
            d = np.asarray(y, dtype=float) - x
            return b + np.einsum("abc,c->ab", cc, d)

        def hess(self, y):
            return cc.copy()

    return _Extension()


def tidal_lie_residual(space, deviation, k, accel=None, accel_difference=None):
    """Residual of the tidal identity for the Lie derivative of the connection.

    At sample ``k`` of a deviation solution, extends delta x to a vector
    field xi (see :func:`deviation_extension`) and returns

        L_xi Gamma^i_kl v^k v^l - (a2 - a1 - a1^p d_p xi^i),

    which vanishes to integrator accuracy. For autoparallel pairs the
    contracted Lie derivative itself vanishes.

    Returns
    -------
    residual : ndarray
    scale : float
        Size of the largest term, for relative comparisons.
    """
    accel = accel or _zero_accel
    x, v, dx, w = deviation.x[k], deviation.v[k], deviation.dx[k], deviation.w[k]
    n = x.size
    gam = space.connection(x)
    dgam = gradient(space.connection, x)
    a1 = np.asarray(accel(x, v), dtype=float)
    dv = -kernels.quadratic(gam, v, v) + a1
    dxdot = w - kernels.quadratic(gam, dx, v)
    if accel_difference is None:
        a_diff = linearized_accel_difference(accel)(x, v, dx, dxdot) if accel is not _zero_accel else np.zeros(n)
    else:
        a_diff = accel_difference(x, v, dx, dxdot)
    dw = tidal_rhs(space, x, v, dx, w, a1, a_diff) - kernels.quadratic(gam, w, v)
    dxddot = (
        dw
        - np.einsum("kijp,i,j,p->k", dgam, dx, v, v)
        - kernels.quadratic(gam, dxdot, v)
        - kernels.quadratic(gam, dx, dv)
    )
    xi = deviation_extension(x, v, dx, dxdot, dxddot, dv)
    lie = np.einsum("abc,b,c->a", lie_derivative_connection(space, xi, x), v, v)
    expected = a_diff - xi.grad(x) @ a1
    scale = max(float(np.max(np.abs(lie))), float(np.max(np.abs(expected))), 1e-300)
    return lie - expected, scale


# ---------------------------------------------------------------------------
# parallelogram closure


def parallelogram_gap(space, p, a, b, rho, config=None):
    """Failure of a geodesic parallelogram with sides rho a, rho b to close.

    Walks along the autoparallel of ``a`` for canonical parameter ``rho``
    while transporting ``b``, then along the autoparallel of the transported
    ``b``; and symmetrically with ``a`` and ``b`` exchanged. Returns the
    end point of the b-then-a route minus the end point of the a-then-b
    route, equal to T^k_mn a^m b^n rho^2 + O(rho^3).
    """
    x0 = as_point(p)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cross = np.linalg.norm(np.outer(a, b) - np.outer(b, a))
    if cross <= 1e-12 * np.linalg.norm(a) * np.linalg.norm(b):
        raise ConfigError("parallelogram sides must not be collinear")
    cfg = config or IntegratorConfig(rtol=1e-13, atol=1e-15)

    def route(first, second):
        leg = autoparallel(space, x0, first, (0.0, rho), config=cfg, carry=second)
        mid = leg.x[-1]
        carried = leg.carried["vectors"][-1][:, 0]
        return autoparallel(space, mid, carried, (0.0, rho), config=cfg).x[-1]

    return route(b, a) - route(a, b)


def gap_convergence(space, p, a, b, rhos, component=None, config=None):
    """Fit gap ~ coefficient * rho^exponent over several sizes.

    Parameters
    ----------
    rhos : sequence of float
        Decreasing loop sizes.
    component : int, optional
        Gap component to fit; defaults to the one largest at the smallest rho.

    Returns
    -------
    exponent : float
        Least-squares slope of log|gap| against log rho.
    coefficient : ndarray
        gap / rho^2 at the smallest rho.
    gaps : ndarray
        ``(len(rhos), n)`` gap vectors.
    """
    rhos = np.asarray(rhos, dtype=float)
    gaps = np.array([parallelogram_gap(space, p, a, b, r, config) for r in rhos])
    k = int(np.argmax(np.abs(gaps[-1]))) if component is None else component
    mags = np.abs(gaps[:, k])
    if np.any(mags == 0.0):
        return np.inf, gaps[-1] / rhos[-1] ** 2, gaps
    slope = np.polyfit(np.log(rhos), np.log(mags), 1)[0]
    return float(slope), gaps[-1] / rhos[-1] ** 2, gaps


def torsion_bilinear(space, p, a, b):
    """T^k_mn a^m b^n at ``p``."""
    return np.einsum("kmn,m,n->k", torsion(space, p), a, b)


# ---------------------------------------------------------------------------
# forced motion


def field_strength(space, potential, p):
    """F_dc = A_d;c - A_c;d + S^p_dc A_p with S = -T and Cartan derivatives.

    Parameters
    ----------
    potential : callable
        Covector field A_k.

    Returns
    -------
    ndarray
        ``F[d, c]``; equals d_c A_d - d_d A_c, so it is gauge invariant.
    """
    x = as_point(p)
    a = np.asarray(potential(x), dtype=float)
    gam_hat = cartan_connection(space, x)
    na = covariant_derivative(a, gradient(potential, x), gam_hat, 0)  # na[d, c] = A_d;c
    s = -(gam_hat.transpose(0, 2, 1) - gam_hat)
    return na - na.T + np.einsum("pdc,p->dc", s, a)


def field_strength_coordinate(potential, p):
    """d_c A_d - d_d A_c as ``F[d, c]``."""
    da = gradient(potential, as_point(p))  # da[d, c] = d_c A_d
    return da - da.T


def forced_motion(
    space,
    x0,
    u0,
    s_span,
    scalar_potential=None,
    vector_potential=None,
    charge=1.0,
    mass=1.0,
    c=C,
    time_term=False,
    config=None,
    s_eval=None,
):
    """Trajectory of a massive particle under scalar or vector potentials.

    Uses Cartan transport D (Gamma - Gamma(C)) so free motion is extremal:

        D u^l / ds = (u^0 / (m c)) g^il d_i U
                     + (e / (m c^2)) g^ij F_li u^l.

    Parameters
    ----------
    scalar_potential : callable, optional
        U(x) entering the Lagrangian -m c ds - U dx^0.
    vector_potential : callable, optional
        Covector A_k(x) entering the action -m c ds - (e/c) A_k dx^k.
    time_term : bool
        Add the term -(1/(m c)) g^0l dU/ds from the full Euler-Lagrange
        equation of the scalar Lagrangian; it keeps g(u, u) constant.

    Raises
    ------
    ConfigError
        If ``mass <= 0``.
    """
    if not mass > 0:
        raise ConfigError("mass must be positive")
    gam_field = connection_field(space, "cartan")
    x0 = as_point(x0)
    n = x0.size

    def rhs(s, y):
        x, u = y[:n], y[n:]
        acc = -kernels.quadratic(gam_field(x), u, u)
        if scalar_potential is not None or vector_potential is not None:
            ginv = invert_metric(space.metric(x))
        if scalar_potential is not None:
            du = gradient(scalar_potential, x)
            acc = acc + (u[0] / (mass * c)) * (ginv @ du)
            if time_term:
                acc = acc - ginv[0] * float(du @ u) / (mass * c)
        if vector_potential is not None:
            f = field_strength_coordinate(vector_potential, x)
            acc = acc + (charge / (mass * c**2)) * np.einsum("ij,li,l->j", ginv, f, u)
        return np.concatenate([u, acc])

    sol = integrate(rhs, s_span, np.concatenate([x0, np.asarray(u0, float)]), _config(config), s_eval)
    return Trajectory(sol.s, sol.y[:, :n], sol.y[:, n:], {}, sol.nsteps)


def holonomy_loop(space, p, e1, e2, d1, d2, v0, config=None):
    """Transport ``v0`` around the coordinate rectangle p, p+d1 e1, p+d1 e1+d2 e2, p+d2 e2.

    Returns the change v_final - v0; for small loops it approaches
    -R^a_b12 v^b d1 d2 with 1, 2 the loop's axes in traversal order.
    """
    x0 = as_point(p)
    corners = [x0, x0 + d1 * e1, x0 + d1 * e1 + d2 * e2, x0 + d2 * e2, x0]
    v = np.asarray(v0, dtype=float)
    cfg = config or IntegratorConfig(rtol=1e-12, atol=1e-14)
    for a, b in zip(corners[:-1], corners[1:]):
        step = b - a
        _, vs = parallel_transport(space, lambda s, a=a, d=step: a + s * d, lambda s, d=step: d, v, (0.0, 1.0), config=cfg)
        v = vs[-1]
    return v - np.asarray(v0, dtype=float)


__all__ = [
    "Trajectory",
    "Deviation",
    "autoparallel",
    "connection_field",
    "curve_length",
    "extremal",
    "extremal_acceleration",
    "field_strength",
    "field_strength_coordinate",
    "forced_motion",
    "frenet_frame",
    "frenet_matrix",
    "frenet_transport",
    "gap_convergence",
    "holonomy_loop",
    "parallel_transport",
    "parallelogram_gap",
    "tangent_norm",
    "tidal_deviation",
    "tidal_lie_residual",
    "torsion_bilinear",
    "two_trajectory_deviation",
]
