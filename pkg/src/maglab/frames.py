"""Orthonormal frames, anholonomy, frame-indexed connections and boosts.

A frame at a point is stored as the matrix ``E`` with ``E[i, k]`` = e^i_(k),
so column k holds the components of the k-th frame vector; the dual forms
are the rows of ``D = inv(E)``, ``D[k, i]`` = e^(k)_i. Frame-indexed
results are returned as :class:`~maglab.tensor_core.Tensor` objects tagged
``basis="frame"`` so they cannot be combined with chart components by
accident.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline

from .errors import NotLorentzError, OrthogonalizationError
from .integrate import IntegratorConfig, integrate
from .tensor_core import Tensor, as_point, gradient

ORTHO_TOL = 1e-10
LORENTZ_TOL = 1e-12


@dataclass(frozen=True)
class Frame:
    """Frame vectors at one point together with the frame metric.

    Parameters
    ----------
    vectors : ndarray
        ``E[i, k]`` = e^i_(k).
    eta : ndarray
        Diagonal entries (+1 or -1) of the frame metric.
    """

    vectors: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        e = np.array(self.vectors, dtype=float)
        eta = np.array(self.eta, dtype=float)
        e.setflags(write=False)
        eta.setflags(write=False)
        object.__setattr__(self, "vectors", e)
        object.__setattr__(self, "eta", eta)

    @property
    def duals(self):
        """``D[k, i]`` = e^(k)_i."""
        return np.linalg.inv(self.vectors)

    def components(self, w):
        """Frame components w^(k) = e^(k)_i w^i of a chart vector."""
        return Tensor(self.duals @ np.asarray(w, dtype=float), 1, 0, "frame")

    def reconstruct(self, w_frame):
        """Chart components w^i = e^i_(k) w^(k)."""
        vals = w_frame.values if isinstance(w_frame, Tensor) else np.asarray(w_frame, dtype=float)
        return self.vectors @ vals

    def gram(self, g):
        """g_ij e^i_(k) e^j_(l); equals diag(eta) for an orthonormal frame."""
        return self.vectors.T @ np.asarray(g, dtype=float) @ self.vectors

    def orthonormality_error(self, g):
        return float(np.max(np.abs(self.gram(g) - np.diag(self.eta))))

    def duality_error(self):
        return float(np.max(np.abs(self.duals @ self.vectors - np.eye(len(self.eta)))))


class FrameField:
    """Frame field built from a callable ``x -> E``.

    Parameters
    ----------
    vectors : callable
        ``x -> (n, n)`` with columns the frame vectors.
    eta : array_like
        Frame metric diagonal.
    duals : callable, optional
        Analytic dual field ``x -> inv(E)``; may also carry ``grad``.
    """

    def __init__(self, vectors, eta, duals=None):
        self.vectors = vectors
        self.eta = None if eta is None else np.asarray(eta, dtype=float)
        self._duals = duals

    def __call__(self, x):
        return np.asarray(self.vectors(as_point(x)), dtype=float)

    def at(self, x):
        return Frame(self(x), self.eta)

    @property
    def duals(self):
        """Field ``x -> D`` of dual forms."""
        if self._duals is not None:
            return self._duals
        return lambda x: np.linalg.inv(self(x))


def coordinate_frame(n, eta=None):
    """The chart's own basis; only orthonormal for a matching flat metric."""
    eta = np.ones(n) if eta is None else eta
    return FrameField(lambda x: np.eye(n), eta)


# ---------------------------------------------------------------------------
# orthonormalization


def gram_schmidt(g, seeds, tol=ORTHO_TOL):
    """Orthonormalize ``seeds`` (columns) with respect to ``g``.

    Parameters
    ----------
    g : ndarray
        Metric components at the point; may be indefinite.
    seeds : ndarray
        ``(n, n)`` with seed vectors as columns, processed left to right.
    tol : float
        Relative threshold below which a residual vector counts as null
        or linearly dependent.

    Returns
    -------
    Frame
    """
    g = np.asarray(g, dtype=float)
    seeds = np.asarray(seeds, dtype=float)
    n = g.shape[0]
    vecs = np.zeros((n, n))
    eta = np.zeros(n)
    for k in range(n):
        s = seeds[:, k]
        v = s.copy()
        for j in range(k):
            v -= eta[j] * (s @ g @ vecs[:, j]) * vecs[:, j]
        norm2 = float(v @ g @ v)
        # compare with the seed's own size measured in a positive-definite way
        scale = float(np.abs(s) @ np.abs(g) @ np.abs(s))
        if scale == 0.0 or abs(norm2) <= tol * scale:
            raise OrthogonalizationError(f"seed {k} is null or linearly dependent on earlier seeds")
        eta[k] = np.sign(norm2)
        vecs[:, k] = v / np.sqrt(abs(norm2))
    return Frame(vecs, eta)


def gram_schmidt_frame(metric, seeds, p):
    """Orthonormal frame at ``p`` from seed vectors.

    Parameters
    ----------
    metric : callable
        Metric field.
    seeds : ndarray or callable
        Seed columns, or a field ``x -> seeds``.
    """
    x = as_point(p)
    s = seeds(x) if callable(seeds) else seeds
    return gram_schmidt(metric(x), s)


class OrthonormalizedFrame(FrameField):
    """Frame field obtained by orthonormalizing seeds at every point.

    Parameters
    ----------
    metric : callable
        Metric field.
    seeds : ndarray or callable, optional
        Seed columns (constant or a field); defaults to the coordinate basis.
    """

    def __init__(self, metric, seeds=None):
        self.metric = metric
        self.seeds = seeds
        super().__init__(lambda x: self.at(x).vectors, None)

    def _seeds(self, x):
        if self.seeds is None:
            return np.eye(len(x))
        return self.seeds(x) if callable(self.seeds) else self.seeds

    def at(self, x):
        x = as_point(x)
        return gram_schmidt(self.metric(x), self._seeds(x))


def gram_schmidt_field(metric, seeds=None):
    """Shorthand for :class:`OrthonormalizedFrame`."""
    return OrthonormalizedFrame(metric, seeds)


# ---------------------------------------------------------------------------
# anholonomy and frame connection


def anholonomy_object(frame, p):
    """Anholonomy c^(m)_(i)(j) = e^k_(i) e^l_(j) (d_l e^(m)_k - d_k e^(m)_l).

    These are the commutator coefficients [e_(i), e_(j)] = c^(m)_(i)(j) e_(m).

    Returns
    -------
    Tensor
        Frame-indexed (1, 2), antisymmetric in the lower pair.
    """
    x = as_point(p)
    e = frame(x)
    dd = gradient(frame.duals, x)
    c = np.einsum("ki,lj,mkl->mij", e, e, dd - dd.transpose(0, 2, 1))
    c = 0.5 * (c - c.transpose(0, 2, 1))
    return Tensor(c, 1, 2, "frame", antisymmetric=((1, 2),))


def frame_commutator(frame, p):
    """Frame components of [e_(i), e_(j)] computed from vector derivatives.

    Independent route to :func:`anholonomy_object`.
    """
    x = as_point(p)
    e = frame(x)
    de = gradient(frame, x)  # de[a, j, b] = d_b e^a_(j)
    lie = np.einsum("bi,ajb->aij", e, de) - np.einsum("bj,aib->aij", e, de)
    return Tensor(np.einsum("ma,aij->mij", np.linalg.inv(e), lie), 1, 2, "frame")


def anholonomic_connection(space, frame, p):
    """Connection in frame indices, G^(i)_(k)(q).

    e^(i)_j Gamma^j_lp e^l_(k) e^p_(q) - e^j_(k) e^p_(q) d_p e^(i)_j, so that
    parallel transport reads da^(i) = -G^(i)_(k)(q) a^(k) dx^(q) with
    dx^(q) = e^(q)_p dx^p.

    Returns
    -------
    Tensor
        Frame-indexed (1, 2) components ``G[i, k, q]``.
    """
    x = as_point(p)
    e = frame(x)
    d = np.linalg.inv(e)
    dd = gradient(frame.duals, x)
    gam = space.connection(x)
    out = np.einsum("ij,jlp,lk,pq->ikq", d, gam, e, e) - np.einsum("jk,pq,ijp->ikq", e, e, dd)
    return Tensor(out, 1, 2, "frame")


def frame_transport(space, frame, curve, velocity, a0, s_span, config=None, s_eval=None):
    """Parallel transport written in frame components.

    Integrates da^(i)/ds = -G^(i)_(k)(q) a^(k) u^(q) with G from
    :func:`anholonomic_connection` and u^(q) = e^(q)_p dx^p/ds.

    Parameters
    ----------
    a0 : array_like
        Frame components at ``curve(s_span[0])``.

    Returns
    -------
    s : ndarray
    a : ndarray
        Frame components along the curve.
    """

    def rhs(s, a):
        x = as_point(curve(s))
        uq = np.linalg.inv(frame(x)) @ np.asarray(velocity(s), dtype=float)
        return -np.einsum("ikq,k,q->i", anholonomic_connection(space, frame, x).values, a, uq)

    cfg = config or IntegratorConfig(rtol=1e-11, atol=1e-13)
    sol = integrate(rhs, s_span, np.asarray(a0, dtype=float), cfg, s_eval)
    return sol.s, sol.y


# ---------------------------------------------------------------------------
# loop integrals


def _closure(points, period):
    drift = points[-1] - points[0]
    if period is None:
        period = np.zeros(points.shape[1])
    period = np.asarray(period, dtype=float)
    residual = drift.copy()
    mask = period > 0
    residual[mask] = drift[mask] - period[mask] * np.round(drift[mask] / period[mask])
    scale = max(1.0, float(np.max(np.abs(points))))
    if np.max(np.abs(residual)) > 1e-9 * scale:
        raise ValueError("loop is not closed: first and last points differ")
    return drift - residual


def line_integral(frame, curve, velocity, t_span, index, segments=64, nodes=4):
    """Integral of e^(index)_k dx^k along a parameterized curve.

    Composite Gauss-Legendre quadrature with ``nodes`` points per segment.

    Parameters
    ----------
    curve, velocity : callable
        ``t -> x`` and ``t -> dx/dt``.
    t_span : (float, float)
        Parameter interval.
    """
    t0, t1 = t_span
    xg, wg = leggauss(nodes)
    edges = np.linspace(t0, t1, segments + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        for xi, wi in zip(xg, wg):
            t = mid + half * xi
            x = as_point(curve(t))
            dual = np.linalg.inv(frame(x))[index]
            total += wi * half * float(dual @ np.asarray(velocity(t), dtype=float))
    return total


def loop_integral(frame, loop, index, nodes=4, method="spline", period=None):
    """Change of the anholonomic coordinate x^(index) around a closed loop.

    Computes the line integral of the dual form e^(index)_k dx^k.

    Parameters
    ----------
    frame : FrameField
    loop : ndarray
        ``(N + 1, n)`` samples with the last point equal to the first
        (modulo ``period`` for periodic coordinates).
    index : int
        Frame index (i).
    nodes : int
        Gauss points per segment.
    method : {"spline", "polyline"}
        Periodic cubic spline through the samples, or straight segments.
    period : array_like, optional
        Per-coordinate period (0 for non-periodic coordinates), letting a
        loop wind once around an angular coordinate.

    Returns
    -------
    float
    """
    pts = np.asarray(loop, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 4:
        raise ValueError("loop needs at least 3 distinct points plus the closing point")
    drift = _closure(pts, period)
    m = pts.shape[0] - 1
    t = np.linspace(0.0, 1.0, m + 1)
    if method == "polyline":
        segments = []
        for k in range(m):
            a, b = pts[k], pts[k + 1]
            segments.append((lambda s, a=a, b=b: a + s * (b - a), lambda s, a=a, b=b: b - a))
        return sum(line_integral(frame, c, v, (0.0, 1.0), index, 1, nodes) for c, v in segments)
    if method != "spline":
        raise ValueError(f"unknown method {method!r}")
    base = pts - np.outer(t, drift)
    base[-1] = base[0]
    spline = CubicSpline(t, base, bc_type="periodic")
    deriv = spline.derivative()
    return line_integral(
        frame,
        lambda s: spline(s) + s * drift,
        lambda s: deriv(s) + drift,
        (0.0, 1.0),
        index,
        m,
        nodes,
    )


# ---------------------------------------------------------------------------
# Lorentz maps


@dataclass(frozen=True)
class LorentzFrameMap:
    """Matrix b^(l)_(k) acting on frame indices, e'_(k) = e_(l) b^(l)_(k).

    Construction rejects matrices with b^T diag(eta) b != diag(eta).
    """

    matrix: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        b = np.array(self.matrix, dtype=float)
        eta = np.array(self.eta, dtype=float)
        err = np.max(np.abs(b.T @ np.diag(eta) @ b - np.diag(eta)))
        scale = max(1.0, float(np.max(np.abs(b))) ** 2)
        if err > LORENTZ_TOL * scale:
            raise NotLorentzError(f"map does not preserve the frame metric (error {err:.2e})")
        b.setflags(write=False)
        eta.setflags(write=False)
        object.__setattr__(self, "matrix", b)
        object.__setattr__(self, "eta", eta)

    def compose(self, other):
        """Map equal to applying ``self`` first, then ``other``."""
        return LorentzFrameMap(self.matrix @ other.matrix, self.eta)

    def inverse(self):
        eta = np.diag(self.eta)
        return LorentzFrameMap(eta @ self.matrix.T @ eta, self.eta)

    @classmethod
    def identity(cls, eta):
        return cls(np.eye(len(eta)), eta)


def lorentz_factor(beta):
    beta = float(beta)
    if not abs(beta) < 1.0:
        raise NotLorentzError(f"speed must be below c, got beta = {beta}")
    return 1.0 / np.sqrt((1.0 - beta) * (1.0 + beta))


def boost_map(beta, axis, eta):
    """Boost with speed ``beta`` (in units of c) along frame axis ``axis``.

    Gives e'_(0) = gamma e_(0) + gamma beta e_(axis) and
    e'_(axis) = gamma beta e_(0) + gamma e_(axis). Frame index 0 must be
    the timelike one.
    """
    gamma = lorentz_factor(beta)
    b = np.eye(len(eta))
    b[0, 0] = b[axis, axis] = gamma
    b[0, axis] = b[axis, 0] = gamma * beta
    return LorentzFrameMap(b, eta)


def boost_frame(frame, lorentz):
    """Apply a Lorentz map to a frame at a point."""
    if not np.array_equal(frame.eta, lorentz.eta):
        raise NotLorentzError("map and frame use different frame metrics")
    return Frame(frame.vectors @ lorentz.matrix, frame.eta)


def invariance_check(frame, w_frame, lorentz):
    """Transform a frame and vector components together.

    Parameters
    ----------
    frame : Frame
    w_frame : array_like or Tensor
        Components w^(k) in the original frame.
    lorentz : LorentzFrameMap

    Returns
    -------
    new_components : Tensor
        w'^(k) = (b^-1)^(k)_(l) w^(l).
    vector : ndarray
        Chart vector rebuilt from the new frame and components, identical
        to the one built from the original pair.
    """
    vals = w_frame.values if isinstance(w_frame, Tensor) else np.asarray(w_frame, dtype=float)
    new_frame = boost_frame(frame, lorentz)
    new = lorentz.inverse().matrix @ vals
    return Tensor(new, 1, 0, "frame"), new_frame.reconstruct(new)
