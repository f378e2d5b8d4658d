"""Flat and maximally symmetric reference spaces."""

import numpy as np

from ..constants import C
from ..frames import FrameField
from ..geometry import LeviCivitaConnection, MetricAffineSpace
from ..tensor_core import AnalyticField, ConstantField


def minkowski_space(c=C, n=4):
    """Minkowski space diag(c^2, -1, ..., -1) with zero connection."""
    g = np.diag([c**2] + [-1.0] * (n - 1))
    return MetricAffineSpace(ConstantField(g), ConstantField(np.zeros((n, n, n))), n, "levi-civita")


def euclidean_space(n):
    """Euclidean space in Cartesian coordinates."""
    return MetricAffineSpace(ConstantField(np.eye(n)), ConstantField(np.zeros((n, n, n))), n, "levi-civita")


def euclidean_polar_metric():
    """Plane metric dr^2 + r^2 dphi^2 in (r, phi)."""
    return AnalyticField(
        lambda x: np.diag([1.0, x[0] ** 2]),
        grad=lambda x: np.array([[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0 * x[0], 0.0]]]),
        hess=lambda x: _polar_hess(),
    )


def _polar_hess():
    h = np.zeros((2, 2, 2, 2))
    h[1, 1, 0, 0] = 2.0
    return h


def euclidean_polar_space():
    metric = euclidean_polar_metric()
    return MetricAffineSpace(metric, LeviCivitaConnection(metric), 2, "levi-civita")


def polar_frame():
    """Orthonormal polar frame (d_r, (1/r) d_phi)."""
    return FrameField(lambda x: np.diag([1.0, 1.0 / x[0]]), [1.0, 1.0])


def sphere_metric(radius):
    """Round 2-sphere metric R^2 (dth^2 + sin^2 th dph^2) in (theta, phi)."""
    r2 = radius**2

    def value(x):
        return r2 * np.diag([1.0, np.sin(x[0]) ** 2])

    def grad(x):
        d = np.zeros((2, 2, 2))
        d[1, 1, 0] = r2 * np.sin(2.0 * x[0])
        return d

    def hess(x):
        h = np.zeros((2, 2, 2, 2))
        h[1, 1, 0, 0] = 2.0 * r2 * np.cos(2.0 * x[0])
        return h

    return AnalyticField(value, grad, hess)


def sphere_space(radius):
    metric = sphere_metric(radius)
    return MetricAffineSpace(metric, LeviCivitaConnection(metric), 2, "levi-civita")


__all__ = [
    "C",
    "euclidean_polar_space",
    "euclidean_space",
    "minkowski_space",
    "polar_frame",
    "sphere_space",
]
