"""Dense tensor components, chart points and finite-difference derivatives.

Component arrays follow one layout everywhere: contravariant slots first,
then covariant slots, and a gradient axis (when present) appended last.
So ``dgamma[a, b, c, i]`` is d_i Gamma^a_bc and ``dg[i, j, k]`` is d_k g_ij.

Fields are plain callables ``x -> ndarray``. A field may also expose
``grad(x)`` and ``hess(x)`` returning analytic derivatives with the same
trailing-axis layout; :func:`gradient` and :func:`hessian` use them when
present and fall back to finite differences otherwise.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import kernels
from .errors import (
    BasisMismatchError,
    ContractionError,
    DegenerateMetricError,
    DifferentiationError,
    SymmetryError,
)

EPS = np.finfo(float).eps
STEP_FACTOR = EPS ** 0.2
BASES = ("holonomic", "frame")


def as_point(coords):
    """Validate chart coordinates and return them as a float array.

    Parameters
    ----------
    coords : array_like
        ``n >= 2`` finite real coordinates.

    Returns
    -------
    ndarray
        A fresh float64 copy.
    """
    x = np.array(coords, dtype=float).reshape(-1)
    if x.size < 2:
        raise ValueError(f"a point needs at least 2 coordinates, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"point has non-finite coordinates: {x}")
    return x


@dataclass(frozen=True)
class Tensor:
    """Components of a (p, q) tensor at one point.

    Parameters
    ----------
    values : array_like
        Dense array of shape ``(n,) * (up + down)``.
    up, down : int
        Contravariant and covariant rank. Slots ``0..up-1`` are upper.
    basis : {"holonomic", "frame"}
        Whether indices refer to chart coordinates or to frame vectors.
    symmetric, antisymmetric : tuple of int pairs
        Declared index symmetries; checked on construction.
    """

    values: np.ndarray
    up: int
    down: int
    basis: str = "holonomic"
    symmetric: tuple = ()
    antisymmetric: tuple = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        rank = self.up + self.down
        if self.up < 0 or self.down < 0:
            raise ValueError("ranks must be non-negative")
        if v.ndim != rank:
            raise ValueError(f"expected {rank} axes for a ({self.up},{self.down}) tensor, got {v.ndim}")
        if rank and len(set(v.shape)) != 1:
            raise ValueError(f"all axes must share one dimension, got shape {v.shape}")
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        for pair, sign in [(p, 1.0) for p in self.symmetric] + [(p, -1.0) for p in self.antisymmetric]:
            swapped = np.swapaxes(v, *pair)
            scale = max(1.0, float(np.max(np.abs(v)))) if v.size else 1.0
            if np.max(np.abs(v - sign * swapped), initial=0.0) > 1e-12 * scale:
                kind = "symmetric" if sign > 0 else "antisymmetric"
                raise SymmetryError(f"components are not {kind} in slots {pair}")
            v = 0.5 * (v + sign * swapped)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.shape[0] if self.values.ndim else 0

    @property
    def rank(self):
        return self.up + self.down

    def variance(self, slot):
        """Return ``"up"`` or ``"down"`` for a slot index."""
        return "up" if slot < self.up else "down"

    def __mul__(self, scalar):
        return Tensor(self.values * float(scalar), self.up, self.down, self.basis)

    __rmul__ = __mul__

    def __add__(self, other):
        _check_compatible(self, other)
        return Tensor(self.values + other.values, self.up, self.down, self.basis)

    def __sub__(self, other):
        _check_compatible(self, other)
        return Tensor(self.values - other.values, self.up, self.down, self.basis)


def _check_compatible(a, b):
    if a.basis != b.basis:
        raise BasisMismatchError(f"cannot combine {a.basis} and {b.basis} components")
    if (a.up, a.down) != (b.up, b.down) or a.values.shape != b.values.shape:
        raise ContractionError("tensor types differ")


def kronecker(n, basis="holonomic"):
    """The (1,1) identity tensor."""
    return Tensor(np.eye(n), 1, 1, basis)


def contract(a, b, pairs):
    """Contract slots of ``a`` with slots of ``b``.

    Parameters
    ----------
    a, b : Tensor
        Operands in the same basis.
    pairs : sequence of (int, int)
        ``(slot_in_a, slot_in_b)``; each pair must join an upper and a lower
        index of equal dimension.

    Returns
    -------
    Tensor
        Remaining upper slots of ``a`` then ``b``, followed by remaining lower
        slots of ``a`` then ``b``.
    """
    if a.basis != b.basis:
        raise BasisMismatchError(f"cannot contract {a.basis} with {b.basis} components")
    pairs = [tuple(p) for p in pairs]
    ia = [p[0] for p in pairs]
    ib = [p[1] for p in pairs]
    if len(set(ia)) != len(ia) or len(set(ib)) != len(ib):
        raise ContractionError("a slot appears in more than one pair")
    for i, j in pairs:
        if not (0 <= i < a.rank and 0 <= j < b.rank):
            raise ContractionError(f"slot pair {(i, j)} out of range")
        if a.variance(i) == b.variance(j):
            raise ContractionError(f"slots {(i, j)} are both {a.variance(i)}; contraction needs opposite variance")
        if a.values.shape[i] != b.values.shape[j]:
            raise ContractionError(f"slots {(i, j)} have different dimensions")
    out = np.tensordot(a.values, b.values, axes=(ia, ib)) if pairs else np.multiply.outer(a.values, b.values)
    rest_a = [s for s in range(a.rank) if s not in ia]
    rest_b = [s for s in range(b.rank) if s not in ib]
    na = len(rest_a)
    up_pos = [k for k, s in enumerate(rest_a) if s < a.up] + [na + k for k, s in enumerate(rest_b) if s < b.up]
    down_pos = [k for k, s in enumerate(rest_a) if s >= a.up] + [na + k for k, s in enumerate(rest_b) if s >= b.up]
    out = np.transpose(out, up_pos + down_pos) if out.ndim else out
    return Tensor(out, len(up_pos), len(down_pos), a.basis)


def invert_metric(g, tol=1e-12):
    """Inverse metric g^ij.

    Parameters
    ----------
    g : ndarray or Tensor
        Symmetric (0,2) components.
    tol : float
        Smallest accepted Hadamard ratio ``|det g| / prod_i |g_i.|``, which
        lies in [0, 1] and ignores how differently the axes are scaled.

    Returns
    -------
    ndarray or Tensor
        Same kind as the input; a Tensor input yields a (2,0) Tensor.
    """
    is_tensor = isinstance(g, Tensor)
    m = np.asarray(g.values if is_tensor else g, dtype=float)
    rows = np.sqrt(np.einsum("ij,ij->i", m, m))
    sign, logdet = np.linalg.slogdet(m)
    if not (np.all(rows > 0.0) and np.isfinite(logdet)) or sign == 0.0 or logdet - np.sum(np.log(rows)) <= np.log(tol):
        raise DegenerateMetricError(float(sign * np.exp(logdet)) if np.isfinite(logdet) else 0.0)
    inv = np.linalg.inv(m)
    inv = 0.5 * (inv + inv.T)
    if is_tensor:
        return Tensor(inv, 2, 0, g.basis)
    return inv


def step_size(xk):
    """Finite-difference step used for coordinate value ``xk``."""
    return STEP_FACTOR * max(1.0, abs(float(xk)))


def _evaluate(field_, x, axis):
    val = np.asarray(field_(x), dtype=float)
    if not np.all(np.isfinite(val)):
        raise DifferentiationError(axis)
    return val


def partial_derivative(field_, p, axis, h=None):
    """d(field)/dx^axis by central differences with one Richardson level.

    The estimate ``(4 D(h/2) - D(h)) / 3`` has error O(h^4).

    Parameters
    ----------
    field_ : callable
        ``x -> ndarray`` evaluable near ``p``.
    p : array_like
        Base point.
    axis : int
        Coordinate index.
    h : float, optional
        Outer step; defaults to :func:`step_size`.
    """
    x = as_point(p)
    if h is None:
        h = step_size(x[axis])
    if not h > 0:
        raise ValueError("step must be positive")

    def central(step):
        xp = x.copy()
        xm = x.copy()
        xp[axis] += step
        xm[axis] -= step
        return (_evaluate(field_, xp, axis) - _evaluate(field_, xm, axis)) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def derivative(func, s, h=None):
    """d func / ds for a function of one real parameter.

    Same extrapolated central difference as :func:`partial_derivative`.
    """
    s = float(s)
    if h is None:
        h = step_size(s)

    def central(step):
        return (_evaluate(func, s + step, 0) - _evaluate(func, s - step, 0)) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def gradient(field_, p, h=None):
    """All first partials, gradient axis last.

    Uses ``field_.grad`` when the field provides it.
    """
    x = as_point(p)
    grad = getattr(field_, "grad", None)
    if grad is not None:
        return np.asarray(grad(x), dtype=float)
    parts = [partial_derivative(field_, x, k, h) for k in range(x.size)]
    return np.stack(parts, axis=-1)


def hessian(field_, p, h=None):
    """All second partials, the two derivative axes last.

    Uses ``field_.hess`` when available, otherwise differentiates
    :func:`gradient` (analytic or not) once more and symmetrizes.
    """
    x = as_point(p)
    hess = getattr(field_, "hess", None)
    if hess is not None:
        return np.asarray(hess(x), dtype=float)
    out = gradient(lambda y: gradient(field_, y, h), x, h)
    return 0.5 * (out + np.swapaxes(out, -1, -2))


def jet(field_, p, order=1):
    """Value and derivatives up to ``order`` (1 or 2) at ``p``."""
    x = as_point(p)
    val = np.asarray(field_(x), dtype=float)
    if order == 1:
        return val, gradient(field_, x)
    return val, gradient(field_, x), hessian(field_, x)


class AnalyticField:
    """Field from explicit callables for its value and optional derivatives.

    Parameters
    ----------
    value : callable
        ``x -> ndarray``.
    grad, hess : callable, optional
        Analytic derivatives with trailing derivative axes.
    """

    def __init__(self, value, grad=None, hess=None):
        self._value = value
        if grad is not None:
            self.grad = lambda x: np.asarray(grad(np.asarray(x, dtype=float)), dtype=float)
        if hess is not None:
            self.hess = lambda x: np.asarray(hess(np.asarray(x, dtype=float)), dtype=float)

    def __call__(self, x):
        return np.asarray(self._value(np.asarray(x, dtype=float)), dtype=float)


class ConstantField:
    """Field with the same components everywhere; derivatives are exactly zero."""

    def __init__(self, values):
        self.values = np.array(values, dtype=float)
        self.values.setflags(write=False)

    def __call__(self, x):
        return self.values.copy()

    def grad(self, x):
        return np.zeros(self.values.shape + (len(x),))

    def hess(self, x):
        return np.zeros(self.values.shape + (len(x), len(x)))


class PolynomialField:
    """Cubic polynomial field about the origin with analytic derivatives.

    Each component is ``c0 + c1.x + c2.x.x/2 + c3.x.x.x/6`` with ``c2`` and
    ``c3`` fully symmetric in their coordinate slots.

    Parameters
    ----------
    shape : tuple of int
        Component shape of the field.
    c0, c1, c2, c3 : ndarray
        Coefficients with shapes ``shape``, ``shape + (n,)``,
        ``shape + (n, n)`` and ``shape + (n, n, n)``.
    """

    def __init__(self, shape, c0, c1, c2, c3):
        self.shape = tuple(shape)
        m = int(np.prod(self.shape, dtype=int))
        n = np.shape(c1)[-1]
        self.n = n
        self._c0 = np.ascontiguousarray(np.reshape(c0, (m,)), dtype=float)
        self._c1 = np.ascontiguousarray(np.reshape(c1, (m, n)), dtype=float)
        self._c2 = np.ascontiguousarray(_symmetrize(np.reshape(c2, (m, n, n))), dtype=float)
        self._c3 = np.ascontiguousarray(_symmetrize(np.reshape(c3, (m, n, n, n))), dtype=float)

    @classmethod
    def random(cls, rng, shape, n, scale=(1.0, 0.05, 0.05, 0.05)):
        """Random coefficients with per-order standard deviations ``scale``."""
        shape = tuple(shape)
        return cls(
            shape,
            scale[0] * rng.standard_normal(shape),
            scale[1] * rng.standard_normal(shape + (n,)),
            scale[2] * rng.standard_normal(shape + (n, n)),
            scale[3] * rng.standard_normal(shape + (n, n, n)),
        )

    def coefficients(self):
        """Coefficient arrays reshaped to the component shape."""
        n = self.n
        return (
            self._c0.reshape(self.shape),
            self._c1.reshape(self.shape + (n,)),
            self._c2.reshape(self.shape + (n, n)),
            self._c3.reshape(self.shape + (n, n, n)),
        )

    def __call__(self, x):
        v = kernels.poly_value(self._c0, self._c1, self._c2, self._c3, x)
        return v.reshape(self.shape)

    def grad(self, x):
        v = kernels.poly_grad(self._c0, self._c1, self._c2, self._c3, x)
        return v.reshape(self.shape + (self.n,))

    def hess(self, x):
        v = kernels.poly_hess(self._c0, self._c1, self._c2, self._c3, x)
        return v.reshape(self.shape + (self.n, self.n))


class TrigField:
    """Sum of plane waves ``amp * sin(k.x + phase)`` per component.

    Adds non-polynomial content to random test fields.
    """

    def __init__(self, amp, k, phase):
        self.amp = np.asarray(amp, dtype=float)
        self.k = np.asarray(k, dtype=float)
        self.phase = np.asarray(phase, dtype=float)

    @classmethod
    def random(cls, rng, shape, n, amplitude=0.05, wavenumber=1.0):
        shape = tuple(shape)
        return cls(
            amplitude * rng.standard_normal(shape),
            wavenumber * rng.standard_normal(shape + (n,)),
            rng.uniform(0.0, 2.0 * np.pi, shape),
        )

    def _arg(self, x):
        return self.k @ np.asarray(x, dtype=float) + self.phase

    def __call__(self, x):
        return self.amp * np.sin(self._arg(x))

    def grad(self, x):
        return (self.amp * np.cos(self._arg(x)))[..., None] * self.k

    def hess(self, x):
        return -(self.amp * np.sin(self._arg(x)))[..., None, None] * self.k[..., :, None] * self.k[..., None, :]


class SumField:
    """Pointwise sum of fields; derivatives exist when every term has them."""

    def __init__(self, *terms):
        self.terms = terms
        if all(hasattr(t, "grad") for t in terms):
            self.grad = lambda x: sum(np.asarray(t.grad(x), dtype=float) for t in terms)
        if all(hasattr(t, "hess") for t in terms):
            self.hess = lambda x: sum(np.asarray(t.hess(x), dtype=float) for t in terms)

    def __call__(self, x):
        return sum(np.asarray(t(x), dtype=float) for t in self.terms)


class FiniteDifferenceOnly:
    """Wrapper hiding analytic derivatives so callers must use finite differences."""

    def __init__(self, field_):
        self.field = field_

    def __call__(self, x):
        return self.field(x)


def _symmetrize(c):
    """Average over all permutations of the trailing coordinate axes."""
    k = c.ndim - 1
    if k < 2:
        return c
    perms = list(permutations(range(1, k + 1)))
    return sum(np.transpose(c, (0,) + p) for p in perms) / len(perms)
