"""Runge-Kutta integrators for the transport equations.

Two methods: classical fixed-step RK4 (for convergence studies) and the
Dormand-Prince 5(4) embedded pair with local error control (default).
Output points requested through ``s_eval`` are hit exactly by clipping the
step, so no interpolation error enters the results.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, MaglabError

METHODS = ("rk4", "rk45")

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    Parameters
    ----------
    method : {"rk45", "rk4"}
    rtol, atol : float
        Local error tolerances for ``rk45``.
    step : float, optional
        Fixed step for ``rk4`` (required there); initial step for ``rk45``.
    max_steps : int
        Abort after this many accepted plus rejected steps.
    """

    method: str = "rk45"
    rtol: float = 1e-10
    atol: float = 1e-12
    step: float = None
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")
        if self.method == "rk4" and self.step is None:
            raise ValueError("rk4 needs a fixed step")


@dataclass(frozen=True)
class Solution:
    """Integrated states at the output points.

    Attributes
    ----------
    s : ndarray
        Output parameter values.
    y : ndarray
        ``(len(s), m)`` states.
    nsteps : int
        Accepted steps.
    nfev : int
        Right-hand-side evaluations.
    """

    s: np.ndarray
    y: np.ndarray
    nsteps: int
    nfev: int


def _rms(v):
    return float(np.sqrt(np.mean(v * v)))


def _initial_step(f, s0, y0, f0, direction, cfg, span):
    sc = cfg.atol + cfg.rtol * np.abs(y0)
    d0 = _rms(y0 / sc)
    d1 = _rms(f0 / sc)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, abs(span))
    y1 = y0 + direction * h0 * f0
    d2 = _rms((f(s0 + direction * h0, y1) - f0) / sc) / h0
    h1 = max(1e-6 * h0, (0.01 / max(d1, d2)) ** 0.2) if max(d1, d2) > 1e-15 else max(1e-6, 1e-3 * h0)
    return min(100 * h0, h1, abs(span))


def integrate(f, s_span, y0, config=None, s_eval=None):
    """Integrate ``dy/ds = f(s, y)``.

    Parameters
    ----------
    f : callable
        Right-hand side returning an array like ``y``.
    s_span : (float, float)
        Start and end parameter (either direction).
    y0 : array_like
        Initial state.
    config : IntegratorConfig, optional
    s_eval : array_like, optional
        Output points inside ``s_span`` (monotone in the integration
        direction). Defaults to the two endpoints.

    Returns
    -------
    Solution

    Raises
    ------
    IntegrationError
        On non-finite derivatives, step-size underflow, too many steps, or
        a domain error raised by ``f``; the message names the last accepted
        parameter and state.
    """
    cfg = config or IntegratorConfig()
    s0, s1 = float(s_span[0]), float(s_span[1])
    y = np.array(y0, dtype=float)
    direction = 1.0 if s1 >= s0 else -1.0
    if s_eval is None:
        targets = np.array([s0, s1])
    else:
        targets = np.asarray(s_eval, dtype=float)
        if np.any(direction * np.diff(targets) < 0):
            raise ValueError("s_eval must be monotone in the integration direction")
        if np.any(direction * (targets - s0) < 0) or np.any(direction * (targets - s1) > 0):
            raise ValueError("s_eval points must lie inside s_span")
    nfev = [0]
    last = {"s": s0, "y": y}

    def fail(msg, s):
        where = f"at s = {s:.6g} (last accepted s = {last['s']:.6g})"
        return IntegrationError(f"{msg} {where}", s=last["s"], location=last["y"])

    def rhs(s, yy):
        nfev[0] += 1
        try:
            out = np.asarray(f(s, yy), dtype=float)
        except MaglabError as exc:
            raise fail(f"right-hand side failed: {exc};", s) from exc
        if not np.all(np.isfinite(out)):
            raise fail("non-finite derivative", s)
        return out

    out_s = []
    out_y = []
    s = s0
    k = 0
    while k < len(targets) and direction * (targets[k] - s) <= 0:
        out_s.append(targets[k])
        out_y.append(y.copy())
        k += 1
    if cfg.method == "rk4":
        nsteps = _run_rk4(rhs, s, y, targets, k, direction, cfg, out_s, out_y, last)
    else:
        nsteps = _run_rk45(rhs, s, y, s1, targets, k, direction, cfg, out_s, out_y, last)
    return Solution(np.array(out_s), np.array(out_y), nsteps, nfev[0])


def _run_rk4(rhs, s, y, targets, k, direction, cfg, out_s, out_y, last):
    nsteps = 0
    h_nom = cfg.step
    while k < len(targets):
        target = targets[k]
        remaining = abs(target - s)
        nsub = max(1, int(np.ceil(remaining / h_nom - 1e-9)))
        h = direction * remaining / nsub
        for _ in range(nsub):
            k1 = rhs(s, y)
            k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            s = s + h
            last["s"], last["y"] = s, y
            nsteps += 1
            if nsteps > cfg.max_steps:
                raise IntegrationError("too many steps", s=s, location=y)
        s = target
        out_s.append(target)
        out_y.append(y.copy())
        k += 1
    return nsteps


def _run_rk45(rhs, s, y, s1, targets, k, direction, cfg, out_s, out_y, last):
    f0 = rhs(s, y)
    h = cfg.step if cfg.step is not None else _initial_step(rhs, s, y, f0, direction, cfg, s1 - s)
    nsteps = 0
    attempts = 0
    while k < len(targets):
        target = targets[k]
        hit = False
        if h >= abs(target - s) * (1.0 - 1e-12):
            h_try = abs(target - s)
            hit = True
        else:
            h_try = h
        if h_try < 1e-14 * max(1.0, abs(s)):
            if hit:
                s = target
                out_s.append(target)
                out_y.append(y.copy())
                k += 1
                continue
            raise IntegrationError(f"step size underflow at s = {s:.6g}", s=s, location=y)
        hs = direction * h_try
        ks = [f0]
        for i in range(1, 7):
            yi = y + hs * sum(a * kk for a, kk in zip(_A[i], ks))
            ks.append(rhs(s + _C[i] * hs, yi))
        y_new = y + hs * sum(b * kk for b, kk in zip(_B5, ks) if b != 0.0)
        err_vec = hs * sum(e * kk for e, kk in zip(_E, ks) if e != 0.0)
        sc = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(err_vec / sc)
        attempts += 1
        if attempts > cfg.max_steps:
            raise IntegrationError("too many steps", s=s, location=y)
        if err <= 1.0:
            s = target if hit else s + hs
            y = y_new
            last["s"], last["y"] = s, y
            f0 = ks[6]
            nsteps += 1
            if hit:
                out_s.append(target)
                out_y.append(y.copy())
                k += 1
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            # a clipped step says nothing about the natural step length
            h = max(h, h_try * factor) if hit else h_try * factor
        else:
            h = h_try * max(0.2, 0.9 * err ** -0.25)
    return nsteps
