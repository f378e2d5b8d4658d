"""Seeded verification suites over random spaces.

Each suite returns a :class:`VerifyReport` listing the largest residual of
every check next to its tolerance. Results depend only on the seed.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import transport as tr
from .frames import (
    OrthonormalizedFrame,
    anholonomy_object,
    boost_map,
    coordinate_frame,
    frame_commutator,
    frame_transport,
    loop_integral,
)
from .integrate import IntegratorConfig
from .spacetimes.flat import polar_frame
from .spacetimes.schwarzschild import schwarzschild_space, static_frame
from .spacetimes.synthetic import (
    constant_torsion_space,
    nonmetric_space,
    random_field,
    random_point,
    random_space,
    random_vector_field,
)
from .tensor_core import AnalyticField, PolynomialField

SUITES = ("identities", "transport", "frames", "all")
ANALYTIC_TOL = 1e-9
FD_TOL = 1e-6


@dataclass
class Check:
    """Largest residual of one check against its tolerance.

    ``kind`` is ``"max"`` (pass when residual <= tol) or ``"band"`` (pass
    when lo <= residual <= hi, with ``tol = (lo, hi)``).
    """

    suite: str
    name: str
    residual: float
    tol: object
    kind: str = "max"
    count: int = 1

    @property
    def passed(self):
        if not np.isfinite(self.residual):
            return False
        if self.kind == "band":
            lo, hi = self.tol
            return lo <= self.residual <= hi
        return self.residual <= self.tol

    def to_dict(self):
        tol = list(self.tol) if self.kind == "band" else self.tol
        return {
            "suite": self.suite,
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": tol,
            "kind": self.kind,
            "samples": self.count,
            "passed": bool(self.passed),
        }


@dataclass
class VerifyReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, suite, name, residual, tol, kind="max", count=1):
        self.checks.append(Check(suite, name, float(residual), tol, kind, count))

    def merge(self, name, values, tol, suite):
        """Record the maximum of ``values`` as one check."""
        self.add(suite, name, max(values) if values else 0.0, tol, count=len(values))

    def to_dict(self):
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def format_text(self):
        lines = [f"verify {self.suite} (seed {self.seed})"]
        for c in self.checks:
            tol = f"[{c.tol[0]:.3g}, {c.tol[1]:.3g}]" if c.kind == "band" else f"{c.tol:.1e}"
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark}  {c.suite:<10} {c.name:<34} {c.residual:.3e}  tol {tol}  (n={c.count})")
        lines.append("all checks passed" if self.passed else "some checks FAILED")
        return "\n".join(lines)


def _max(a):
    return float(np.max(np.abs(a)))


# ---------------------------------------------------------------------------
# identities


def identity_residuals(space, rng, x):
    """Residuals of the connection identities on one space at ``x``.

    Returns
    -------
    dict
        Check name -> largest absolute residual.
    """
    n = space.dim
    u = random_vector_field(rng, n)
    xi = random_vector_field(rng, n)
    shift = random_field(rng, (n, n, n), n, pair=(1, 2), kind="sym")
    out = {
        "bianchi": _max(geo.bianchi_residual(space, x)),
        "commutator": _max(geo.commutator_residual(space, u, x)),
        "lie_metric": _max(geo.lie_derivative_metric(space, xi, x) - geo.lie_derivative_metric_coordinate(space, xi, x)),
        "lie_connection": _max(
            geo.lie_derivative_connection(space, xi, x) - geo.lie_derivative_connection_coordinate(space, xi, x)
        ),
        "shifted_curvature": _max(geo.shifted_curvature(space, shift, x) - geo.curvature(space.shifted(shift), x)),
        "cartan_compatibility": _max(geo.metric_covariant_derivative(space.cartan(), x)),
        "connection_roundtrip": _max(
            geo.reconstruct_connection(space.metric, geo.torsion(space, x), geo.nonmetricity(space, x), x)
            - space.connection(x)
        ),
    }
    if space.label == "levi-civita":
        out["lie_connection_riemann"] = _max(
            geo.lie_derivative_connection_riemann(space, xi, x) - geo.lie_derivative_connection_coordinate(space, xi, x)
        )
    return out


def space_variant(k):
    """Flags (n, analytic, torsion, nonmetric) of the k-th space in the identity suite."""
    n = 2 + k % 3
    analytic = (k // 3) % 2 == 0
    torsion, nonmetric = [(True, True), (True, False), (False, True), (False, False)][(k // 6) % 4]
    return n, analytic, torsion, nonmetric


def run_identities(seed=0, count=100, tol=None, report=None):
    """Identity residuals on ``count`` random spaces, n = 2..4.

    Spaces alternate between analytic and finite-difference derivatives
    and cycle through the four torsion/nonmetricity combinations.
    """
    report = report or VerifyReport("identities", seed)
    rng = np.random.default_rng(seed)
    buckets = {}
    for k in range(count):
        n, analytic, torsion, nonmetric = space_variant(k)
        signature = None if k % 5 else np.r_[1.0, -np.ones(n - 1)]
        space = random_space(rng, n, analytic=analytic, torsion=torsion, nonmetric=nonmetric, signature=signature)
        x = random_point(rng, n)
        kind = "analytic" if analytic else "fd"
        for name, value in identity_residuals(space, rng, x).items():
            buckets.setdefault((name, kind), []).append(value)
    for (name, kind), values in sorted(buckets.items()):
        default = ANALYTIC_TOL if kind == "analytic" else FD_TOL
        report.merge(f"{name} [{kind}]", values, default if tol is None else tol, "identities")
    return report


# ---------------------------------------------------------------------------
# transport


def extremal_comparison(space, x0, u0, steps=10_000, span=2.0):
    """Integrate the extremal and the Cartan autoparallel with fixed-step RK4.

    Returns
    -------
    drift : float
        Largest relative change of g(u, u) along the extremal.
    distance : float
        Largest coordinate distance between the two curves.
    steps : int
        RK4 steps taken per curve.
    """
    cfg = IntegratorConfig(method="rk4", step=span / steps)
    samples = np.linspace(0.0, span, 11)
    ext = tr.extremal(space, x0, u0, (0.0, span), config=cfg, s_eval=samples)
    aut = tr.autoparallel(space, x0, u0, (0.0, span), connection="cartan", config=cfg, s_eval=samples)
    norms = tr.tangent_norm(space, ext)
    drift = float(np.max(np.abs(norms - norms[0])) / abs(norms[0]))
    return drift, _max(ext.x - aut.x), ext.nsteps


def extremal_checks(seed=0, steps=10_000, span=2.0):
    """:func:`extremal_comparison` on a seeded torsion-free nonmetric space."""
    rng = np.random.default_rng(seed)
    space = nonmetric_space(rng, 3)
    x0 = random_point(rng, 3)
    return extremal_comparison(space, x0, np.array([1.0, 0.3, -0.2]), steps, span)


def parallelogram_checks(kappa=0.7, rhos=(0.2, 0.1, 0.05)):
    """Gap exponent and coefficient on the constant-torsion space with T^0_12 = kappa.

    Returns
    -------
    exponent : float
    coefficient_error : float
        Relative error of the fitted coefficient against T^k_mn a^m b^n.
    """
    space = constant_torsion_space(3, {(0, 2, 1): kappa})
    p = np.zeros(3)
    a = np.array([0.0, 1.0, 0.3])
    b = np.array([0.2, 0.4, 1.0])
    exponent, coeff, _ = tr.gap_convergence(space, p, a, b, rhos)
    target = tr.torsion_bilinear(space, p, a, b)
    k = int(np.argmax(np.abs(target)))
    return float(exponent), float(abs(coeff[k] / target[k] - 1.0))


def tidal_convergence(space, x0, v0, eps=1e-3, span=1.5):
    """Linearized deviation against two trajectories for eps and eps/2.

    Returns
    -------
    errors : list of float
        End-point discrepancies for the two sizes.
    ratio : float
        ``errors[0] / errors[1]``, near 4 for quadratic convergence.
    """
    n = space.dim
    rng = np.random.default_rng(12345)
    d0 = rng.uniform(-1.0, 1.0, n)
    w = 0.3 * rng.uniform(-1.0, 1.0, n)
    errors = []
    for e in (eps, eps / 2):
        dev = tr.tidal_deviation(space, x0, v0, e * d0, e * w, (0.0, span))
        _, pair = tr.two_trajectory_deviation(space, x0, v0, e * d0, e * w, (0.0, span))
        errors.append(_max(dev.dx[-1] - pair[-1]))
    return errors, errors[0] / errors[1]


def tidal_ratio(seed=0, eps=1e-3, span=1.5):
    """:func:`tidal_convergence` ratio on a seeded generic space."""
    rng = np.random.default_rng(seed)
    space = random_space(rng, 3)
    x0 = random_point(rng, 3)
    return tidal_convergence(space, x0, np.array([1.0, 0.2, 0.1]), eps, span)[1]


def gauge_check(seed=0, span=1.0):
    """Largest trajectory difference under A -> A + d chi."""
    rng = np.random.default_rng(seed)
    n = 3
    space = random_space(rng, n)
    pot = random_field(rng, (n,), n, amplitude=0.3)
    chi = PolynomialField.random(rng, (), n, scale=(0.3, 0.3, 0.3, 0.3))
    shifted = AnalyticField(
        lambda x: pot(x) + chi.grad(x),
        grad=lambda x: pot.grad(x) + chi.hess(x),
    )
    x0 = random_point(rng, n)
    u0 = np.array([1.0, 0.2, -0.1])
    samples = np.linspace(0.0, span, 6)
    one = tr.forced_motion(space, x0, u0, (0.0, span), vector_potential=pot, c=1.0, s_eval=samples)
    two = tr.forced_motion(space, x0, u0, (0.0, span), vector_potential=shifted, c=1.0, s_eval=samples)
    return max(_max(one.x - two.x), _max(one.u - two.u))


def run_transport(seed=0, tol=None, report=None):
    report = report or VerifyReport("transport", seed)
    t = 1e-8 if tol is None else tol
    drift, distance, steps = extremal_checks(seed)
    report.add("transport", "extremal_length_drift", drift, t, count=steps)
    report.add("transport", "extremal_vs_cartan_autoparallel", distance, t, count=steps)
    exponent, coeff_err = parallelogram_checks()
    report.add("transport", "parallelogram_exponent", exponent, (1.9, 2.1), kind="band")
    report.add("transport", "parallelogram_coefficient", coeff_err, 0.02)
    report.add("transport", "tidal_convergence_ratio", tidal_ratio(seed), (3.5, 4.5), kind="band")
    report.add("transport", "forced_motion_gauge", gauge_check(seed), t)
    return report


# ---------------------------------------------------------------------------
# frames


def run_frames(seed=0, tol=None, report=None):
    report = report or VerifyReport("frames", seed)
    rng = np.random.default_rng(seed)
    fd = FD_TOL if tol is None else tol
    exact = 1e-12 if tol is None else tol

    # anholonomy against the commutator oracle on Gram-Schmidt frames
    values = []
    for k in range(6):
        n = 2 + k % 3
        space = random_space(rng, n, torsion=False, nonmetric=False)
        frame = OrthonormalizedFrame(space.metric)
        x = random_point(rng, n)
        values.append(_max(anholonomy_object(frame, x).values - frame_commutator(frame, x).values))
    report.merge("anholonomy_vs_commutator", values, fd, "frames")

    x = np.array([2.0, 0.3])
    c = anholonomy_object(polar_frame(), x).values
    report.add("frames", "polar_anholonomy", abs(c[1, 0, 1] + 1.0 / x[0]), fd)

    values = []
    for k in range(4):
        n = 2 + k % 3
        space = random_space(rng, n, torsion=False, nonmetric=False, signature=np.r_[1.0, -np.ones(n - 1)])
        frame = OrthonormalizedFrame(space.metric)
        x = random_point(rng, n)
        values.append(frame.at(x).orthonormality_error(space.metric(x)))
    report.merge("gram_schmidt_orthonormality", values, exact, "frames")

    sch = schwarzschild_space(rg=1.0, c=1.0)
    frame = static_frame(sch)

    def curve(s):
        return np.array([s, 4.0 + 0.5 * s, 1.2 + 0.1 * s, 0.3 * s])

    def velocity(s):
        return np.array([1.0, 0.5, 0.1, 0.3])

    a0 = np.array([1.0, 0.2, -0.3, 0.4])
    cfg = IntegratorConfig(rtol=1e-11, atol=1e-13)
    _, in_frame = frame_transport(sch, frame, curve, velocity, a0, (0.0, 1.0), cfg)
    _, holo = tr.parallel_transport(sch, curve, velocity, frame(curve(0.0)) @ a0, (0.0, 1.0), config=cfg)
    converted = np.linalg.solve(frame(curve(1.0)), holo[-1])
    report.add("frames", "anholonomic_transport_dual_path", _max(in_frame[-1] - converted), 1e-8 if tol is None else tol)

    beta = rng.uniform(-0.9, 0.9, 3)
    eta = np.array([1.0, -1.0, -1.0, -1.0])
    maps = [boost_map(b, ax, eta) for b, ax in zip(beta, (1, 2, 3))]
    comp = maps[0].compose(maps[1]).compose(maps[2])
    m = comp.matrix
    report.add("frames", "boost_composition_invariance", _max(m.T @ np.diag(eta) @ m - np.diag(eta)), exact)

    square = np.array([[1.0, 0.0], [1.2, 0.0], [1.2, 0.3], [1.0, 0.3], [1.0, 0.0]])
    report.add(
        "frames",
        "coordinate_frame_loop",
        abs(loop_integral(coordinate_frame(2), square, 0, method="polyline")),
        exact,
    )
    return report


def run(suite, seed=0, tol=None, count=100):
    """Run one suite (or ``"all"``) and return a :class:`VerifyReport`.

    Parameters
    ----------
    tol : float, optional
        Replaces the tolerance of every max-residual check; band checks
        keep their bands.
    count : int
        Number of random spaces in the identity suite.
    """
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}")
    report = VerifyReport(suite, seed)
    start = time.perf_counter()
    if suite in ("identities", "all"):
        run_identities(seed, count, tol, report)
    if suite in ("transport", "all"):
        run_transport(seed, tol, report)
    if suite in ("frames", "all"):
        run_frames(seed, tol, report)
    report.elapsed = time.perf_counter() - start
    return report
