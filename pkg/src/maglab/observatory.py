"""Observables of circular and Keplerian orbits around a Schwarzschild mass.

Covers the proper-time gap between a static and an orbiting clock, the
Lorentz boosts between static and moving observers, the Doppler ratio of
light received by an orbiting observer, and regeneration of the reference
tables shipped in ``maglab/data``.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from numpy.polynomial.legendre import leggauss

from .constants import ANGSTROM, C, G, MICRON, from_cgs, schwarzschild_radius, to_cgs
from .errors import ConfigError, RegionError
from .frames import Frame, boost_frame, boost_map, line_integral
from .spacetimes.schwarzschild import (
    ETA,
    PHI,
    R,
    THETA,
    c_of,
    equatorial_circular_orbit,
    orbiting_frame,
    rg_of,
    schwarzschild_space,
    static_frame,
)

RADIUS_SOURCES = ("given", "kepler")


def kepler_radius(mass, period, g=G):
    """Circular-orbit radius r = (G M T^2 / 4 pi^2)^(1/3)."""
    return (g * mass * period**2 / (4.0 * np.pi**2)) ** (1.0 / 3.0)


def kepler_period(mass, radius, g=G):
    return 2.0 * np.pi * np.sqrt(radius**3 / (g * mass))


@dataclass(frozen=True)
class OrbitScenario:
    """Central mass and orbit description, CGS units.

    Parameters
    ----------
    mass : float
        Central mass, g.
    radius : float, optional
        Circular-orbit radius, cm.
    period : float, optional
        Orbital period, s. The missing one of ``radius`` and ``period``
        follows from Kepler's third law. Both may be given; they are not
        required to agree.
    r_peri, r_apo : float, optional
        Pericentre and apocentre distances for the Doppler computation.
    wavelength : float, optional
        Emitted wavelength, um.
    """

    mass: float
    radius: float = None
    period: float = None
    r_peri: float = None
    r_apo: float = None
    wavelength: float = None
    name: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise ConfigError("mass must be positive")
        for key in ("radius", "period", "r_peri", "r_apo", "wavelength"):
            v = getattr(self, key)
            if v is not None and not v > 0:
                raise ConfigError(f"{key} must be positive")
        rg = self.rg
        for key in ("radius", "r_peri", "r_apo"):
            v = getattr(self, key)
            if v is not None and not v > rg:
                raise RegionError(f"{key} = {v:.6g} cm is inside rg = {rg:.6g} cm")

    @property
    def rg(self):
        return schwarzschild_radius(self.mass)

    def orbit(self, radius_source=None):
        """Radius and period used for circular-orbit computations.

        ``radius_source`` is ``"given"`` (the stated radius) or ``"kepler"``
        (derived from the period). By default the stated radius is used
        when present.

        Returns
        -------
        radius, period : float
        source : str
        """
        if radius_source is None:
            radius_source = "given" if self.radius is not None else "kepler"
        if radius_source not in RADIUS_SOURCES:
            raise ConfigError(f"radius_source must be one of {RADIUS_SOURCES}")
        if radius_source == "given":
            if self.radius is None:
                raise ConfigError("no radius given")
            period = self.period if self.period is not None else kepler_period(self.mass, self.radius)
            return self.radius, period, "given"
        if self.period is None:
            raise ConfigError("kepler radius needs a period")
        r = kepler_radius(self.mass, self.period)
        if not r > self.rg:
            raise RegionError("Kepler radius is inside rg")
        return r, self.period, "kepler"

    def kepler_discrepancy(self):
        """Relative difference between the given radius and the Kepler radius, or None."""
        if self.radius is None or self.period is None:
            return None
        return kepler_radius(self.mass, self.period) / self.radius - 1.0


@dataclass(frozen=True)
class DelayResult:
    """Proper-time gap after one revolution.

    Attributes
    ----------
    delta_s : float
        Gap in interval units, cm.
    delta_t : float
        Gap in seconds, ``delta_s / c``.
    radius, period : float
        Orbit actually used.
    radius_source : str
    kepler_discrepancy : float or None
        Given radius vs Kepler radius, relative.
    """

    delta_s: float
    delta_t: float
    radius: float
    period: float
    radius_source: str
    kepler_discrepancy: float = None


def delay_for_orbit(mass, radius, period, c=C):
    """Delta t = (2 pi / alpha)(sqrt((r - rg)/r) - sqrt((r - rg)/r - alpha^2 r^2 / c^2)).

    Evaluated as T beta^2 / (sqrt(f) + sqrt(f - beta^2)) with f = (r - rg)/r
    and beta = alpha r / c, which avoids the cancellation of the direct form.
    """
    rg = schwarzschild_radius(mass, G, c)
    if not radius > rg:
        raise RegionError(f"r = {radius:.6g} cm is inside rg = {rg:.6g} cm")
    alpha = 2.0 * np.pi / period
    f = (radius - rg) / radius
    beta2 = (alpha * radius / c) ** 2
    if not f > beta2:
        raise RegionError("orbit would be superluminal: (r - rg) c^2 <= alpha^2 r^3")
    return period * beta2 / (np.sqrt(f) + np.sqrt(f - beta2))


def time_delay(scenario, radius_source=None, c=C):
    """Static clock minus orbiting clock after one revolution.

    Raises
    ------
    RegionError
        For r <= rg or a superluminal orbit.
    """
    r, period, source = scenario.orbit(radius_source)
    dt = delay_for_orbit(scenario.mass, r, period, c)
    return DelayResult(c * dt, dt, r, period, source, scenario.kepler_discrepancy())


# ---------------------------------------------------------------------------
# orbiting observers


def measured_orbital_speed(space, r, omega):
    """Speed V = sqrt(r/(r - rg)) r omega measured by a static observer."""
    rg = rg_of(space)
    if not r > rg:
        raise RegionError(f"r = {r:.6g} is inside rg = {rg:.6g}")
    return np.sqrt(r / (r - rg)) * r * omega


def orbit_tangent_norm(space, r, omega):
    """Squared length of the coordinate velocity (1, 0, omega, 0): (r - rg)/r c^2 - r^2 omega^2."""
    x = np.array([0.0, r, 0.5 * np.pi, 0.0])
    u = np.array([1.0, 0.0, omega, 0.0])
    return float(u @ space.metric(x) @ u)


def _boost_point(space, r, phi):
    rg = rg_of(space)
    if not r > rg:
        raise RegionError(f"r = {r:.6g} is inside rg = {rg:.6g}")
    return np.array([0.0, r, phi, 0.0])


def _beta(V, c):
    beta = V / c
    if not abs(beta) < 1.0:
        raise RegionError(f"observer speed {V:.6g} cm/s is not below c")
    return beta


def orbital_boost_frame(space, r, omega, phi=0.5 * np.pi):
    """Static frame and the frame of an observer with dphi/dt = omega.

    Boost in the (e_(0), e_(2)) plane with V = sqrt(r/(r - rg)) r omega.

    Returns
    -------
    static, moving : Frame
    """
    x = _boost_point(space, r, phi)
    e = Frame(static_frame(space)(x), ETA)
    V = measured_orbital_speed(space, r, omega)
    return e, boost_frame(e, boost_map(_beta(V, c_of(space)), PHI, ETA))


def orbital_boost_closed_form(space, r, omega):
    """Components of e'_(0) and e'_(2) written out directly.

    e'_(0) = (sqrt(r/(r - rg)) gamma / c, 0, omega sqrt(r/(r - rg)) gamma / c, 0)
    e'_(2) = (sqrt(r/(r - rg)) V gamma / c^2, 0, gamma / r, 0)
    """
    rg, c = rg_of(space), c_of(space)
    _boost_point(space, r, 0.5 * np.pi)
    V = measured_orbital_speed(space, r, omega)
    gamma = 1.0 / np.sqrt(1.0 - _beta(V, c) ** 2)
    k = np.sqrt(r / (r - rg))
    e0 = np.array([k * gamma / c, 0.0, omega * k * gamma / c, 0.0])
    e2 = np.array([k * V * gamma / c**2, 0.0, gamma / r, 0.0])
    return e0, e2


def radial_speed(space, r, v):
    """Speed V = r/(r - rg) v measured by a static observer for dr/dt = v."""
    rg = rg_of(space)
    if not r > rg:
        raise RegionError(f"r = {r:.6g} is inside rg = {rg:.6g}")
    return r / (r - rg) * v


def radial_boost_frame(space, r, v, phi=0.5 * np.pi):
    """Static frame and the frame of an observer with dr/dt = v.

    Returns
    -------
    static, moving : Frame
    """
    x = _boost_point(space, r, phi)
    e = Frame(static_frame(space)(x), ETA)
    V = radial_speed(space, r, v)
    return e, boost_frame(e, boost_map(_beta(V, c_of(space)), R, ETA))


def radial_boost_closed_form(space, r, v):
    """Components of e'_(0) and e'_(1) written out directly.

    e'_(0) = (sqrt(r/(r - rg)) gamma / c, (V/c) sqrt((r - rg)/r) gamma, 0, 0)
    e'_(1) = (V sqrt(r/(r - rg)) gamma / c^2, sqrt((r - rg)/r) gamma, 0, 0)
    """
    rg, c = rg_of(space), c_of(space)
    V = radial_speed(space, r, v)
    gamma = 1.0 / np.sqrt(1.0 - _beta(V, c) ** 2)
    k = np.sqrt(r / (r - rg))
    e0 = np.array([k * gamma / c, V / c / k * gamma, 0.0, 0.0])
    e1 = np.array([V * k * gamma / c**2, gamma / k, 0.0, 0.0])
    return e0, e1


def boost_gamma_delay(scenario, radius_source=None, segments=16, nodes=4):
    """Time delay rebuilt from the orbital boost along one revolution.

    At each point of the orbit the Lorentz factor is read off the boosted
    frame (gamma = e'^t_(0) / e^t_(0)) and the static observer's proper time
    rate sqrt((r - rg)/r) is weighted by (1 - 1/gamma). The orbit runs in
    theta on the equator.

    Returns
    -------
    float
        Delay in seconds.
    """
    r, period, _ = scenario.orbit(radius_source)
    space = schwarzschild_space(mass=scenario.mass)
    rg = rg_of(space)
    omega = 2.0 * np.pi / period
    curve, _ = equatorial_circular_orbit(space, r, omega)
    static = static_frame(space)
    moving = orbiting_frame(space, omega, THETA)
    xg, wg = leggauss(nodes)
    edges = np.linspace(0.0, period, segments + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        for xi, wi in zip(xg, wg):
            x = curve(mid + half * xi)
            gamma = moving(x)[0, 0] / static(x)[0, 0]
            # 1 - 1/gamma without cancellation
            deficit = (gamma - 1.0 / gamma) / (gamma + 1.0) if gamma != 1.0 else 0.0
            total += wi * half * np.sqrt((x[R] - rg) / x[R]) * deficit
    return total


def orbit_closure_delay(scenario, radius_source=None, segments=16, nodes=4):
    """Time delay as the closure of the observers' time form around a loop.

    The loop follows the orbiting observer for one revolution and returns
    along the static observer's worldline. Each leg integrates the time
    form e^(0)_k dx^k of the frame carried by the observer on that leg, so
    the closure is (s_orbit - s_static) = -c Delta t.

    Returns
    -------
    float
        ``-closure / c``, the delay in seconds.
    """
    r, period, _ = scenario.orbit(radius_source)
    space = schwarzschild_space(mass=scenario.mass)
    c = c_of(space)
    omega = 2.0 * np.pi / period
    curve, velocity = equatorial_circular_orbit(space, r, omega)
    moving = orbiting_frame(space, omega, THETA)
    static = static_frame(space)
    theta_end = 2.0 * np.pi

    def back(t):
        return np.array([t, r, 0.5 * np.pi, theta_end])

    def back_velocity(t):
        return np.array([1.0, 0.0, 0.0, 0.0])

    forward = line_integral(moving, curve, velocity, (0.0, period), 0, segments, nodes)
    backward = line_integral(static, back, back_velocity, (period, 0.0), 0, segments, nodes)
    return -(forward + backward) / c


# ---------------------------------------------------------------------------
# Doppler


@dataclass(frozen=True)
class DopplerPoint:
    """Doppler data at one orbital distance.

    Attributes
    ----------
    radius : float
        cm.
    speed : float
        Vis-viva speed, cm/s.
    local_speed : float
        sqrt(r/(r - rg)) times the vis-viva speed, the speed a static
        observer would assign; reported as a diagnostic.
    gravitational, kinematic : float
        sqrt(r/(r - rg)) and the Lorentz factor; ``ratio`` is their product.
    ratio : float
        omega'/omega.
    wavelength : float or None
        Observed wavelength, um.
    """

    radius: float
    speed: float
    local_speed: float
    gravitational: float
    kinematic: float
    ratio: float
    wavelength: float = None


@dataclass(frozen=True)
class DopplerResult:
    pericentre: DopplerPoint
    apocentre: DopplerPoint
    delta_wavelength: float = None
    """Observed apocentre minus pericentre wavelength, angstrom."""


def doppler_at(mass, r, semi_major, wavelength=None, c=C):
    """Doppler data at distance ``r`` on a Kepler orbit with semi-major axis ``semi_major``."""
    rg = schwarzschild_radius(mass, G, c)
    if not r > rg:
        raise RegionError(f"r = {r:.6g} cm is inside rg = {rg:.6g} cm")
    v2 = G * mass * (2.0 / r - 1.0 / semi_major)
    if v2 < 0:
        raise RegionError("distance lies outside the orbit")
    speed = np.sqrt(v2)
    grav = np.sqrt(r / (r - rg))
    kin = 1.0 / np.sqrt(1.0 - _beta(speed, c) ** 2)
    ratio = grav * kin
    lam = None if wavelength is None else wavelength / ratio
    return DopplerPoint(r, speed, grav * speed, grav, kin, ratio, lam)


def s2_doppler(scenario, c=C):
    """Doppler ratio omega'/omega at pericentre and apocentre.

    omega' = sqrt(r/(r - rg)) omega / sqrt(1 - V^2/c^2) with V from the
    vis-viva law, a = (r_peri + r_apo)/2. Observed wavelengths are
    lambda / (omega'/omega).
    """
    if scenario.r_peri is None or scenario.r_apo is None:
        raise ConfigError("doppler needs r_peri and r_apo")
    a = 0.5 * (scenario.r_peri + scenario.r_apo)
    peri = doppler_at(scenario.mass, scenario.r_peri, a, scenario.wavelength, c)
    apo = doppler_at(scenario.mass, scenario.r_apo, a, scenario.wavelength, c)
    delta = None
    if scenario.wavelength is not None:
        delta = (apo.wavelength - peri.wavelength) * MICRON / ANGSTROM
    return DopplerResult(peri, apo, delta)


# ---------------------------------------------------------------------------
# reference tables


def load_reference_tables():
    """The shipped reference dataset, keyed by table id."""
    text = resources.files("maglab").joinpath("data/reference_tables.json").read_text()
    return json.loads(text)


TABLE_IDS = ("7.3.1", "7.3.2", "7.3.3", "7.4.1", "7.4.2")


@dataclass(frozen=True)
class TableEntry:
    """One computed quantity next to its reference value."""

    row: str
    quantity: str
    unit: str
    computed: float
    reference: float

    @property
    def rel_delta(self):
        return self.computed / self.reference - 1.0

    @property
    def abs_delta(self):
        return self.computed - self.reference


@dataclass(frozen=True)
class TableReport:
    table_id: str
    title: str
    entries: list
    notes: dict = field(default_factory=dict)

    def entry(self, row, quantity):
        for e in self.entries:
            if e.row == row and e.quantity == quantity:
                return e
        raise KeyError((row, quantity))


def _q(item):
    return to_cgs(item["value"], item["unit"])


def scenario_from_row(row):
    """Build an :class:`OrbitScenario` from a dataset row."""
    kw = {"mass": _q(row["mass"]), "name": row["name"]}
    for key in ("radius", "period", "r_peri", "r_apo"):
        if key in row:
            kw[key] = _q(row[key])
    if "wavelength" in row:
        kw["wavelength"] = from_cgs(_q(row["wavelength"]), "um")
    return OrbitScenario(**kw)


def reproduce_table(table_id, tables=None):
    """Recompute every reference value of a table.

    Raises
    ------
    ConfigError
        Unknown table id.
    """
    tables = tables or load_reference_tables()
    if table_id not in tables:
        raise ConfigError(f"unknown table {table_id!r}; choose from {', '.join(sorted(tables))}")
    spec = tables[table_id]
    entries = []
    notes = {}
    for row in spec["rows"]:
        sc = scenario_from_row(row)
        ref = row["reference"]
        if spec["kind"] == "delay":
            res = time_delay(sc, row.get("radius_source"))
            unit = ref["delay"]["unit"]
            entries.append(TableEntry(row["name"], "delay", unit, from_cgs(res.delta_t, unit), ref["delay"]["value"]))
            notes[row["name"]] = {
                "radius_source": res.radius_source,
                "radius_used_cm": res.radius,
                "kepler_vs_given": res.kepler_discrepancy,
            }
        else:
            res = s2_doppler(sc)
            computed = {
                "peri_speed": res.pericentre.speed,
                "peri_ratio": res.pericentre.ratio,
                "peri_wavelength": res.pericentre.wavelength * MICRON,
                "apo_speed": res.apocentre.speed,
                "apo_ratio": res.apocentre.ratio,
                "apo_wavelength": res.apocentre.wavelength * MICRON,
                "delta_wavelength": res.delta_wavelength * ANGSTROM,
            }
            for key, item in ref.items():
                entries.append(
                    TableEntry(row["name"], key, item["unit"], from_cgs(computed[key], item["unit"]), item["value"])
                )
            notes[row["name"]] = {
                "peri_local_speed_cm_s": res.pericentre.local_speed,
                "apo_local_speed_cm_s": res.apocentre.local_speed,
            }
    return TableReport(table_id, spec["title"], entries, notes)
