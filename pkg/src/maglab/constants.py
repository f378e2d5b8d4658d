"""Physical constants and unit conversions (CGS)."""

G = 6.674e-8
"""Gravitational constant, cm^3 g^-1 s^-2."""

C = 2.99792458e10
"""Speed of light, cm/s."""

M_SUN = 1.989e33
"""Solar mass, g."""

M_EARTH = 5.977e27
"""Earth mass, g."""

DAY = 86400.0
YEAR = 365.25 * DAY
MINUTE = 60.0
ANGSTROM = 1e-8
MICRON = 1e-4


def schwarzschild_radius(mass, g=G, c=C):
    """Return rg = 2GM/c^2 in cm for a mass in grams."""
    return 2.0 * g * mass / c**2


UNITS = {
    "g": 1.0,
    "Msun": M_SUN,
    "cm": 1.0,
    "km": 1e5,
    "s": 1.0,
    "min": MINUTE,
    "day": DAY,
    "yr": YEAR,
    "um": MICRON,
    "angstrom": ANGSTROM,
    "cm/s": 1.0,
    "1": 1.0,
}
"""Factor converting each accepted unit to its CGS base."""


def to_cgs(value, unit):
    """Convert ``value`` in ``unit`` to CGS; raises KeyError for unknown units."""
    return float(value) * UNITS[unit]


def from_cgs(value, unit):
    return float(value) / UNITS[unit]
