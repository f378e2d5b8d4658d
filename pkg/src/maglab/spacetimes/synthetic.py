"""Synthetic metric-affine spaces used as generic test inputs.

Random spaces are a flat metric plus small smooth perturbations, with a
connection made of the Christoffel symbols, a small symmetric deviation
(nonmetricity) and a small antisymmetric part (torsion). Amplitudes stay
at or below 0.05 so the metric remains nondegenerate near the origin.
"""

import numpy as np

from ..geometry import LeviCivitaConnection, MetricAffineSpace, reconstruct_connection
from ..tensor_core import (
    AnalyticField,
    ConstantField,
    FiniteDifferenceOnly,
    PolynomialField,
    SumField,
    TrigField,
)

AMPLITUDE = 0.05


def _sym_pair(c, i, j):
    return 0.5 * (c + np.swapaxes(c, i, j))


def _antisym_pair(c, i, j):
    return 0.5 * (c - np.swapaxes(c, i, j))


def random_field(rng, shape, n, amplitude=AMPLITUDE, pair=None, kind="sym"):
    """Smooth random field: cubic polynomial plus plane waves.

    Parameters
    ----------
    pair : tuple of int, optional
        Component slots to symmetrize (``kind="sym"``) or antisymmetrize.
    """
    shape = tuple(shape)
    poly = PolynomialField.random(rng, shape, n, scale=(amplitude,) * 4)
    trig = TrigField.random(rng, shape, n, amplitude=amplitude)
    if pair is None:
        return SumField(poly, trig)
    op = _sym_pair if kind == "sym" else _antisym_pair
    c0, c1, c2, c3 = poly.coefficients()
    poly = PolynomialField(shape, op(c0, *pair), op(c1, *pair), op(c2, *pair), op(c3, *pair))
    amp = op(trig.amp, *pair)
    # plane-wave terms pair up component (i, j) with (j, i) sharing k and phase
    k = 0.5 * (trig.k + np.swapaxes(trig.k, *pair))
    phase = 0.5 * (trig.phase + np.swapaxes(trig.phase, *pair))
    return SumField(poly, TrigField(amp, k, phase))


def flat_metric(signature):
    """Constant diagonal metric with entries from ``signature``."""
    return ConstantField(np.diag(np.asarray(signature, dtype=float)))


def random_metric(rng, n, signature=None, amplitude=AMPLITUDE):
    """Flat metric of the given signature plus a small symmetric perturbation."""
    if signature is None:
        signature = np.ones(n)
    return SumField(flat_metric(signature), random_field(rng, (n, n), n, amplitude, pair=(0, 1)))


def random_space(rng, n, analytic=True, torsion=True, nonmetric=True, signature=None, amplitude=AMPLITUDE):
    """Generic metric-affine space in dimension ``n``.

    Parameters
    ----------
    rng : numpy.random.Generator
    analytic : bool
        If False, analytic derivatives are hidden so every derivative is a
        finite difference.
    torsion, nonmetric : bool
        Include an antisymmetric (torsion) or symmetric (nonmetricity)
        deviation from the Christoffel symbols.
    """
    metric = random_metric(rng, n, signature, amplitude)
    terms = [LeviCivitaConnection(metric)]
    if nonmetric:
        terms.append(random_field(rng, (n, n, n), n, amplitude, pair=(1, 2), kind="sym"))
    if torsion:
        terms.append(random_field(rng, (n, n, n), n, amplitude, pair=(1, 2), kind="anti"))
    connection = SumField(*terms) if len(terms) > 1 else terms[0]
    label = "general" if (torsion or nonmetric) else "levi-civita"
    if not analytic:
        metric = FiniteDifferenceOnly(metric)
        fd_terms = [LeviCivitaConnection(metric)] + [FiniteDifferenceOnly(t) for t in terms[1:]]
        connection = FiniteDifferenceOnly(SumField(*fd_terms))
    return MetricAffineSpace(metric, connection, n, label)


def random_vector_field(rng, n, amplitude=1.0, analytic=True):
    """Random smooth vector field of order-one size."""
    poly = PolynomialField.random(rng, (n,), n, scale=(amplitude, 0.3 * amplitude, 0.3 * amplitude, 0.3 * amplitude))
    f = SumField(poly, TrigField.random(rng, (n,), n, amplitude=0.3 * amplitude))
    return f if analytic else FiniteDifferenceOnly(f)


def random_point(rng, n, radius=0.3):
    """Point near the origin where random spaces are well conditioned."""
    return radius * rng.uniform(-1.0, 1.0, n)


def constant_torsion_space(n, components, signature=None):
    """Flat metric with a constant connection of prescribed torsion.

    Parameters
    ----------
    components : dict
        ``{(a, b, c): value}`` entries of Gamma^a_bc; all others zero. For
        example ``{(0, 1, 2): k}`` gives T^0_21 = k, T^0_12 = -k.
    """
    gam = np.zeros((n, n, n))
    for idx, val in components.items():
        gam[idx] = val
    metric = flat_metric(np.ones(n) if signature is None else signature)
    return MetricAffineSpace(metric, ConstantField(gam), n, "general")


def nonmetric_space(rng, n, amplitude=AMPLITUDE, signature=None):
    """Torsion-free space whose connection is Christoffel + symmetric A."""
    return random_space(rng, n, analytic=True, torsion=False, nonmetric=True, signature=signature, amplitude=amplitude)


def prescribed_space(metric, torsion_field, nonmetricity_field, n):
    """Space whose connection is rebuilt from metric, torsion and nonmetricity.

    The torsion and nonmetricity fields are evaluated pointwise; the
    connection derivative is taken by finite differences.
    """
    connection = AnalyticField(lambda x: reconstruct_connection(metric, torsion_field, nonmetricity_field, x))
    return MetricAffineSpace(metric, connection, n, "general")
