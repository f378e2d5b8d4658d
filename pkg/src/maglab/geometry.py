"""Metric-affine structure: torsion, nonmetricity, curvature and Lie derivatives.

A :class:`MetricAffineSpace` pairs a metric field ``g(x) -> (n, n)`` with an
independent connection field ``gamma(x) -> (n, n, n)``, ``gamma[a, b, c]``
being Gamma^a_bc. The last lower index of a connection is the direction of
differentiation, so covariant derivatives read

    a^i_;l = d_l a^i + Gamma^i_kl a^k,    w_a;c = d_c w_a - Gamma^p_ac w_p,

and a covariant-derivative axis is appended after the tensor's own slots.
Torsion is T^a_cb = Gamma^a_bc - Gamma^a_cb and curvature is

    R^a_bij = d_i G^a_bj - d_j G^a_bi + G^a_ci G^c_bj - G^a_cj G^c_bi.

With these conventions the second-derivative commutator is
u^a_;kl - u^a_;lk = R^a_blk u^b - T^p_lk u^a_;p, which the test suite uses
as the arbiter of every sign below.

All operations return plain component arrays in the holonomic chart basis.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SymmetryError
from .tensor_core import as_point, gradient, hessian, invert_metric

LABELS = ("levi-civita", "cartan", "general")


# ---------------------------------------------------------------------------
# connection fields


class LeviCivitaConnection:
    """Christoffel symbols of a metric field.

    ``grad`` uses the metric Hessian, so it is analytic whenever the metric
    supplies ``grad`` and ``hess``.
    """

    def __init__(self, metric):
        self.metric = metric

    def __call__(self, x):
        x = as_point(x)
        g = self.metric(x)
        return kernels.christoffel(invert_metric(g), gradient(self.metric, x))

    def grad(self, x):
        x = as_point(x)
        g = self.metric(x)
        ginv = invert_metric(g)
        dg = gradient(self.metric, x)
        ddg = hessian(self.metric, x)
        # d_i g^ad = -g^ap d_i g_pq g^qd
        dginv = -np.einsum("ap,pqi,qd->adi", ginv, dg, ginv)
        low = dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1)
        dlow = ddg.transpose(0, 2, 1, 3) + ddg - ddg.transpose(2, 0, 1, 3)
        return 0.5 * (np.einsum("adi,dbc->abci", dginv, low) + np.einsum("ad,dbci->abci", ginv, dlow))


class ShiftedConnection:
    """Connection Gamma + A for a (1,2) field A."""

    def __init__(self, base, shift):
        self.base = base
        self.shift = shift

    def __call__(self, x):
        return np.asarray(self.base(x), dtype=float) + np.asarray(self.shift(x), dtype=float)

    def grad(self, x):
        return gradient(self.base, x) + gradient(self.shift, x)


class CartanConnection:
    """Metric-compatible connection Gamma - Gamma(C) of a space.

    Has no analytic ``grad``; its derivatives come from finite differences.
    """

    def __init__(self, space):
        self.space = space

    def __call__(self, x):
        return self.space.connection(x) - cartan_symbol(self.space, x)


@dataclass(frozen=True)
class MetricAffineSpace:
    """A chart with a metric and an independent connection.

    Parameters
    ----------
    metric : callable
        ``x -> (n, n)`` symmetric components g_ij.
    connection : callable
        ``x -> (n, n, n)`` components Gamma^a_bc.
    dim : int
        Chart dimension n.
    label : {"levi-civita", "cartan", "general"}
        What the connection is known to be.
    """

    metric: object
    connection: object
    dim: int
    label: str = "general"

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")

    @classmethod
    def riemannian(cls, metric, dim):
        """Space whose connection is the Levi-Civita connection of ``metric``."""
        return cls(metric, LeviCivitaConnection(metric), dim, "levi-civita")

    def cartan(self):
        """Same metric with the Cartan connection Gamma - Gamma(C)."""
        if self.label in ("levi-civita", "cartan"):
            return self
        return MetricAffineSpace(self.metric, CartanConnection(self), self.dim, "cartan")

    def shifted(self, shift):
        """Same metric with connection Gamma + A."""
        return MetricAffineSpace(self.metric, ShiftedConnection(self.connection, shift), self.dim, "general")


# ---------------------------------------------------------------------------
# covariant derivative machinery


def covariant_derivative(values, dvalues, gamma, up):
    """Covariant derivative of tensor components at a point.

    Parameters
    ----------
    values : ndarray
        Components with ``up`` leading contravariant slots, rest covariant.
    dvalues : ndarray
        Partial derivatives, derivative axis last.
    gamma : ndarray
        Connection Gamma^a_bc at the point.
    up : int
        Number of contravariant slots.

    Returns
    -------
    ndarray
        Components with the covariant-derivative axis last.
    """
    values = np.asarray(values, dtype=float)
    out = np.array(dvalues, dtype=float)
    rank = values.ndim
    for k in range(rank):
        if k < up:
            term = np.tensordot(values, gamma, axes=([k], [1]))
            out += np.moveaxis(term, rank - 1, k)
        else:
            term = np.tensordot(values, gamma, axes=([k], [0]))
            out -= np.moveaxis(term, rank - 1, k)
    return out


def _vector_jets(space, xi, x, order):
    """Covariant derivatives of a vector field up to ``order`` (1 or 2)."""
    gam = space.connection(x)
    v = np.asarray(xi(x), dtype=float)
    dv = gradient(xi, x)
    nab = covariant_derivative(v, dv, gam, 1)
    if order == 1:
        return gam, v, dv, nab
    dgam = gradient(space.connection, x)
    ddv = hessian(xi, x)
    d_nab = ddv + np.einsum("apbc,p->abc", dgam, v) + np.einsum("apb,pc->abc", gam, dv)
    nabnab = covariant_derivative(nab, d_nab, gam, 1)
    return gam, dgam, v, dv, ddv, nab, nabnab


def _torsion_from(gam):
    return gam.transpose(0, 2, 1) - gam


def _torsion_jet(space, x):
    gam = space.connection(x)
    dgam = gradient(space.connection, x)
    tor = _torsion_from(gam)
    dtor = dgam.transpose(0, 2, 1, 3) - dgam
    return gam, dgam, tor, covariant_derivative(tor, dtor, gam, 1)


# ---------------------------------------------------------------------------
# torsion, nonmetricity, reconstruction


def torsion(space, p):
    """Torsion ``T[a, c, b]`` = T^a_cb = Gamma^a_bc - Gamma^a_cb.

    Antisymmetric in the lower pair exactly.
    """
    return _torsion_from(space.connection(as_point(p)))


def metric_covariant_derivative(space, p):
    """``D[i, j, k]`` = g_ij;k with respect to the space's connection."""
    x = as_point(p)
    return covariant_derivative(space.metric(x), gradient(space.metric, x), space.connection(x), 0)


def nonmetricity(space, p, contravariant=False):
    """Nonmetricity Q_kij = -g_ij;k, stored as ``Q[k, i, j]``.

    Parameters
    ----------
    contravariant : bool
        Also return Q_k^ij = g^ia g^jb Q_kab as ``Qup[k, i, j]``.
    """
    x = as_point(p)
    q = -metric_covariant_derivative(space, x).transpose(2, 0, 1)
    if not contravariant:
        return q
    ginv = invert_metric(space.metric(x))
    return q, np.einsum("ia,jb,kab->kij", ginv, ginv, q)


def reconstruct_connection(metric, torsion_field, nonmetricity_field, p):
    """Connection with prescribed metric, torsion and nonmetricity.

    Solves T(Gamma) = T and Q(g, Gamma) = Q for Gamma. With
    G_kij = g_kp Gamma^p_ij and T_kij = g_kr T^r_ij,

        2 G_kij = g_ki,j + g_jk,i - g_ij,k + Q_ijk + Q_jki - Q_kij
                  - T_kij - T_ijk - T_jik.

    Parameters
    ----------
    metric : callable
        Metric field (its gradient is needed).
    torsion_field, nonmetricity_field : callable or ndarray
        Values T^a_cb and Q_kij at ``p`` (fields or already-evaluated arrays).
    p : array_like
        Point.

    Returns
    -------
    ndarray
        ``gamma[p, i, j]``.
    """
    x = as_point(p)
    g = metric(x)
    ginv = invert_metric(g)
    dg = gradient(metric, x)
    tor = np.asarray(torsion_field(x) if callable(torsion_field) else torsion_field, dtype=float)
    q = np.asarray(nonmetricity_field(x) if callable(nonmetricity_field) else nonmetricity_field, dtype=float)
    if np.max(np.abs(tor + tor.transpose(0, 2, 1)), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(tor))):
        raise SymmetryError("torsion must be antisymmetric in its lower pair")
    tl = np.einsum("kr,rij->kij", g, tor)
    low = (
        dg
        + np.einsum("jki->kij", dg)
        - np.einsum("ijk->kij", dg)
        + np.einsum("ijk->kij", q)
        + np.einsum("jki->kij", q)
        - q
        - tl
        - np.einsum("ijk->kij", tl)
        - np.einsum("jik->kij", tl)
    )
    return 0.5 * np.einsum("pk,kij->pij", ginv, low)


# ---------------------------------------------------------------------------
# Cartan symbol


def cartan_symbol(space, p):
    """Gamma(C)^i_kl = 1/2 g^im (g_kl;m - g_km;l - g_ml;k).

    Covariant derivatives use the space's own connection. Subtracting the
    result from the connection gives a metric-compatible connection with
    the same torsion.
    """
    x = as_point(p)
    ginv = invert_metric(space.metric(x))
    d = metric_covariant_derivative(space, x)
    comb = d - d.transpose(0, 2, 1) - d.transpose(2, 1, 0)
    return 0.5 * np.einsum("im,klm->ikl", ginv, comb)


def cartan_connection(space, p):
    """Gamma^i_kl - Gamma(C)^i_kl at ``p``."""
    x = as_point(p)
    return space.connection(x) - cartan_symbol(space, x)


# ---------------------------------------------------------------------------
# curvature


def curvature(space, p):
    """Curvature ``R[a, b, i, j]`` = R^a_bij, antisymmetric in (i, j)."""
    x = as_point(p)
    return kernels.riemann(space.connection(x), gradient(space.connection, x))


def ricci(space, p):
    """Ricci tensor R_bj = R^a_baj."""
    return np.einsum("abaj->bj", curvature(space, p))


def scalar_curvature(space, p):
    """g^bj R_bj."""
    x = as_point(p)
    return float(np.einsum("bj,bj->", invert_metric(space.metric(x)), ricci(space, x)))


def shifted_curvature(space, shift, p):
    """Curvature of Gamma + A assembled from quantities of Gamma.

    R'^a_bde = R^a_bde + A^a_be;d - A^a_bd;e + A^a_cd A^c_be
               - A^a_ce A^c_bd + T^p_de A^a_bp,

    with covariant derivatives and torsion taken from Gamma.

    Parameters
    ----------
    shift : callable
        Field A^a_bc, symmetric in its lower pair.
    """
    x = as_point(p)
    a = np.asarray(shift(x), dtype=float)
    if np.max(np.abs(a - a.transpose(0, 2, 1)), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(a))):
        raise SymmetryError("shift must be symmetric in its lower pair")
    gam, dgam, tor, _ = _torsion_jet(space, x)
    r = kernels.riemann(gam, dgam)
    na = covariant_derivative(a, gradient(shift, x), gam, 1)
    aa = np.einsum("acd,cbe->abde", a, a)
    return (
        r
        + na.transpose(0, 1, 3, 2)
        - na
        + aa
        - aa.transpose(0, 1, 3, 2)
        + np.einsum("pde,abp->abde", tor, a)
    )


# ---------------------------------------------------------------------------
# Lie derivatives and Killing residuals


def lie_derivative_metric(space, xi, p):
    """L_xi g_ab in covariant form.

    xi^k_;a g_kb + xi^k_;b g_ka + T^l_ka g_lb xi^k + T^l_kb g_la xi^k
    + g_ab;k xi^k.
    """
    x = as_point(p)
    g = space.metric(x)
    gam, v, _, nab = _vector_jets(space, xi, x, 1)
    tor = _torsion_from(gam)
    dmet = covariant_derivative(g, gradient(space.metric, x), gam, 0)
    a = np.einsum("ka,kb->ab", nab, g) + np.einsum("lka,lb,k->ab", tor, g, v)
    return a + a.T + np.einsum("abk,k->ab", dmet, v)


def lie_derivative_metric_coordinate(space, xi, p):
    """L_xi g_ab = xi^c d_c g_ab + g_cb d_a xi^c + g_ac d_b xi^c."""
    x = as_point(p)
    g = space.metric(x)
    v = np.asarray(xi(x), dtype=float)
    dv = gradient(xi, x)
    a = np.einsum("cb,ca->ab", g, dv)
    return np.einsum("c,abc->ab", v, gradient(space.metric, x)) + a + a.T


def lie_derivative_connection(space, xi, p):
    """L_xi Gamma^a_bc in covariant form, ``L[a, b, c]``.

    -R^a_bcp xi^p - T^a_bp;c xi^p - T^a_be xi^e_;c + xi^a_;bc.
    """
    x = as_point(p)
    gam, dgam, v, _, _, nab, nabnab = _vector_jets(space, xi, x, 2)
    r = kernels.riemann(gam, dgam)
    tor = _torsion_from(gam)
    dtor = dgam.transpose(0, 2, 1, 3) - dgam
    ntor = covariant_derivative(tor, dtor, gam, 1)
    return (
        -np.einsum("abcp,p->abc", r, v)
        - np.einsum("abpc,p->abc", ntor, v)
        - np.einsum("abe,ec->abc", tor, nab)
        + nabnab
    )


def lie_derivative_connection_coordinate(space, xi, p):
    """L_xi Gamma^a_bc from the coordinate definition.

    xi^p d_p G^a_bc - G^p_bc d_p xi^a + G^a_pc d_b xi^p + G^a_bp d_c xi^p
    + d_b d_c xi^a.
    """
    x = as_point(p)
    gam = space.connection(x)
    dgam = gradient(space.connection, x)
    v = np.asarray(xi(x), dtype=float)
    dv = gradient(xi, x)
    return (
        np.einsum("abcp,p->abc", dgam, v)
        - np.einsum("pbc,ap->abc", gam, dv)
        + np.einsum("apc,pb->abc", gam, dv)
        + np.einsum("abp,pc->abc", gam, dv)
        + hessian(xi, x)
    )


def lie_derivative_connection_riemann(space, xi, p):
    """Torsion-free form -R^a_cbp xi^p + xi^a_;cb, stored as ``L[a, b, c]``.

    Equal to :func:`lie_derivative_connection` when the connection is
    symmetric.
    """
    x = as_point(p)
    gam, dgam, v, _, _, _, nabnab = _vector_jets(space, xi, x, 2)
    r = kernels.riemann(gam, dgam)
    return -np.einsum("acbp,p->abc", r, v) + nabnab.transpose(0, 2, 1)


def killing_residual(space, xi, p):
    """L_xi g_ab; vanishes iff xi is a Killing vector at ``p``."""
    return lie_derivative_metric(space, xi, p)


def killing2_residual(space, xi, p):
    """xi^a_;bc - R^a_bcp xi^p - T^a_bp;c xi^p - T^a_bp xi^p_;c.

    Vanishes iff the flow of xi preserves the connection; equals
    L_xi Gamma^a_bc.
    """
    return lie_derivative_connection(space, xi, p)


def killing2_consequence(space, xi, p):
    """Integrability condition of the second-type Killing equation, ``Z[a, b, c]``.

    Antisymmetrizing xi^a_;bc = R^a_bcp xi^p + T^a_bp;c xi^p + T^a_bp xi^p_;c
    in (b, c) and replacing the left side by the commutator identity gives

        Z^a_bc = R^a_pcb xi^p - T^p_cb xi^a_;p - (R^a_bcp - R^a_cbp) xi^p
                 - (T^a_bp;c - T^a_cp;b) xi^p - T^a_bp xi^p_;c + T^a_cp xi^p_;b,

    which vanishes for every vector preserving the connection. Without
    torsion it reduces to -(R^a_pbc + R^a_bcp + R^a_cpb) xi^p, zero for
    every xi by the cyclic curvature identity.
    """
    x = as_point(p)
    gam, dgam, v, _, _, nab, _ = _vector_jets(space, xi, x, 2)
    r = kernels.riemann(gam, dgam)
    tor = _torsion_from(gam)
    dtor = dgam.transpose(0, 2, 1, 3) - dgam
    ntor = covariant_derivative(tor, dtor, gam, 1)
    rv = np.einsum("abcp,p->abc", r, v)
    ntv = np.einsum("abpc,p->abc", ntor, v)
    tn = np.einsum("abp,pc->abc", tor, nab)
    return (
        np.einsum("apcb,p->abc", r, v)
        - np.einsum("pcb,ap->abc", tor, nab)
        - (rv - rv.transpose(0, 2, 1))
        - (ntv - ntv.transpose(0, 2, 1))
        - (tn - tn.transpose(0, 2, 1))
    )


# ---------------------------------------------------------------------------
# identities


def bianchi_residual(space, p):
    """First Bianchi identity with torsion, ``B[k, i, j, m]``.

    T^k_ij;m + T^k_mi;j + T^k_jm;i + T^k_pi T^p_jm + T^k_pm T^p_ij
    + T^k_pj T^p_mi - (R^k_jmi + R^k_ijm + R^k_mij).
    """
    x = as_point(p)
    gam, dgam, tor, ntor = _torsion_jet(space, x)
    r = kernels.riemann(gam, dgam)
    lhs = (
        ntor
        + ntor.transpose(0, 2, 3, 1)
        + ntor.transpose(0, 3, 1, 2)
        + np.einsum("kpi,pjm->kijm", tor, tor)
        + np.einsum("kpm,pij->kijm", tor, tor)
        + np.einsum("kpj,pmi->kijm", tor, tor)
    )
    rhs = r.transpose(0, 3, 1, 2) + r + r.transpose(0, 2, 3, 1)
    return lhs - rhs


def commutator_residual(space, u, p):
    """u^a_;kl - u^a_;lk - (R^a_blk u^b - T^p_lk u^a_;p), ``C[a, k, l]``."""
    x = as_point(p)
    gam, dgam, v, _, _, nab, nabnab = _vector_jets(space, u, x, 2)
    r = kernels.riemann(gam, dgam)
    tor = _torsion_from(gam)
    lhs = nabnab - nabnab.transpose(0, 2, 1)
    rhs = np.einsum("ablk,b->akl", r, v) - np.einsum("plk,ap->akl", tor, nab)
    return lhs - rhs
