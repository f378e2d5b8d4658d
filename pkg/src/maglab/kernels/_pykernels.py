"""NumPy implementations of the small-tensor kernels.

These are the reference versions; ``_ckernels`` must agree with them to
roundoff. Index conventions: ``dg[i, j, k] = d_k g_ij``, ``gamma[a, b, c]``
is Gamma^a_bc and derivative axes come last.
"""

import numpy as np


def christoffel(ginv, dg):
    """Levi-Civita symbols Gamma^a_bc from g^ab and the metric gradient."""
    lowered = dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1)
    # lowered[d, b, c] = d_b g_dc + d_c g_db - d_d g_bc
    return 0.5 * np.einsum("ad,dbc->abc", ginv, lowered)


def riemann(gamma, dgamma):
    """Curvature R^a_bij = d_i G^a_bj - d_j G^a_bi + G^a_ci G^c_bj - G^a_cj G^c_bi."""
    deriv = dgamma.transpose(0, 1, 3, 2) - dgamma
    quad = np.einsum("aci,cbj->abij", gamma, gamma)
    return deriv + quad - quad.transpose(0, 1, 3, 2)


def quadratic(gamma, u, w):
    """Return Gamma^k_ij u^i w^j."""
    return np.einsum("kij,i,j->k", gamma, u, w)


def poly_value(c0, c1, c2, c3, x):
    """Evaluate c0 + c1.x + c2.x.x/2 + c3.x.x.x/6 for each of m components."""
    return c0 + c1 @ x + 0.5 * (c2 @ x) @ x + ((c3 @ x) @ x) @ x / 6.0


def poly_grad(c0, c1, c2, c3, x):
    """Gradient of :func:`poly_value`, shape (m, n); ``c2``, ``c3`` symmetric."""
    return c1 + c2 @ x + 0.5 * (c3 @ x) @ x


def poly_hess(c0, c1, c2, c3, x):
    """Hessian of :func:`poly_value`, shape (m, n, n)."""
    return c2 + c3 @ x
