"""Newton solver for the rescaled semilinear Dirichlet problem.

On ``Omega = {rho < 1 + eps*B(theta)}`` (``x = rho cos theta``) we solve

    Lap(phi) - eps/(R + eps*x) * d_x(phi) = (R + eps*x)**2 H'(eps^2 phi)
                                            - (1/2) (F^2)'(eps^2 phi),
    phi = 0 on the boundary,

after pulling the domain back to the unit disk with :class:`DomainMap`.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg as sla

from .errors import NewtonDiverged
from .fourier import FourierSeries
from .grid import DiskBasis, DiskField
from .mapping import DomainMap
from .spectral import _full_circle

log = logging.getLogger(__name__)

TOL_NEWTON = 1e-11
MAX_NEWTON = 25
N_THETA = 32
N_RHO = 32


def default_basis(B=None, n_theta=N_THETA, n_rho=N_RHO, full=False):
    """Basis for a solve; cosine-only when ``B`` is even unless ``full``."""
    even = not full and (B is None or B.is_even())
    return DiskBasis.get(n_theta, n_rho, even)


def _shape(B):
    return FourierSeries.zeros() if B is None else B


# -- the source term ----------------------------------------------------------
def source(consts, profile, x, phi):
    """Right-hand side ``a R^2 + b + 2 a R eps x + remainder(x, phi)``.

    The remainder is ``eps^2 a x^2 + (R + eps x)^2 H1'(psi) - (1/2) F1'(psi)``
    with ``H1' = H' - a`` and ``F1' = (F^2)' + 2 b`` at ``psi = eps^2 phi``.
    """
    R, eps, a, b = consts.R, consts.eps, consts.a, consts.b
    psi = eps**2 * phi
    r = R + eps * x
    H1 = profile.dH(psi) - a
    F1 = profile.swirl_sq(psi, consts, 1) + 2.0 * b
    lead = a * R**2 + b + 2.0 * a * R * eps * x
    return lead + (eps**2 * a * x**2 + r * r * H1 - 0.5 * F1)


def dsource(consts, profile, x, phi):
    """Derivative of :func:`source` with respect to ``phi``."""
    eps = consts.eps
    psi = eps**2 * phi
    r = consts.R + eps * x
    return eps**2 * (r * r * profile.d2H(psi) - 0.5 * profile.swirl_sq(psi, consts, 2))


# -- operators ----------------------------------------------------------------
def _operator(consts, dmap):
    """Matrix of ``Lap - eps/(R + eps x) d_x`` from coefficients to node values."""
    A = dmap.laplacian_matrix()
    if consts.eps:
        x = dmap.xy_nodes[0].reshape(-1, 1)
        A = A - (consts.eps / (consts.R + consts.eps * x)) * dmap.dx_matrix()
    return A


def _operator_nodes(consts, dmap, field):
    out = dmap.laplacian_nodes(field)
    if consts.eps:
        x = dmap.xy_nodes[0]
        out = out - consts.eps / (consts.R + consts.eps * x) * dmap.grad_nodes(field)[0]
    return out


def residual_gs(consts, profile, B, phi):
    """Pointwise residual of the Dirichlet PDE at every collocation node.

    Nodes on ``s = 1`` are included, so the residual also measures how well
    the truncated expansion satisfies the equation up to the boundary.
    """
    B = _shape(B)
    dmap = phi.dmap if phi.dmap is not None else DomainMap(B, consts.eps, phi.basis)
    if phi.dmap is None or dmap.basis != phi.basis:
        dmap = DomainMap(B, consts.eps, phi.basis)
    x = dmap.xy_nodes[0]
    res = _operator_nodes(consts, dmap, phi) - source(consts, profile, x, phi.values)
    return DiskField.from_values(phi.basis, res, dmap)


def initial_guess(consts, dmap):
    """``A0 (rho^2 - 1)`` at the physical points of the mapped nodes."""
    S = dmap.stretch_nodes[0]
    return DiskField.from_values(dmap.basis, consts.A0 * (S * S - 1.0), dmap)


def solve_dirichlet(consts, profile, B=None, basis=None, tol=TOL_NEWTON,
                    max_iter=MAX_NEWTON, guess=None, full=False, domain=None):
    """Solve the Dirichlet problem on ``{rho < 1 + eps*B}`` by Newton's method.

    Parameters
    ----------
    consts : ProblemConstants
    profile : ProfileFunctions
    B : FourierSeries, optional
        Boundary perturbation; ``None`` means the unit disk.
    basis : DiskBasis, optional
        Discretization; default 32 x 32, cosine-only for even ``B``.
    tol : float
        Sup-norm tolerance on the collocation residual.
    guess : DiskField, optional
        Starting iterate on the same basis; default ``A0 (rho^2 - 1)``.
    full : bool
        Force the full (cos and sin) basis even for even ``B``.
    domain : DomainMap, optional
        Prebuilt domain map; overrides ``B`` and ``basis`` for the geometry
        while ``consts.eps`` still enters the equation.

    Returns
    -------
    DiskField
        ``phi`` pulled back to the unit disk.  ``info`` holds the Newton
        history (``residuals``, ``steps``), ``iterations``, ``residual_gs``
        and ``interior_max``.

    Raises
    ------
    NewtonDiverged
        If the residual is not below ``tol`` after ``max_iter`` steps.
    MapDegenerate
        If ``1 + eps*B`` is too small for the domain map.
    """
    if domain is not None:
        dmap, basis = domain, domain.basis
        B = domain.epsB / consts.eps if consts.eps else domain.B
    else:
        B = _shape(B)
        basis = default_basis(B, full=full) if basis is None else basis
        dmap = DomainMap(B, consts.eps, basis)
    x = dmap.xy_nodes[0].ravel()
    L = _operator(consts, dmap)
    V = basis.matrix()
    bnd = basis.boundary_rows()
    inner = np.setdiff1d(np.arange(basis.size), bnd)

    c = (initial_guess(consts, dmap) if guess is None else guess).flat.copy()
    residuals, steps = [], []
    converged = False
    for it in range(max_iter + 1):
        phi = V @ c
        F = L @ c - source(consts, profile, x, phi)
        F[bnd] = phi[bnd]
        rnorm = float(np.max(np.abs(F)))
        residuals.append(rnorm)
        log.debug("newton it=%d residual=%.3e", it, rnorm)
        if not np.isfinite(rnorm):
            break
        if rnorm <= tol and (not steps or steps[-1] <= 1e3 * tol):
            converged = True
            break
        if it == max_iter:
            break
        J = L - dsource(consts, profile, x, phi)[:, None] * V
        J[bnd] = V[bnd]
        dc = sla.solve(J, -F, check_finite=False)
        c += dc
        steps.append(float(np.max(np.abs(V @ dc))))
    if not converged:
        raise NewtonDiverged(
            f"Newton residual {residuals[-1]:.3e} > {tol:.1e} after {len(steps)} steps")

    out = DiskField(basis, c, dmap)
    res = residual_gs(consts, profile, B, out)
    interior_max = float(np.max(out.values.ravel()[inner]))
    out.info.update(residuals=residuals, steps=steps, iterations=len(steps),
                    residual_gs=res.sup_norm(), interior_max=interior_max,
                    negative_inside=interior_max < 0)
    if interior_max >= 0:
        log.warning("solution is not negative inside (max %.3e)", interior_max)
    return out


# -- derived quantities -------------------------------------------------------
def boundary_gradient(consts, profile, B=None, phi=None, basis=None):
    """``theta -> |grad phi|^2`` on the boundary ``rho = 1 + eps*B(theta)``.

    Uses the exact chain rule through the domain map at the boundary nodes.
    """
    B = _shape(B)
    if phi is None:
        phi = solve_dirichlet(consts, profile, B, basis)
    fx, fy = phi.dmap.grad_nodes(phi)
    g = fx[0] ** 2 + fy[0] ** 2
    return FourierSeries.from_values(_full_circle(phi.basis, g), even=phi.basis.even)


def shape_derivative(consts, profile, Bdot, phi0=None, basis=None):
    """Eulerian derivative of the solution under the boundary motion ``Bdot``.

    Solves the Newton linearization at ``phi0 = phi_{eps,0}`` with boundary
    data ``-eps * d_rho(phi0)(1, theta) * Bdot(theta)``.
    """
    if basis is None:
        basis = phi0.basis if phi0 is not None else default_basis(Bdot)
    if not Bdot.is_even() and basis.even:
        basis = basis.with_even(False)
    if phi0 is None or phi0.basis != basis:
        phi0 = solve_dirichlet(consts, profile, None, basis)
    dmap = phi0.dmap
    x = dmap.xy_nodes[0].ravel()
    V = basis.matrix()
    J = _operator(consts, dmap) - dsource(consts, profile, x, V @ phi0.flat)[:, None] * V
    bnd = basis.boundary_rows()
    J[bnd] = V[bnd]
    rhs = np.zeros(basis.size)
    rhs[bnd] = -consts.eps * phi0.nodal(1, 0)[0] * Bdot(basis.theta)
    return DiskField(basis, sla.solve(J, rhs, check_finite=False), dmap)
