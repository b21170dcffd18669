"""Neumann functional, compatibility constant and the quasi-Newton shape solve.

With ``g(theta) = |grad phi|^2`` on the boundary ``rho = 1 + eps*B`` and
``w(theta) = [R + eps (1 + eps B) cos theta]^2``:

    c = int g cos / int w cos,   Fn = g - c w,   G = (Fn - kappa) / eps.

The shape equation ``G(eps, B) = 0`` is solved for even ``B`` orthogonal to
``cos theta`` by iterating with the frozen linearization at ``(0, 0)``.
"""

from __future__ import annotations

import csv
import logging
import sys
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import TOL_NEWTON, boundary_gradient, default_basis, solve_dirichlet
from .errors import DegenerateDenominator, NotInvertible, ShapeDiverged
from .fourier import FourierSeries
from .spectral import project_X

log = logging.getLogger(__name__)

TOL_SHAPE = 1e-9
MAX_SHAPE = 40
B_GUARD = 0.5
EPS_MAX = 0.05


@dataclass
class NeumannData:
    """Boundary quantities of one Dirichlet solve."""

    phi: object
    grad_sq: np.ndarray
    weight: np.ndarray
    theta: np.ndarray
    c1: float
    c2: float
    c: float


def _weight(consts, B, theta):
    eps = consts.eps
    return (consts.R + eps * (1.0 + eps * B(theta)) * np.cos(theta)) ** 2


def neumann_data(consts, profile, B=None, phi=None, basis=None):
    """Solve (unless ``phi`` is given) and evaluate the boundary integrals.

    Both integrals use the trapezoid rule on the uniform angular grid of the
    discretization.
    """
    B = FourierSeries.zeros() if B is None else B
    if phi is None:
        phi = solve_dirichlet(consts, profile, B, basis)
    g = boundary_gradient(consts, profile, B, phi)
    K = phi.basis.n_theta_full
    theta = 2 * np.pi * np.arange(K) / K
    grad_sq = g(theta)
    weight = _weight(consts, B, theta)
    cos = np.cos(theta)
    h = 2 * np.pi / K
    c1 = float(h * np.sum(grad_sq * cos))
    c2 = float(h * np.sum(weight * cos))
    if consts.eps == 0:
        c = consts.c_limit
    else:
        if abs(c2) < 10 * np.finfo(float).eps * abs(c1) or c2 == 0:
            raise DegenerateDenominator(f"c2 = {c2:.3e} against c1 = {c1:.3e}")
        c = c1 / c2
    return NeumannData(phi, grad_sq, weight, theta, c1, c2, c)


def neumann_constant(consts, profile, B=None, phi=None, basis=None):
    """Compatibility constant ``c_{eps,B}``; ``4 A0 A1 / R`` at ``eps = 0``."""
    return neumann_data(consts, profile, B, phi, basis).c


def _functional_F(nd):
    return FourierSeries.from_values(nd.grad_sq - nd.c * nd.weight)


def functional_F(consts, profile, B=None, phi=None, basis=None):
    """Neumann defect ``|grad phi|^2 - c [R + eps (1 + eps B) cos]^2``."""
    return _functional_F(neumann_data(consts, profile, B, phi, basis))


def functional_G(consts, profile, B=None, phi=None, basis=None):
    """``(Fn - kappa) / eps``, projected onto even series without ``cos theta``.

    Defined as ``0`` at ``eps = 0`` (its continuous value at ``B = 0``).
    """
    if consts.eps == 0:
        return FourierSeries.zeros(in_x=True)
    Fn = functional_F(consts, profile, B, phi, basis)
    return project_X((Fn - consts.kappa) / consts.eps)


# -- the frozen linearization ---------------------------------------------------
def _check_invertible(consts):
    if consts.A0 == 0 or consts.A0 - consts.A1 * consts.R == 0:
        raise NotInvertible("a*R^2 - 3b = 0: the linearization has a kernel")


def linearized_DG0(consts, Bdot):
    """Action of ``D_B G(0, 0)`` on an even ``Bdot``.

    Mode 0 picks up ``8 A0^2 [(1 - A1 R/A0) B_0 + B_2 / 2]`` and every mode
    ``n >= 2`` is multiplied by ``-8 A0^2 (n - 1)`` (complex amplitudes).
    """
    _check_invertible(consts)
    A0 = consts.A0
    b = Bdot.coeffs.real
    out = np.zeros(max(b.size, 1))
    n = np.arange(b.size)
    out[2:] = -8.0 * A0**2 * (n[2:] - 1) * b[2:]
    b2 = b[2] if b.size > 2 else 0.0
    out[0] = 8.0 * A0**2 * ((1.0 - consts.A1 * consts.R / A0) * b[0] + 0.5 * b2)
    return FourierSeries(out, in_x=True)


def inverse_DG0(consts, g):
    """Solve ``D_B G(0, 0) Bdot = g`` for ``Bdot`` in the constraint space."""
    _check_invertible(consts)
    A0 = consts.A0
    gc = project_X(g).coeffs.real
    out = np.zeros(gc.size)
    n = np.arange(gc.size)
    out[2:] = -gc[2:] / (8.0 * A0**2 * (n[2:] - 1))
    b2 = out[2] if out.size > 2 else 0.0
    out[0] = (gc[0] / (8.0 * A0**2) - 0.5 * b2) / (1.0 - consts.A1 * consts.R / A0)
    return FourierSeries(out, in_x=True)


# -- the shape iteration -----------------------------------------------------
@dataclass
class ShapeState:
    """Result of the shape iteration.

    ``c_eps_B`` is the compatibility constant at the returned ``B``;
    ``history`` holds one row per iterate.
    """

    B: FourierSeries
    c_eps_B: float
    G_residual: FourierSeries
    iter: int
    converged: bool
    phi: object = None
    c1: float = float("nan")
    c2: float = float("nan")
    history: list = field(default_factory=list)

    @property
    def residual_norm(self):
        return self.G_residual.sup_norm()


HISTORY_FIELDS = ("iter", "G_sup", "B_sup", "c_eps_B", "newton_iters")


def solve_shape(consts, profile, basis=None, tol=TOL_SHAPE, max_iter=MAX_SHAPE,
                eps_max=EPS_MAX, verbose=False, stream=None, tol_newton=TOL_NEWTON):
    """Quasi-Newton iteration ``B <- B - DG0^{-1} G(eps, B)`` from ``B = 0``.

    Parameters
    ----------
    basis : DiskBasis, optional
        Discretization of every Dirichlet solve (default 32 x 32, even).
    verbose : bool
        Write one CSV row per iterate to ``stream`` (default stderr).

    Raises
    ------
    ShapeDiverged
        On stagnation, ``sup|B| > 0.5`` or no convergence in ``max_iter``.
    """
    if not 0 < consts.eps <= eps_max:
        raise ValueError(f"eps must lie in (0, {eps_max}], got {consts.eps}")
    basis = default_basis() if basis is None else basis
    writer = None
    if verbose:
        writer = csv.writer(stream or sys.stderr)
        writer.writerow(HISTORY_FIELDS)
    B = FourierSeries.zeros(in_x=True)
    history = []
    guess = None
    prev = np.inf
    stalled = 0
    for it in range(max_iter + 1):
        phi = solve_dirichlet(consts, profile, B, basis, tol=tol_newton, guess=guess)
        nd = neumann_data(consts, profile, B, phi)
        G = project_X((_functional_F(nd) - consts.kappa) / consts.eps)
        gnorm = G.sup_norm()
        row = (it, gnorm, B.sup_norm(), nd.c, phi.info["iterations"])
        history.append(dict(zip(HISTORY_FIELDS, row)))
        if writer is not None:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        log.info("shape it=%d |G|=%.3e |B|=%.3e c=%.15g", it, gnorm, row[2], nd.c)
        if gnorm <= tol:
            return ShapeState(B, nd.c, G, it, True, phi, nd.c1, nd.c2, history)
        if not np.isfinite(gnorm):
            raise ShapeDiverged(f"non-finite residual at iteration {it}")
        stalled = stalled + 1 if gnorm > 0.9 * prev else 0
        if stalled >= 3:
            raise ShapeDiverged(f"residual stagnated at {gnorm:.3e} (iteration {it})")
        prev = gnorm
        if it == max_iter:
            break
        B = B - inverse_DG0(consts, G)
        if B.sup_norm() > B_GUARD:
            raise ShapeDiverged(f"sup|B| = {B.sup_norm():.3g} exceeds {B_GUARD}")
        guess = phi
    raise ShapeDiverged(f"no convergence in {max_iter} iterations (|G| = {gnorm:.3e})")
