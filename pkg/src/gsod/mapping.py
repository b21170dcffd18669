"""Pullback of the perturbed disk ``{rho < 1 + eps*B(theta)}`` to the unit disk.

The map keeps the angle and stretches the radius,

    rho = S(s, t) = s * (1 + eps * P0B(s, t)),

where ``P0B = sum B_n s^|n| e^{int}`` is the harmonic extension of ``B``.  On
``s = 1`` this is ``1 + eps*B(t)``.  Unlike ``rho = (1 + eps*B(t)) s`` the
stretch is a polynomial in Cartesian coordinates, so pulled-back solutions stay
smooth at the centre and the Chebyshev-Fourier expansion keeps spectral
accuracy.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import MapDegenerate
from .fourier import FourierSeries


class DomainMap:
    """Radial stretch ``(s, t) -> (S(s, t), t)`` for a boundary perturbation.

    Only the product ``eps * B`` enters.
    """

    def __init__(self, B, eps, basis=None):
        if B is None:
            B = FourierSeries.zeros()
        self.B = B
        self.eps = float(eps)
        self.basis = basis
        self._a, self._b = B.cos_sin()
        self._a = self.eps * self._a
        self._b = self.eps * self._b
        self.is_identity = not (np.any(self._a) or np.any(self._b))
        edge = 1.0 + self.eps * B.values(max(64, 8 * (B.order + 1)))
        if np.min(edge) <= 0.5:
            raise MapDegenerate(f"1 + eps*B reaches {np.min(edge):.3g} <= 1/2")
        if basis is not None and np.min(self.stretch_nodes[1]) <= 0:
            raise MapDegenerate("radial stretch is not monotone at the collocation nodes")

    @property
    def epsB(self):
        return self.B * self.eps

    def boundary_radius(self, t):
        """``1 + eps*B(t)``."""
        return 1.0 + self.eps * self.B(t)

    # -- the stretch and its derivatives ------------------------------------
    def stretch(self, s, t):
        """Return ``S, S_s, S_ss, S_t, S_tt, S_st`` at ``(s, t)``."""
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        P = np.zeros(s.shape)
        Ps = np.zeros(s.shape)
        Pss = np.zeros(s.shape)
        Pt = np.zeros(s.shape)
        Ptt = np.zeros(s.shape)
        Pst = np.zeros(s.shape)
        for n in range(self._a.size):
            an, bn = self._a[n], self._b[n]
            if an == 0.0 and bn == 0.0:
                continue
            c, sn = np.cos(n * t), np.sin(n * t)
            ang = an * c + bn * sn
            dang = n * (bn * c - an * sn)
            sp = s**n
            sp1 = n * s ** max(n - 1, 0)
            sp2 = n * (n - 1) * s ** max(n - 2, 0)
            P += sp * ang
            Ps += sp1 * ang
            Pss += sp2 * ang
            Pt += sp * dang
            Ptt += -n * n * sp * ang
            Pst += sp1 * dang
        S = s * (1.0 + P)
        S_s = 1.0 + P + s * Ps
        S_ss = 2.0 * Ps + s * Pss
        S_t = s * Pt
        S_tt = s * Ptt
        S_st = Pt + s * Pst
        return S, S_s, S_ss, S_t, S_tt, S_st

    def inverse(self, rho, t, tol=1e-15, max_iter=50):
        """Computational radius ``s`` with ``S(s, t) = rho``."""
        rho, t = np.broadcast_arrays(np.asarray(rho, float), np.asarray(t, float))
        s = rho / self.boundary_radius(t)
        if self.is_identity:
            return s.copy()
        for _ in range(max_iter):
            S, S_s = self.stretch(s, t)[:2]
            step = (S - rho) / S_s
            s = s - step
            if np.max(np.abs(step), initial=0.0) <= tol * max(1.0, np.max(np.abs(s), initial=0.0)):
                break
        return s

    # -- node quantities ----------------------------------------------------
    @cached_property
    def stretch_nodes(self):
        S, T = self.basis.node_grid
        return self.stretch(S, T)

    @cached_property
    def metric(self):
        """Coefficients of the pulled-back Laplacian and Cartesian derivatives.

        Keys ``ss, st, tt, s`` give the Laplacian; ``xs, xt`` and ``ys, yt``
        give ``d/dx`` and ``d/dy`` as combinations of ``d/ds`` and ``d/dt``.
        """
        S, S_s, S_ss, S_t, S_tt, S_st = self.stretch_nodes
        _, T = self.basis.node_grid
        return metric_coefficients(S, S_s, S_ss, S_t, S_tt, S_st, T)

    @cached_property
    def xy_nodes(self):
        S = self.stretch_nodes[0]
        _, T = self.basis.node_grid
        return S * np.cos(T), S * np.sin(T)

    # -- operator matrices on the coefficient space -------------------------
    def laplacian_matrix(self):
        b, m = self.basis, self.metric
        return (m["ss"].reshape(-1, 1) * b.matrix(2, 0)
                + m["st"].reshape(-1, 1) * b.matrix(1, 1)
                + m["tt"].reshape(-1, 1) * b.matrix(0, 2)
                + m["s"].reshape(-1, 1) * b.matrix(1, 0))

    def dx_matrix(self):
        b, m = self.basis, self.metric
        return m["xs"].reshape(-1, 1) * b.matrix(1, 0) + m["xt"].reshape(-1, 1) * b.matrix(0, 1)

    def dy_matrix(self):
        b, m = self.basis, self.metric
        return m["ys"].reshape(-1, 1) * b.matrix(1, 0) + m["yt"].reshape(-1, 1) * b.matrix(0, 1)

    def grad_nodes(self, field):
        """Cartesian gradient ``(f_x, f_y)`` of a field at the nodes."""
        fs = field.nodal(1, 0)
        ft = field.nodal(0, 1)
        m = self.metric
        return m["xs"] * fs + m["xt"] * ft, m["ys"] * fs + m["yt"] * ft

    def laplacian_nodes(self, field):
        m = self.metric
        return (m["ss"] * field.nodal(2, 0) + m["st"] * field.nodal(1, 1)
                + m["tt"] * field.nodal(0, 2) + m["s"] * field.nodal(1, 0))

    # -- arbitrary physical points ------------------------------------------
    def grad_at(self, field, s, t):
        """Cartesian gradient of ``field`` at computational points ``(s, t)``.

        Points at the exact centre use the radial derivative along the axes.
        """
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        f, fs, ft = field.evaluate(s, t, ((0, 0), (1, 0), (0, 1)))
        S, S_s, _, S_t = self.stretch(s, t)[:4]
        centre = S < 1e-12
        S_safe = np.where(centre, 1.0, S)
        d_rho = fs / S_s
        d_ang = (ft - S_t / S_s * fs) / S_safe
        fx = np.cos(t) * d_rho - np.sin(t) * d_ang
        fy = np.sin(t) * d_rho + np.cos(t) * d_ang
        if np.any(centre):
            z = np.zeros(int(centre.sum()))
            _, gx = field.evaluate(z, z, ((0, 0), (1, 0)))
            _, gy = field.evaluate(z, z + 0.5 * np.pi, ((0, 0), (1, 0)))
            sx = self.stretch(z, z)[1]
            sy = self.stretch(z, z + 0.5 * np.pi)[1]
            fx[centre] = gx / sx
            fy[centre] = gy / sy
        return f, fx, fy

    def to_computational(self, x, y):
        """Physical ``(x, y)`` to ``(s, t)``."""
        rho = np.hypot(x, y)
        t = np.arctan2(y, x)
        return self.inverse(rho, t), t


def metric_coefficients(S, S_s, S_ss, S_t, S_tt, S_st, T):
    a = 1.0 / S_s
    b = -S_t / S_s
    a_s = -S_ss / S_s**2
    b_s = -S_st / S_s + S_t * S_ss / S_s**2
    b_t = -S_tt / S_s + S_t * S_st / S_s**2
    inv2 = 1.0 / S**2
    c, sn = np.cos(T), np.sin(T)
    return {
        "ss": a * a + b * b * inv2,
        "st": 2.0 * b * inv2,
        "tt": inv2,
        "s": a * a_s + a / S + (b_t + b * b_s) * inv2,
        "xs": c * a - sn * b / S,
        "xt": -sn / S,
        "ys": sn * a + c * b / S,
        "yt": c / S,
    }


def evaluate_physical(field, rho, t, derivs=((0, 0),)):
    """Evaluate a (possibly mapped) field at physical polar points ``(rho, t)``."""
    dmap = field.dmap
    s = np.asarray(rho, float) if dmap is None or dmap.is_identity else dmap.inverse(rho, t)
    return field.evaluate(s, t, derivs)
