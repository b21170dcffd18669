"""Chebyshev-Fourier representation of scalar fields on the closed unit disk.

A field is expanded as

    f(s, t) = sum_m  trig_m(t) * sum_q C[m, q] T_{p_m + 2q}(s)

where ``trig_m`` runs over ``cos(n t)`` (and ``sin(n t)`` unless the basis is
even) and ``p_m = n mod 2``.  Restricting the radial Chebyshev degrees to the
parity of the angular mode makes every basis function a smooth function on the
disk, so the centre needs no special treatment.  Collocation nodes are the
``n_rho`` non-negative points of a ``2*n_rho`` point Chebyshev-Lobatto grid on
the diameter (``s = 1`` included, ``s = 0`` excluded) times a uniform angular
grid.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import chebyshev as cheb

from .fourier import FourierSeries

_EVAL_CHUNK = 20000


class DiskBasis:
    """Nodes, basis functions and differentiation matrices for one resolution.

    Parameters
    ----------
    n_theta : int
        Highest angular mode kept.
    n_rho : int
        Radial nodes (and radial coefficients per angular function).
    even : bool
        Keep only ``cos(n t)``; collocation then uses the nodes in ``[0, pi]``.
    """

    def __init__(self, n_theta=32, n_rho=32, even=False):
        if n_theta < 1 or n_rho < 3:
            raise ValueError("need n_theta >= 1 and n_rho >= 3")
        self.n_theta = int(n_theta)
        self.n_rho = int(n_rho)
        self.even = bool(even)
        self.degree = 2 * self.n_rho - 1
        self.s = np.cos(np.pi * np.arange(self.n_rho) / self.degree)
        K = 2 * self.n_theta + 1
        self.n_theta_full = K
        t = 2 * np.pi * np.arange(K) / K
        self.theta = t[: self.n_theta + 1] if self.even else t
        n = np.arange(self.n_theta + 1)
        if self.even:
            self.modes = n
            self.kinds = np.zeros_like(n)
        else:
            self.modes = np.concatenate([n, n[1:]])
            self.kinds = np.concatenate([np.zeros_like(n), np.ones_like(n[1:])])
        self.parity = self.modes % 2
        self.n_funcs = self.modes.size
        self.size = self.n_funcs * self.n_rho
        self.shape = (self.n_rho, self.theta.size)
        if self.shape[0] * self.shape[1] != self.size:
            raise AssertionError("collocation system must be square")

    def __eq__(self, other):
        return (isinstance(other, DiskBasis) and self.n_theta == other.n_theta
                and self.n_rho == other.n_rho and self.even == other.even)

    def __hash__(self):
        return hash((self.n_theta, self.n_rho, self.even))

    def __repr__(self):
        return f"DiskBasis(n_theta={self.n_theta}, n_rho={self.n_rho}, even={self.even})"

    @staticmethod
    @lru_cache(maxsize=16)
    def get(n_theta=32, n_rho=32, even=False):
        """Shared instance, so collocation matrices are built once per resolution."""
        return DiskBasis(n_theta, n_rho, even)

    def with_even(self, even):
        return DiskBasis.get(self.n_theta, self.n_rho, even)

    # -- node grids ---------------------------------------------------------
    @cached_property
    def node_grid(self):
        """``(S, T)`` arrays of shape ``self.shape``."""
        return np.meshgrid(self.s, self.theta, indexing="ij")

    def radial_degrees(self, parity):
        return parity + 2 * np.arange(self.n_rho)

    # -- 1-D building blocks ------------------------------------------------
    def radial_values(self, s, parity, d=0):
        """``d``-th derivative of the parity-``p`` radial basis at ``s``."""
        s = np.asarray(s, dtype=float)
        out = np.empty(s.shape + (self.n_rho,))
        for i, q in enumerate(self.radial_degrees(parity)):
            e = np.zeros(q + 1)
            e[q] = 1.0
            out[..., i] = cheb.chebval(s, cheb.chebder(e, d) if d else e)
        return out

    def trig_values(self, t, d=0):
        """``d``-th derivative of every angular function at ``t``."""
        t = np.asarray(t, dtype=float)
        arg = np.multiply.outer(t, self.modes)
        n = self.modes.astype(float)
        phase = np.where(self.kinds == 0, 0.0, -0.5 * np.pi)
        # cos(n t + phase + d pi/2) * n**d covers cos/sin and all derivatives
        return n ** d * np.cos(arg + phase + 0.5 * np.pi * d)

    # -- collocation matrices -----------------------------------------------
    def matrix(self, ds=0, dt=0):
        """Map coefficients to the ``(ds, dt)`` derivative at every node."""
        key = (ds, dt)
        cache = self.__dict__.setdefault("_matrices", {})
        if key not in cache:
            T = self.trig_values(self.theta, dt)
            A = np.zeros(self.shape + (self.n_funcs, self.n_rho))
            for p in (0, 1):
                sel = self.parity == p
                if not np.any(sel):
                    continue
                Rm = self.radial_values(self.s, p, ds)
                A[:, :, sel, :] = np.einsum("jq,km->jkmq", Rm, T[:, sel])
            A = A.reshape(self.size, self.size)
            A.setflags(write=False)
            cache[key] = A
        return cache[key]

    @cached_property
    def _values_lu(self):
        return sla.lu_factor(self.matrix())

    def boundary_rows(self):
        """Flat node indices on the circle ``s = 1``."""
        return np.arange(self.shape[1])


class DiskField:
    """Scalar field on the unit disk in the coordinates of a :class:`DiskBasis`.

    ``dmap`` optionally records the domain map that carries the computational
    disk onto a physical domain; ``None`` means the unit disk itself.
    """

    def __init__(self, basis, coeffs, dmap=None, info=None):
        coeffs = np.asarray(coeffs, dtype=float).reshape(basis.n_funcs, basis.n_rho)
        self.basis = basis
        self.coeffs = coeffs
        self.dmap = dmap
        self.info = {} if info is None else info

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, basis, dmap=None):
        return cls(basis, np.zeros(basis.size), dmap)

    @classmethod
    def from_values(cls, basis, values, dmap=None):
        v = np.asarray(values, dtype=float).reshape(basis.size)
        c = sla.lu_solve(basis._values_lu, v)
        return cls(basis, c, dmap)

    @classmethod
    def from_function(cls, basis, func, dmap=None):
        """Interpolate ``func(s, theta)`` at the collocation nodes."""
        S, T = basis.node_grid
        return cls.from_values(basis, func(S, T), dmap)

    @classmethod
    def from_modes(cls, basis, radial, dmap=None):
        """Build from ``{(n, kind): chebyshev coefficients in s}``.

        ``kind`` is 0 for ``cos`` and 1 for ``sin``; coefficients use the full
        Chebyshev degree and must respect the parity of ``n``.
        """
        C = np.zeros((basis.n_funcs, basis.n_rho))
        for (n, kind), coef in radial.items():
            m = np.flatnonzero((basis.modes == n) & (basis.kinds == kind))
            if m.size == 0:
                if np.any(np.abs(coef) > 0) and not (basis.even and kind == 1):
                    raise ValueError(f"mode {(n, kind)} not representable in {basis}")
                continue
            coef = np.asarray(coef, dtype=float)
            q = basis.radial_degrees(n % 2)
            wrong = np.delete(coef, q[q < coef.size])
            if np.any(np.abs(wrong) > 1e-14 * max(1.0, np.max(np.abs(coef)))):
                raise ValueError(f"radial parity of mode {n} violated")
            if coef.size > basis.degree + 1 and np.any(np.abs(coef[basis.degree + 1:]) > 0):
                raise ValueError(f"radial degree of mode {n} exceeds the basis")
            C[m[0], :] = np.pad(coef, (0, basis.degree + 1))[q]
        return cls(basis, C.ravel(), dmap)

    # -- nodal views --------------------------------------------------------
    @property
    def flat(self):
        return self.coeffs.ravel()

    def nodal(self, ds=0, dt=0):
        return (self.basis.matrix(ds, dt) @ self.flat).reshape(self.basis.shape)

    @property
    def values(self):
        return self.nodal()

    def mode(self, n):
        """Complex radial Chebyshev coefficients of the ``exp(i n t)`` amplitude.

        Returned in full-degree layout (zeros at the wrong parity).
        """
        b = self.basis
        out = np.zeros(b.degree + 1, dtype=complex)
        q = b.radial_degrees(abs(n) % 2)
        for kind, factor in ((0, 1.0), (1, -1j)):
            m = np.flatnonzero((b.modes == abs(n)) & (b.kinds == kind))
            if m.size:
                scale = 1.0 if n == 0 else 0.5
                out[q] += scale * factor * self.coeffs[m[0]]
        return np.conj(out) if n < 0 else out

    def mode_profile(self, n, s):
        """Evaluate the complex radial profile of mode ``n`` at radii ``s``."""
        return cheb.chebval(np.asarray(s, dtype=float), self.mode(n))

    def trace(self):
        """Boundary values ``f(1, t)`` as a Fourier series."""
        # T_q(1) = 1 for every q
        edge = self.coeffs.sum(axis=1)
        b = self.basis
        a = np.zeros(b.n_theta + 1)
        bb = np.zeros(b.n_theta + 1)
        a[b.modes[b.kinds == 0]] = edge[b.kinds == 0]
        bb[b.modes[b.kinds == 1]] = edge[b.kinds == 1]
        return FourierSeries.from_cos_sin(a, bb, even=b.even)

    # -- evaluation at arbitrary points -------------------------------------
    def _full_radial(self):
        b = self.basis
        C = np.zeros((b.n_funcs, b.degree + 1))
        for p in (0, 1):
            sel = b.parity == p
            C[np.ix_(sel, b.radial_degrees(p))] = self.coeffs[sel]
        return C

    def evaluate(self, s, t, derivs=((0, 0),)):
        """Evaluate the expansion (and derivatives) at points ``(s, t)``.

        Parameters
        ----------
        s, t : array_like
            Computational radius and angle, broadcast together.
        derivs : sequence of (ds, dt)
            Derivative orders to return; ``ds`` up to 2.

        Returns
        -------
        list of ndarray, one per entry of ``derivs``.
        """
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        shape = s.shape
        s, t = s.ravel(), t.ravel()
        C = self._full_radial().T
        radial = {d: (cheb.chebder(C, d) if d else C) for d in {ds for ds, _ in derivs}}
        out = [np.empty(s.size) for _ in derivs]
        for lo in range(0, s.size, _EVAL_CHUNK):
            sl = slice(lo, lo + _EVAL_CHUNK)
            rv = {d: cheb.chebval(s[sl], c).T for d, c in radial.items()}
            trig = {}
            for i, (ds, dt) in enumerate(derivs):
                if dt not in trig:
                    trig[dt] = self.basis.trig_values(t[sl], dt)
                out[i][sl] = np.sum(rv[ds] * trig[dt], axis=1)
        return [o.reshape(shape) for o in out]

    def __call__(self, s, t):
        return self.evaluate(s, t)[0]

    # -- algebra ------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, DiskField) or other.basis != self.basis:
            raise ValueError("fields must share a basis")

    def __add__(self, other):
        self._check(other)
        return DiskField(self.basis, self.flat + other.flat, self.dmap)

    def __sub__(self, other):
        self._check(other)
        return DiskField(self.basis, self.flat - other.flat, self.dmap)

    def __neg__(self):
        return DiskField(self.basis, -self.flat, self.dmap)

    def __mul__(self, scalar):
        return DiskField(self.basis, scalar * self.flat, self.dmap)

    __rmul__ = __mul__

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def to_basis(self, basis):
        """Re-express on another basis by interpolation at its nodes."""
        if basis == self.basis:
            return self
        S, T = basis.node_grid
        return DiskField.from_values(basis, self(S, T), self.dmap)

    def to_full(self):
        """Exact embedding of a cosine-only field into the full basis."""
        if not self.basis.even:
            return self
        full = self.basis.with_even(False)
        C = np.zeros((full.n_funcs, full.n_rho))
        C[: self.basis.n_funcs] = self.coeffs
        dmap = None
        if self.dmap is not None:
            from .mapping import DomainMap
            dmap = DomainMap(self.dmap.B, self.dmap.eps, full)
        return DiskField(full, C, dmap, dict(self.info))

    def laplacian(self):
        """Flat-disk Laplacian at the nodes."""
        S, _ = self.basis.node_grid
        return self.nodal(2, 0) + self.nodal(1, 0) / S + self.nodal(0, 2) / S**2

    def __repr__(self):
        return f"DiskField({self.basis!r}, mapped={self.dmap is not None})"
