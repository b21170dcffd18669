"""Exact Fourier-side disk operators and the mapped harmonic extension."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import chebyshev as cheb

from .fourier import FourierSeries
from .grid import DiskBasis, DiskField
from .mapping import DomainMap


def _monomial(k):
    """Chebyshev coefficients of ``s**k``."""
    e = np.zeros(k + 1)
    e[k] = 1.0
    return cheb.poly2cheb(e)


def _default_basis(*series, n_rho=32):
    order = max(32, *(f.order + 1 for f in series))
    even = all(f.even for f in series)
    return DiskBasis.get(order, n_rho, even)


def _radial_sum(terms, basis):
    """Assemble ``sum coef * (chebyshev poly in s) * trig`` into a DiskField.

    ``terms`` maps ``(n, kind)`` to full-degree radial Chebyshev coefficients.
    """
    merged = {}
    for key, coef in terms:
        coef = np.asarray(coef, dtype=float)
        if key in merged:
            a, b = merged[key], coef
            n = max(a.size, b.size)
            merged[key] = np.pad(a, (0, n - a.size)) + np.pad(b, (0, n - b.size))
        else:
            merged[key] = coef
    return DiskField.from_modes(basis, merged)


def poisson_disk(f, basis=None):
    """Harmonic extension ``sum f_n rho^|n| e^{in theta}`` into the unit disk."""
    basis = _default_basis(f) if basis is None else basis
    a, b = f.cos_sin()
    terms = []
    for n in range(min(f.order, basis.n_theta) + 1):
        mono = _monomial(n)
        if a[n]:
            terms.append(((n, 0), a[n] * mono))
        if b[n]:
            terms.append(((n, 1), b[n] * mono))
    return _radial_sum(terms, basis)


def dn_map_disk(f):
    """Dirichlet-to-Neumann map of the unit disk: multiply mode ``n`` by ``|n|``."""
    n = np.arange(f.order + 1)
    return FourierSeries(f.coeffs * n, even=f.even)


def op_T(f, basis=None):
    """``sum_{n != 0} f_n (rho^{|n|-1} - rho^{|n|+1}) e^{i(n - sgn n) theta}``."""
    basis = _default_basis(f) if basis is None else basis
    a, b = f.cos_sin()
    terms = []
    for n in range(1, min(f.order, basis.n_theta + 1) + 1):
        radial = np.pad(_monomial(n - 1), (0, 2)) - _monomial(n + 1)
        if a[n]:
            terms.append(((n - 1, 0), a[n] * radial))
        if b[n] and n > 1:
            terms.append(((n - 1, 1), b[n] * radial))
    return _radial_sum(terms, basis)


def op_Tprime(f):
    """``(1/2) sum_{n != 0} f_n e^{i(n - sgn n) theta}`` (boundary companion of T)."""
    a, b = f.cos_sin()
    N = max(f.order - 1, 0)
    a_out = np.zeros(N + 1)
    b_out = np.zeros(N + 1)
    for n in range(1, f.order + 1):
        a_out[n - 1] += 0.5 * a[n]
        if n > 1:
            b_out[n - 1] += 0.5 * b[n]
    return FourierSeries.from_cos_sin(a_out, b_out, even=f.even)


def project_X(f):
    """Even part of ``f`` with the ``cos(theta)`` mode removed."""
    c = f.coeffs.real.copy()
    if c.size > 1:
        c[1] = 0.0
    return FourierSeries(c, in_x=True)


def poisson_domain(f, B, eps, basis=None):
    """Harmonic extension of ``f`` into ``{rho < 1 + eps*B(theta)}``.

    The result is the pullback to the unit disk: a DiskField whose ``dmap``
    records the domain map, so ``field(s, t)`` is the harmonic function at the
    physical point ``(S(s, t), t)``.
    """
    if basis is None:
        basis = _default_basis(f, B)
    dmap = DomainMap(B, eps, basis)
    if dmap.is_identity:
        out = poisson_disk(f, basis)
        out.dmap = dmap
        return out
    A = np.array(dmap.laplacian_matrix())
    rhs = np.zeros(basis.size)
    bnd = basis.boundary_rows()
    A[bnd] = basis.matrix()[bnd]
    rhs[bnd] = f(basis.theta)
    c = sla.solve(A, rhs)
    return DiskField(basis, c, dmap)


def dn_map_domain(f, B, eps, basis=None):
    """``d/drho`` of the harmonic extension of ``f`` at ``rho = 1 + eps*B``."""
    v = poisson_domain(f, B, eps, basis)
    S_s = v.dmap.stretch(np.ones_like(v.basis.theta), v.basis.theta)[1]
    ds = v.nodal(1, 0)[0]
    return FourierSeries.from_values(_full_circle(v.basis, ds / S_s), even=v.basis.even)


def _full_circle(basis, edge):
    """Extend node values on ``theta`` to the full uniform circle grid."""
    if not basis.even:
        return edge
    K = basis.n_theta_full
    full = np.empty(K)
    full[: edge.size] = edge
    full[edge.size:] = edge[1:][::-1]
    return full
