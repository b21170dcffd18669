"""Real 2*pi-periodic functions stored as truncated Fourier series."""

from __future__ import annotations

import json

import numpy as np

_FLAG_TOL = 1e-12


class FourierSeries:
    """A real trigonometric polynomial ``f(t) = sum_{|n|<=N} f_n exp(i n t)``.

    Only the non-negative modes are stored; ``f_{-n} = conj(f_n)`` is implied,
    so reality holds by construction.

    Parameters
    ----------
    coeffs : array_like
        Complex amplitudes ``f_0, ..., f_N``. ``f_0`` must be real.
    even : bool
        Assert that the function is even in ``t``; every coefficient must be
        real (checked).
    in_x : bool
        Assert membership of the constraint space: even and orthogonal to
        ``cos t`` (``f_1 = 0``, checked).
    """

    __slots__ = ("coeffs", "even", "in_x")

    def __init__(self, coeffs, even=False, in_x=False):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-D sequence")
        scale = max(1.0, float(np.max(np.abs(c))))
        if abs(c[0].imag) > _FLAG_TOL * scale:
            raise ValueError("mode 0 of a real function must be real")
        c[0] = c[0].real
        if in_x:
            even = True
        if even and np.max(np.abs(c.imag)) > _FLAG_TOL * scale:
            raise ValueError("even flag set but coefficients are not real")
        if in_x and c.size > 1 and abs(c[1]) > _FLAG_TOL * scale:
            raise ValueError("X flag set but the cos(t) component is nonzero")
        if even:
            c = c.real.astype(complex)
        c.setflags(write=False)
        self.coeffs = c
        self.even = bool(even)
        self.in_x = bool(in_x)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, order=0, **flags):
        return cls(np.zeros(order + 1), **flags)

    @classmethod
    def constant(cls, value, order=0):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c, even=True)

    @classmethod
    def from_cos_sin(cls, a, b=None, **flags):
        """Build ``sum a_n cos(n t) + sum b_n sin(n t)`` (``b_0`` is ignored)."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.zeros_like(a) if b is None else np.atleast_1d(np.asarray(b, dtype=float))
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
        c = 0.5 * (a - 1j * b)
        c[0] = a[0]
        return cls(c, **flags)

    @classmethod
    def cos(cls, n, amplitude=1.0):
        a = np.zeros(n + 1)
        a[n] = amplitude
        return cls.from_cos_sin(a, even=True)

    @classmethod
    def sin(cls, n, amplitude=1.0):
        b = np.zeros(n + 1)
        b[n] = amplitude
        return cls.from_cos_sin(np.zeros(n + 1), b)

    @classmethod
    def from_values(cls, values, order=None, **flags):
        """Interpolate samples taken at ``t_k = 2*pi*k/K``.

        For even ``K`` the Nyquist mode is discarded.
        """
        values = np.asarray(values, dtype=float)
        K = values.size
        c = np.fft.rfft(values) / K
        nmax = (K - 1) // 2
        c = c[: nmax + 1]
        if order is not None:
            c = np.pad(c, (0, max(0, order + 1 - c.size)))[: order + 1]
        if flags.get("even") or flags.get("in_x"):
            c = c.real
        if flags.get("in_x") and c.size > 1:
            c = c.copy()
            c[1] = 0.0
        return cls(c, **flags)

    @classmethod
    def from_function(cls, func, order, **flags):
        K = 2 * order + 1
        t = 2 * np.pi * np.arange(K) / K
        return cls.from_values(func(t), order=order, **flags)

    # -- basic views --------------------------------------------------------
    @property
    def order(self):
        return self.coeffs.size - 1

    def mode(self, n):
        """Complex amplitude ``f_n`` for any integer ``n`` (zero if truncated)."""
        k = abs(n)
        if k > self.order:
            return 0j
        return self.coeffs[k] if n >= 0 else np.conj(self.coeffs[k])

    def cos_sin(self):
        """Return ``(a, b)`` with ``f = sum a_n cos(n t) + b_n sin(n t)``."""
        a = 2.0 * self.coeffs.real
        b = -2.0 * self.coeffs.imag
        a[0] = self.coeffs[0].real
        b[0] = 0.0
        return a, b

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        n = np.arange(self.order + 1)
        ph = np.exp(1j * np.multiply.outer(t, n))
        w = np.where(n == 0, 1.0, 2.0)
        return np.real(ph @ (w * self.coeffs))

    def values(self, K=None):
        """Samples on ``t_k = 2*pi*k/K`` (default ``K = 2N + 1``)."""
        K = 2 * self.order + 1 if K is None else K
        return self(2 * np.pi * np.arange(K) / K)

    def sup_norm(self, oversample=4):
        K = max(8, oversample * (2 * self.order + 1))
        return float(np.max(np.abs(self.values(K))))

    def padded(self, order):
        c = np.zeros(order + 1, dtype=complex)
        m = min(order, self.order) + 1
        c[:m] = self.coeffs[:m]
        return FourierSeries(c, even=self.even, in_x=self.in_x)

    def is_even(self, tol=1e-12):
        return bool(np.max(np.abs(self.coeffs.imag)) <= tol * max(1.0, np.max(np.abs(self.coeffs))))

    def is_in_x(self, tol=1e-12):
        return self.is_even(tol) and abs(self.mode(1)) <= tol * max(1.0, np.max(np.abs(self.coeffs)))

    # -- algebra ------------------------------------------------------------
    def _binary(self, other, sign):
        if np.isscalar(other):
            other = FourierSeries.constant(other)
        n = max(self.order, other.order)
        c = self.padded(n).coeffs + sign * other.padded(n).coeffs
        even = self.even and other.even
        return FourierSeries(c, even=even, in_x=even and self.in_x and other.in_x)

    def __add__(self, other):
        return self._binary(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FourierSeries(-self.coeffs, even=self.even, in_x=self.in_x)

    def __mul__(self, other):
        if np.isscalar(other):
            if np.iscomplexobj(other):
                raise TypeError("only real scalars keep the series real")
            return FourierSeries(other * self.coeffs, even=self.even, in_x=self.in_x)
        if isinstance(other, FourierSeries):
            full_a = self._full()
            full_b = other._full()
            prod = np.convolve(full_a, full_b)
            N = self.order + other.order
            return FourierSeries(prod[N:], even=self.even and other.even)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / other)

    def _full(self):
        """Coefficients for n = -N..N."""
        return np.concatenate([np.conj(self.coeffs[:0:-1]), self.coeffs])

    def mul_cos(self):
        """Multiply by ``cos t`` (exact, order grows by one)."""
        full = self._full()
        out = np.zeros(full.size + 2, dtype=complex)
        out[:-2] += 0.5 * full
        out[2:] += 0.5 * full
        N = self.order + 1
        return FourierSeries(out[N:], even=self.even)

    def inner(self, other):
        """``<f, g> = int_0^{2 pi} f g dt``."""
        n = min(self.order, other.order) + 1
        a, b = self.coeffs[:n], other.coeffs[:n]
        return float(2 * np.pi * (a[0].real * b[0].real + 2 * np.sum((a[1:] * np.conj(b[1:])).real)))

    def allclose(self, other, atol=1e-12):
        n = max(self.order, other.order)
        return bool(np.max(np.abs(self.padded(n).coeffs - other.padded(n).coeffs)) <= atol)

    def __repr__(self):
        flags = "".join([", even" if self.even else "", ", X" if self.in_x else ""])
        return f"FourierSeries(order={self.order}{flags})"

    # -- serialization ------------------------------------------------------
    def to_json_list(self):
        """``[[n, re, im], ...]`` for ``n = -N..N``."""
        return [[int(n), float(self.mode(n).real), float(self.mode(n).imag)]
                for n in range(-self.order, self.order + 1)]

    @classmethod
    def from_json_list(cls, triples, **flags):
        modes = {}
        for n, re, im in triples:
            modes[int(n)] = complex(re, im)
        N = max(abs(n) for n in modes)
        c = np.zeros(N + 1, dtype=complex)
        for n in range(N + 1):
            pos, neg = modes.get(n), modes.get(-n)
            if pos is None:
                pos = np.conj(neg) if neg is not None else 0j
            if n and neg is not None and abs(neg - np.conj(pos)) > 1e-14 * max(1.0, abs(pos)):
                raise ValueError(f"mode {n} violates f_(-n) = conj(f_n)")
            c[n] = pos
        return cls(c, **flags)

    def to_json(self):
        return json.dumps(self.to_json_list())

    @classmethod
    def from_json(cls, text, **flags):
        return cls.from_json_list(json.loads(text), **flags)
