"""Profile functions (Ftilde, H) and the constants derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .errors import InadmissibleR

GENERIC = "generic"
DEGENERATE = "degenerate"
FAMILIES = (GENERIC, DEGENERATE)


@dataclass(frozen=True)
class ProfileFunctions:
    """The pair ``(Ftilde, H)`` with first and second derivatives.

    ``generic`` profiles need ``Ftilde(0) = 0, Ftilde'(0) < 0, H'(0) > 0``;
    ``degenerate`` ones need ``Ftilde(0) = Ftilde'(0) = 0, H'(0) > 0``.
    ``smoothness`` is informational only.
    """

    H: Callable
    dH: Callable
    d2H: Callable
    Ftilde: Callable
    dFtilde: Callable
    d2Ftilde: Callable
    family: str = GENERIC
    smoothness: float = math.inf
    spec: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown profile family {self.family!r}")
        f0 = float(self.Ftilde(0.0))
        df0 = float(self.dFtilde(0.0))
        dh0 = float(self.dH(0.0))
        if abs(f0) > 1e-14:
            raise ValueError(f"Ftilde(0) must vanish, got {f0}")
        if dh0 <= 0:
            raise ValueError(f"H'(0) must be positive, got {dh0}")
        if self.family == GENERIC and df0 >= 0:
            raise ValueError(f"generic family needs Ftilde'(0) < 0, got {df0}")
        if self.family == DEGENERATE and abs(df0) > 1e-14:
            raise ValueError(f"degenerate family needs Ftilde'(0) = 0, got {df0}")

    @classmethod
    def polynomial(cls, H_coeffs, Ftilde_coeffs, family=GENERIC):
        """Profiles from ascending coefficient lists in ``psi``."""
        H = Polynomial(np.asarray(H_coeffs, dtype=float))
        F = Polynomial(np.asarray(Ftilde_coeffs, dtype=float))
        return cls(H, H.deriv(), H.deriv(2), F, F.deriv(), F.deriv(2), family=family,
                   spec={"family": family, "H": list(map(float, H.coef)),
                         "Ftilde": list(map(float, F.coef))})

    # -- the swirl ----------------------------------------------------------
    def swirl_sq(self, psi, consts, d=0):
        """``F(psi)**2`` or its ``d``-th derivative in ``psi`` (``d`` <= 2).

        generic: ``eps^2 F_R + Ftilde``; degenerate: ``(eps F_R + Ftilde)^2``.
        """
        psi = np.asarray(psi, dtype=float)
        if self.family == GENERIC:
            if d == 0:
                return consts.eps**2 * consts.FR + self.Ftilde(psi)
            return self.dFtilde(psi) if d == 1 else self.d2Ftilde(psi)
        g = consts.eps * consts.FR + self.Ftilde(psi)
        if d == 0:
            return g * g
        if d == 1:
            return 2.0 * g * self.dFtilde(psi)
        return 2.0 * (self.dFtilde(psi) ** 2 + g * self.d2Ftilde(psi))

    def swirl(self, psi, consts):
        """``F(psi)``; generic family uses the positive square root."""
        psi = np.asarray(psi, dtype=float)
        if self.family == GENERIC:
            return np.sqrt(self.swirl_sq(psi, consts))
        return consts.eps * consts.FR + self.Ftilde(psi)

    def dswirl(self, psi, consts):
        """``F'(psi)``."""
        psi = np.asarray(psi, dtype=float)
        if self.family == GENERIC:
            return 0.5 * self.dFtilde(psi) / np.sqrt(self.swirl_sq(psi, consts))
        return self.dFtilde(psi)


def linear_H(slope=1.0, offset=0.0):
    return Polynomial([offset, slope])


def linear_Ftilde(slope=-2.0):
    return Polynomial([0.0, slope])


def quadratic_Ftilde(coef=1.0):
    return Polynomial([0.0, 0.0, coef])


BUILTINS = {"linear_H": linear_H, "linear_Ftilde": linear_Ftilde,
            "quadratic_Ftilde": quadratic_Ftilde}


def profile_from_spec(spec):
    """Build profiles from a config mapping.

    ``H`` and ``Ftilde`` are either ascending coefficient lists or
    ``{"name": <builtin>, **params}``.  ``family`` defaults to ``generic``.
    """
    family = spec.get("family", GENERIC)

    def poly(entry):
        if isinstance(entry, dict):
            params = dict(entry)
            name = params.pop("name")
            if name not in BUILTINS:
                raise ValueError(f"unknown builtin profile {name!r}")
            return BUILTINS[name](**params)
        return Polynomial(np.asarray(entry, dtype=float))

    prof = ProfileFunctions.polynomial(poly(spec["H"]).coef, poly(spec["Ftilde"]).coef, family)
    object.__setattr__(prof, "spec", dict(spec))
    return prof


def fixture_a():
    """``H = psi``, ``Ftilde = -2 psi`` (generic family)."""
    return ProfileFunctions.polynomial([0.0, 1.0], [0.0, -2.0], GENERIC)


def fixture_b():
    """``H = psi``, ``Ftilde = psi**2`` (degenerate family)."""
    return ProfileFunctions.polynomial([0.0, 1.0], [0.0, 0.0, 1.0], DEGENERATE)


@dataclass(frozen=True)
class ProblemConstants:
    """Constants of the rescaled problem at major radius ``R`` and size ``eps``."""

    R: float
    eps: float
    a: float
    b: float
    A0: float
    A1: float
    kappa: float
    FR: float
    family: str = GENERIC
    admissible: bool = True

    @property
    def c_limit(self):
        """``lim_{eps -> 0} c_{eps,B} = 4 A0 A1 / R``."""
        return 4.0 * self.A0 * self.A1 / self.R

    def with_eps(self, eps):
        return ProblemConstants(self.R, float(eps), self.a, self.b, self.A0, self.A1,
                                self.kappa, self.FR, self.family, self.admissible)

    def as_dict(self):
        return {k: getattr(self, k) for k in
                ("R", "eps", "a", "b", "A0", "A1", "kappa", "FR", "family", "admissible")}


def make_constants(profile, R, eps):
    """Evaluate ``a, b, A0, A1, kappa, F_R`` for a profile at radius ``R``.

    Raises
    ------
    InadmissibleR
        For the generic family when ``a R^2 - 3 b <= 0``.
    """
    R = float(R)
    if not R > 0:
        raise ValueError("R must be positive")
    a = float(profile.dH(0.0))
    b = 0.0 if profile.family == DEGENERATE else -0.5 * float(profile.dFtilde(0.0))
    A0 = (a * R**2 + b) / 4.0
    A1 = (5.0 * a * R**2 + b) / (16.0 * R)
    kappa = 4.0 * A0 * (A0 - A1 * R)
    if profile.family == GENERIC:
        if a * R**2 - 3.0 * b <= 0:
            raise InadmissibleR(
                f"a*R^2 - 3b = {a * R**2 - 3 * b:.6g} <= 0; need R > {math.sqrt(3 * b / a):.6g}")
        FR = -kappa
    else:
        FR = R**2 * a / 4.0
    return ProblemConstants(R, float(eps), a, b, A0, A1, kappa, FR, profile.family, True)
