"""Epsilon sweeps that fit convergence orders of the asymptotic expansions.

Claims
------
CL1  Dirichlet solution vs. its two-term expansion (order 2).
CL2  Shape derivative vs. its two-term expansion (order 3).
CL3  Boundary normal derivative of the shape derivative (order 3).
CL4  Neumann defect at ``B = 0`` minus ``kappa`` (order 2).
CL5  Boundary defect ``sup|(1 + eps B)^2 - 1| / eps`` at the solved shape (order 1).
CL6  Physical constant ``eps^2 c`` vs. ``eps^2 * 4 A0 A1 / R`` (order 3).
CL7  Stream function vs. ``A0 [(r - R)^2 + z^2 - eps^2]`` (order 3).
CL8  Relative deviation of ``c1, c2`` from ``8 pi eps A0 A1`` and ``2 pi eps R`` (order 1).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import default_basis, shape_derivative, solve_dirichlet
from .errors import GSODError
from .fourier import FourierSeries
from .profiles import fixture_a, fixture_b, make_constants
from .shape import functional_F, solve_shape
from .spectral import dn_map_disk, op_T, op_Tprime, poisson_disk, poisson_domain

log = logging.getLogger(__name__)

FAST_EPS = (0.04, 0.02, 0.01)
THOROUGH_EPS = (0.04, 0.02, 0.01, 0.005, 0.0025)
SLOPE_BAND = 0.3

EXPECTED = {"CL1": 2.0, "CL2": 3.0, "CL3": 3.0, "CL4": 2.0,
            "CL5": 1.0, "CL6": 3.0, "CL7": 3.0, "CL8": 1.0}
CLAIMS = tuple(EXPECTED)

FIXTURES = {"A": (fixture_a, 2.0), "B": (fixture_b, 1.0)}


@dataclass
class SweepReport:
    claim: str
    eps: list
    errors: list
    slope: float
    expected: float
    verdict: str
    band: float = SLOPE_BAND
    fixture: str = "A"
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"claim": self.claim, "eps": list(self.eps), "errors": list(self.errors),
                "slope": self.slope, "expected": self.expected, "verdict": self.verdict}


def fit_order(eps, errors):
    """Least-squares slope of ``log(error)`` against ``log(eps)``."""
    x = np.log(np.asarray(eps, float))
    y = np.log(np.asarray(errors, float))
    return float(np.polyfit(x, y, 1)[0])


def check_eps_list(eps_list):
    eps = [float(e) for e in eps_list]
    if len(eps) < 3:
        raise ValueError("need ≥3 epsilons")
    if any(e <= 0 for e in eps):
        raise ValueError("epsilons must be positive")
    if max(eps) < 4 * min(eps):
        raise ValueError("epsilons must span a factor of at least 4")
    return eps


def verdict_for(eps, errors, expected, band=SLOPE_BAND):
    """``pass`` iff the slope clears ``expected - band`` and errors fall with eps."""
    order = np.argsort(eps)[::-1]
    e = np.asarray(errors, float)[order]
    if not np.all(np.isfinite(e)) or np.any(e <= 0):
        return float("nan"), "inconclusive"
    slope = fit_order(np.asarray(eps)[order], e)
    monotone = bool(np.all(np.diff(e) < 0))
    return slope, "pass" if slope >= expected - band and monotone else "fail"


class Sweep:
    """Cache of solves shared between claims for one fixture."""

    def __init__(self, fixture="A", basis=None, profile=None, R=None):
        if profile is None:
            if fixture not in FIXTURES:
                raise ValueError(f"unknown fixture {fixture!r}")
            make, R = FIXTURES[fixture]
            profile = make()
        self.name = fixture
        self.profile = profile
        self.R = float(R)
        self.basis = default_basis() if basis is None else basis
        self._shape = {}
        self._phi0 = {}

    def consts(self, eps):
        return make_constants(self.profile, self.R, eps)

    def shape(self, eps):
        if eps not in self._shape:
            self._shape[eps] = solve_shape(self.consts(eps), self.profile, self.basis)
        return self._shape[eps]

    def phi0(self, eps):
        if eps not in self._phi0:
            self._phi0[eps] = solve_dirichlet(self.consts(eps), self.profile, None, self.basis)
        return self._phi0[eps]

    # -- per-claim error measures ------------------------------------------
    def dirichlet_defect(self, eps, B=None):
        """Sup over the mapped nodes of ``phi - A0(rho^2-1) - eps[A1(rho^3-rho)cos - 2A0 P B]``."""
        k = self.consts(eps)
        B = FourierSeries.zeros() if B is None else B
        phi = self.phi0(eps) if B.sup_norm() == 0 else solve_dirichlet(k, self.profile, B, self.basis)
        rho = phi.dmap.stretch_nodes[0]
        _, T = phi.basis.node_grid
        PB = poisson_domain(B, B, eps, phi.basis).values
        approx = k.A0 * (rho**2 - 1) + eps * (k.A1 * (rho**3 - rho) * np.cos(T) - 2 * k.A0 * PB)
        return float(np.max(np.abs(phi.values - approx)))

    def _bdot(self):
        return FourierSeries.cos(2)

    def shape_derivative_defect(self, eps):
        k = self.consts(eps)
        Bd = self._bdot()
        Phi = shape_derivative(k, self.profile, Bd, self.phi0(eps))
        b = Phi.basis
        lead = poisson_disk(Bd, b) * (-2 * eps * k.A0)
        second = op_T(Bd, b) * (k.A0 / (2 * k.R)) - poisson_disk(Bd.mul_cos(), b) * (2 * k.A1)
        return float(np.max(np.abs((Phi - lead - second * eps**2).values)))

    def boundary_trace_defect(self, eps):
        k = self.consts(eps)
        Bd = self._bdot()
        Phi = shape_derivative(k, self.profile, Bd, self.phi0(eps))
        b = Phi.basis
        K = b.n_theta_full
        theta = 2 * np.pi * np.arange(K) / K
        dr = Phi.evaluate(np.ones(K), theta, ((1, 0),))[0]
        approx = (dn_map_disk(Bd) * (-2 * eps * k.A0)
                  - (op_Tprime(Bd) * (k.A0 / k.R) + dn_map_disk(Bd.mul_cos()) * k.A1) * (2 * eps**2))
        return float(np.max(np.abs(dr - approx(theta))))

    def neumann_defect(self, eps):
        k = self.consts(eps)
        Fn = functional_F(k, self.profile, None, self.phi0(eps))
        return (Fn - k.kappa).sup_norm()

    def boundary_defect(self, eps):
        st = self.shape(eps)
        K = 8 * (st.B.order + 1)
        r = 1.0 + eps * st.B.values(K)
        return float(np.max(np.abs(r * r - 1.0)) / eps)

    def c_defect(self, eps):
        k = self.consts(eps)
        return abs(eps**2 * self.shape(eps).c_eps_B - eps**2 * k.c_limit)

    def psi_defect(self, eps):
        k = self.consts(eps)
        phi = self.shape(eps).phi
        rho = phi.dmap.stretch_nodes[0]
        return float(eps**2 * np.max(np.abs(phi.values - k.A0 * (rho**2 - 1))))

    def c12_defect(self, eps):
        k = self.consts(eps)
        st = self.shape(eps)
        d1 = abs(st.c1 / (8 * np.pi * eps * k.A0 * k.A1) - 1)
        d2 = abs(st.c2 / (2 * np.pi * eps * k.R) - 1)
        return float(max(d1, d2))

    def error(self, claim, eps):
        if claim == "CL1":
            return max(self.dirichlet_defect(eps), self.dirichlet_defect(eps, FourierSeries.cos(2, 0.3)))
        return {"CL2": self.shape_derivative_defect, "CL3": self.boundary_trace_defect,
                "CL4": self.neumann_defect, "CL5": self.boundary_defect,
                "CL6": self.c_defect, "CL7": self.psi_defect,
                "CL8": self.c12_defect}[claim](eps)


def run_claim(claim_id, fixture="A", eps_list=FAST_EPS, sweep=None):
    """Fit the order of one claim over ``eps_list``.

    Solver failures give verdict ``inconclusive``.
    """
    if claim_id not in EXPECTED:
        raise ValueError(f"unknown claim {claim_id!r}")
    eps = check_eps_list(eps_list)
    sweep = Sweep(fixture) if sweep is None else sweep
    expected = EXPECTED[claim_id]
    try:
        errors = [float(sweep.error(claim_id, e)) for e in eps]
    except GSODError as exc:
        log.error("%s inconclusive: %s", claim_id, exc)
        return SweepReport(claim_id, eps, [], float("nan"), expected, "inconclusive",
                           fixture=sweep.name, detail={"error": str(exc)})
    slope, verdict = verdict_for(eps, errors, expected)
    log.info("%s slope=%.3f expected=%.1f %s", claim_id, slope, expected, verdict)
    return SweepReport(claim_id, eps, errors, slope, expected, verdict, fixture=sweep.name)


def run_all(fixture="A", eps_list=FAST_EPS, claims=CLAIMS, basis=None, profile=None, R=None):
    check_eps_list(eps_list)
    sweep = Sweep(fixture, basis, profile, R)
    return [run_claim(c, fixture, eps_list, sweep) for c in claims]


@dataclass
class Scorecard:
    reports: list
    exit_code: int
    failed: list

    def to_json(self):
        return json.dumps({"claims": [r.to_json() for r in self.reports],
                           "coverage": sorted({r.claim for r in self.reports}),
                           "failed": self.failed, "exit_code": self.exit_code}, indent=2)

    def table(self):
        lines = [f"{'claim':<6} {'fixture':<8} {'slope':>7} {'expected':>9}  verdict"]
        for r in self.reports:
            lines.append(f"{r.claim:<6} {r.fixture:<8} {r.slope:7.3f} {r.expected:9.1f}  {r.verdict}")
        if self.failed:
            lines.append("not passing: " + ", ".join(self.failed))
        return "\n".join(lines)


def scorecard(reports):
    """Summarize reports; exit code 0 if every claim passes, else 2."""
    if not reports:
        raise ValueError("scorecard needs at least one report")
    failed = [f"{r.claim}" if r.fixture == "A" else f"{r.claim}[{r.fixture}]"
              for r in reports if r.verdict != "pass"]
    return Scorecard(list(reports), 0 if not failed else 2, failed)
