"""Run configuration and the solution file format."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

from .dirichlet import TOL_NEWTON, solve_dirichlet
from .euler import GridSpec
from .fourier import FourierSeries
from .grid import DiskBasis
from .profiles import make_constants, profile_from_spec
from .shape import EPS_MAX, TOL_SHAPE, ShapeState, _functional_F, neumann_data
from .spectral import project_X

FIXTURE_A = {"family": "generic", "H": [0.0, 1.0], "Ftilde": [0.0, -2.0]}
FIXTURE_B = {"family": "degenerate", "H": [0.0, 1.0], "Ftilde": [0.0, 0.0, 1.0]}

SOLUTION_FORMAT = "gsod-solution-1"


class ConfigError(ValueError):
    """Invalid or unreadable configuration or solution file."""


@dataclass
class RunConfig:
    """Everything a command needs; JSON keys match the field names."""

    profile: dict = field(default_factory=lambda: dict(FIXTURE_A))
    R: float = 2.0
    eps: float = 0.01
    eps_list: list = field(default_factory=lambda: [0.04, 0.02, 0.01])
    n_theta: int = 32
    n_rho: int = 32
    tol_newton: float = TOL_NEWTON
    tol_shape: float = TOL_SHAPE
    eps_max: float = EPS_MAX
    grid: dict = field(default_factory=lambda: {"n_r": 129, "n_z": 129, "margin": 0.25})
    vtk: bool = False
    vtk_n: int = 32
    out: str = "out"
    seed: int = 0
    threads: int = 1
    R_list: list = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    # -- checks ---------------------------------------------------------------
    def validate(self):
        try:
            self.R = float(self.R)
            self.eps = float(self.eps)
            self.eps_list = [float(e) for e in self.eps_list]
            self.R_list = [float(r) for r in self.R_list]
            for name in ("tol_newton", "tol_shape", "eps_max"):
                setattr(self, name, float(getattr(self, name)))
            for name in ("n_theta", "n_rho", "vtk_n", "seed", "threads"):
                setattr(self, name, int(getattr(self, name)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed value: {exc}") from exc
        for name in ("tol_newton", "tol_shape", "eps_max"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for e in [self.eps] + self.eps_list:
            if not 0 < e <= self.eps_max:
                raise ConfigError(f"eps = {e} outside (0, {self.eps_max}]")
        if self.n_theta < 4 or self.n_rho < 4:
            raise ConfigError("resolutions must be at least 4")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        self.grid_spec()
        try:
            prof = self.profile_functions()
            for R in [self.R] + self.R_list:
                make_constants(prof, R, self.eps)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad profile specification: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    # -- derived objects ------------------------------------------------------
    def profile_functions(self):
        return profile_from_spec(self.profile)

    def constants(self, eps=None, R=None):
        return make_constants(self.profile_functions(), self.R if R is None else R,
                              self.eps if eps is None else eps)

    def basis(self, even=True):
        return DiskBasis.get(self.n_theta, self.n_rho, even)

    def grid_spec(self):
        try:
            g = GridSpec(**self.grid)
        except TypeError as exc:
            raise ConfigError(f"bad grid specification: {exc}") from exc
        if g.n_r < 3 or g.n_z < 3 or g.margin < 0:
            raise ConfigError("grid needs n_r, n_z >= 3 and margin >= 0")
        return g

    # -- serialization --------------------------------------------------------
    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data, **overrides):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = dict(data)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**merged)

    @classmethod
    def load(cls, path=None, **overrides):
        data = {}
        if path is not None:
            try:
                with open(path) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError("config must be a JSON object")
        return cls.from_dict(data, **overrides)


def parameter_hash(profile, R, eps, n_theta, n_rho):
    key = json.dumps([profile, R, eps, n_theta, n_rho], sort_keys=True)
    return hashlib.sha256(key.encode()).hexdigest()[:12]


# -- solution files ---------------------------------------------------------------
def solution_record(config, consts, state):
    """JSON-ready description of a converged shape."""
    return {
        "format": SOLUTION_FORMAT,
        "profile": config.profile,
        "constants": consts.as_dict(),
        "resolution": {"n_theta": config.n_theta, "n_rho": config.n_rho},
        "B": state.B.to_json_list(),
        "c_eps_B": state.c_eps_B,
        "c": consts.eps**2 * state.c_eps_B,
        "c1": state.c1,
        "c2": state.c2,
        "iterations": state.iter,
        "G_residual": state.residual_norm,
        "converged": state.converged,
    }


def write_solution(path, record):
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")


def load_solution(path):
    """Rebuild ``(config, consts, profile, state)`` from a solution file.

    The Dirichlet problem on the stored shape is re-solved; ``c_eps_B`` is
    recomputed and checked against the stored value.
    """
    try:
        with open(path) as fh:
            rec = json.load(fh)
        if rec.get("format") != SOLUTION_FORMAT:
            raise ConfigError(f"{path} is not a solution file")
        k = rec["constants"]
        config = RunConfig(profile=rec["profile"], R=k["R"], eps=k["eps"],
                           eps_list=[], n_theta=rec["resolution"]["n_theta"],
                           n_rho=rec["resolution"]["n_rho"])
        B = project_X(FourierSeries.from_json_list(rec["B"]))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot read solution {path}: {exc}") from exc
    profile = config.profile_functions()
    consts = config.constants()
    phi = solve_dirichlet(consts, profile, B, config.basis())
    nd = neumann_data(consts, profile, B, phi)
    stored = float(rec["c_eps_B"])
    if abs(nd.c - stored) > 1e-8 * max(1.0, abs(stored)):
        raise ConfigError(f"solution file is inconsistent: c = {nd.c!r} vs stored {stored!r}")
    G = project_X((_functional_F(nd) - consts.kappa) / consts.eps)
    state = ShapeState(B, stored, G, int(rec.get("iterations", 0)), bool(rec.get("converged")),
                       phi, nd.c1, nd.c2)
    return config, consts, profile, state
