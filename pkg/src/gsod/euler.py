"""Physical fields of the axisymmetric flow and their verification.

With ``psi = eps^2 phi`` in ``r = R + eps x``, ``z = eps y``:

    u = (1/r) [-d_z psi e_r + F(psi) e_phi + d_r psi e_z],
    p = H(psi) - (|grad psi|^2 + F(psi)^2) / (2 r^2)   inside,
    u = 0,  p = H(0) - c/2                              outside,

and ``c = eps^2 c_{eps,B}``.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import GridTooCoarse, NegativeRadicand
from .fourier import FourierSeries
from .grid import DiskField
from .profiles import GENERIC
from .spectral import _full_circle

log = logging.getLogger(__name__)

CSV_COLUMNS = ("r", "z", "inside", "u_r", "u_phi", "u_z", "p",
               "omega_r", "omega_phi", "omega_z", "psi")


@dataclass(frozen=True)
class GridSpec:
    """Uniform ``(r, z)`` grid over the box ``|r - R|, |z| <= eps (1 + margin)``."""

    n_r: int = 129
    n_z: int = 129
    margin: float = 0.25

    def axes(self, consts):
        half = consts.eps * (1.0 + self.margin)
        r = np.linspace(consts.R - half, consts.R + half, self.n_r)
        z = np.linspace(-half, half, self.n_z)
        return r, z


@dataclass
class SolutionBundle:
    """A converged shape with everything needed to evaluate the flow."""

    consts: object
    profile: object
    shape: object
    phi: DiskField

    @property
    def eps(self):
        return self.consts.eps

    @property
    def c_phys(self):
        return self.eps**2 * self.shape.c_eps_B

    @property
    def F0(self):
        return float(self.profile.swirl(0.0, self.consts))

    @property
    def outside_pressure(self):
        return float(self.profile.H(0.0)) - 0.5 * self.c_phys

    @property
    def B(self):
        return self.shape.B

    # -- geometry -----------------------------------------------------------
    def boundary_radius(self, t):
        return 1.0 + self.eps * self.B(t)

    def to_local(self, r, z):
        """``(rho, theta)`` of physical points in the rescaled frame."""
        x = (np.asarray(r, float) - self.consts.R) / self.eps
        y = np.asarray(z, float) / self.eps
        return np.hypot(x, y), np.arctan2(y, x)

    def inside(self, r, z):
        rho, t = self.to_local(r, z)
        return rho <= self.boundary_radius(t)

    def boundary_curve(self, theta):
        rb = self.boundary_radius(theta)
        return (self.consts.R + self.eps * rb * np.cos(theta), self.eps * rb * np.sin(theta))

    # -- pointwise evaluation -----------------------------------------------
    def swirl_checked(self, psi):
        """``F(psi)``, raising if the radicand (or ``F`` itself) is not positive."""
        k, prof = self.consts, self.profile
        if prof.family == GENERIC:
            rad = prof.swirl_sq(psi, k)
            if np.any(rad <= 0):
                raise NegativeRadicand(f"eps^2 F_R + Ftilde(psi) reaches {np.min(rad):.3e}")
            return np.sqrt(rad)
        F = prof.swirl(psi, k)
        if np.any(F <= 0):
            raise NegativeRadicand(f"F(psi) reaches {np.min(F):.3e}")
        return F

    def stream(self, r, z):
        """``psi, d_r psi, d_z psi`` at physical points inside the domain."""
        rho, t = self.to_local(r, z)
        dmap = self.phi.dmap
        s = dmap.inverse(rho, t)
        f, fx, fy = dmap.grad_at(self.phi, s, t)
        e = self.eps
        return e * e * f, e * fx, e * fy

    def fields(self, r, z, with_vorticity=True):
        """All flow fields at physical points; zero-extended outside."""
        r = np.asarray(r, float)
        z = np.asarray(z, float)
        r, z = np.broadcast_arrays(r, z)
        ins = self.inside(r, z)
        out = {k: np.zeros(r.shape) for k in CSV_COLUMNS if k not in ("r", "z", "inside")}
        out["p"][:] = self.outside_pressure
        if np.any(ins):
            ri = r[ins]
            psi, pr, pz = self.stream(ri, z[ins])
            vals = self._inside_fields(ri, psi, pr, pz, with_vorticity)
            for k, v in vals.items():
                out[k][ins] = v
        out["inside"] = ins
        out["r"], out["z"] = r, z
        return out

    def _inside_fields(self, r, psi, pr, pz, with_vorticity=True):
        prof, k = self.profile, self.consts
        F = self.swirl_checked(psi)
        vals = {"psi": psi, "u_r": -pz / r, "u_phi": F / r, "u_z": pr / r,
                "p": prof.H(psi) - (pr * pr + pz * pz + F * F) / (2 * r * r)}
        if with_vorticity:
            dF = prof.dswirl(psi, k)
            vals["omega_r"] = -dF * pz / r
            vals["omega_z"] = dF * pr / r
            vals["omega_phi"] = -r * prof.dH(psi) + prof.swirl_sq(psi, k, 1) / (2 * r)
        return vals

    # -- node-based spectral quantities -------------------------------------
    def node_derivatives(self):
        """``r, psi`` and first/second derivatives of ``psi`` at the nodes."""
        phi = self.phi.to_full()
        dmap, basis = phi.dmap, phi.basis
        Dx, Dy = dmap.dx_matrix(), dmap.dy_matrix()
        fx = Dx @ phi.flat
        fy = Dy @ phi.flat
        cx = DiskField.from_values(basis, fx).flat
        cy = DiskField.from_values(basis, fy).flat
        fxx, fxy, fyy = Dx @ cx, Dy @ cx, Dy @ cy
        e = self.eps
        x = dmap.xy_nodes[0].ravel()
        return {"r": self.consts.R + e * x, "psi": e * e * phi.values.ravel(),
                "pr": e * fx, "pz": e * fy, "prr": fxx, "prz": fxy, "pzz": fyy}

    def euler_terms(self):
        """``(u.grad)u`` and ``grad p`` (cylindrical components) at the nodes."""
        d = self.node_derivatives()
        prof, k = self.profile, self.consts
        r, psi, pr, pz = d["r"], d["psi"], d["pr"], d["pz"]
        prr, prz, pzz = d["prr"], d["prz"], d["pzz"]
        F = self.swirl_checked(psi)
        dF = prof.dswirl(psi, k)
        ur, uz, uf = -pz / r, pr / r, F / r
        ur_r, ur_z = -prz / r + pz / r**2, -pzz / r
        uz_r, uz_z = prr / r - pr / r**2, prz / r
        uf_r, uf_z = dF * pr / r - F / r**2, dF * pz / r
        adv = np.stack([ur * ur_r + uz * ur_z - uf * uf / r,
                        ur * uf_r + uz * uf_z + ur * uf / r,
                        ur * uz_r + uz * uz_z])
        q = pr * pr + pz * pz + F * F
        dH = prof.dH(psi)
        p_r = dH * pr - (pr * prr + pz * prz + F * dF * pr) / r**2 + q / r**3
        p_z = dH * pz - (pr * prz + pz * pzz + F * dF * pz) / r**2
        grad_p = np.stack([p_r, np.zeros_like(p_r), p_z])
        return {"u": np.stack([ur, uf, uz]), "adv": adv, "grad_p": grad_p}

    def euler_residual(self):
        """``max|u.grad u + grad p| / max|u.grad u|`` over the nodes."""
        t = self.euler_terms()
        res = np.max(np.linalg.norm(t["adv"] + t["grad_p"], axis=0))
        scale = np.max(np.linalg.norm(t["adv"], axis=0))
        return float(res / scale) if scale else 0.0

    def boundary_data(self):
        """Boundary ``theta``, ``r`` and ``|grad psi|^2`` on the full angular grid."""
        phi = self.phi
        fx, fy = phi.dmap.grad_nodes(phi)
        g = _full_circle(phi.basis, fx[0] ** 2 + fy[0] ** 2) * self.eps**2
        K = g.size
        theta = 2 * np.pi * np.arange(K) / K
        r = self.boundary_curve(theta)[0]
        return theta, r, g

    def neumann_quantity(self):
        """``[(d_nu psi)^2 + F(0)^2] / r^2`` at the boundary nodes."""
        _, r, g = self.boundary_data()
        return (g + self.F0**2) / r**2

    def pressure_jump(self):
        """Sup of the inside boundary trace of ``p`` minus the outside pressure."""
        _, r, g = self.boundary_data()
        p = float(self.profile.H(0.0)) - (g + self.F0**2) / (2 * r * r)
        return float(np.max(np.abs(p - self.outside_pressure)))

    def boundary_tangency(self, n=256):
        """``max|nu.u| / max|u|`` on the boundary curve."""
        B = self.B
        t = 2 * np.pi * np.arange(n) / n
        rb = self.boundary_radius(t)
        drb = self.eps * _derivative(B)(t)
        tx = drb * np.cos(t) - rb * np.sin(t)
        ty = drb * np.sin(t) + rb * np.cos(t)
        nrm = np.hypot(tx, ty)
        nu_r, nu_z = ty / nrm, -tx / nrm
        dmap = self.phi.dmap
        f, fx, fy = dmap.grad_at(self.phi, np.ones(n), t)
        r = self.boundary_curve(t)[0]
        e = self.eps
        ur, uz = -e * fy / r, e * fx / r
        normal = np.abs(nu_r * ur + nu_z * uz)
        umax = self.max_speed()
        return float(np.max(normal) / umax) if umax else 0.0

    def max_speed(self):
        t = self.euler_terms()
        return float(np.max(np.linalg.norm(t["u"], axis=0)))


def _derivative(f):
    """``f'`` for a FourierSeries."""
    return FourierSeries(1j * np.arange(f.order + 1) * f.coeffs)


@dataclass
class AxiField:
    """Samples of the zero-extended flow on an ``(r, z)`` grid (index ``[i_r, i_z]``)."""

    r: np.ndarray
    z: np.ndarray
    data: dict
    outside_pressure: float
    eps: float = 0.0

    def __getitem__(self, key):
        return self.data[key]

    @property
    def inside(self):
        return self.data["inside"]

    @property
    def h(self):
        return (self.r[1] - self.r[0], self.z[1] - self.z[0])

    def to_csv(self, path=None):
        """CSV text (and file if ``path``) with shortest round-trip floats."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        cols = [self.data[c].ravel() for c in CSV_COLUMNS]
        for row in zip(*cols):
            w.writerow([int(v) if isinstance(v, (bool, np.bool_)) else repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def read_csv(cls, path):
        """Column arrays (flat) from a CSV written by :meth:`to_csv`."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        head, body = rows[0], rows[1:]
        out = {}
        for j, name in enumerate(head):
            vals = [row[j] for row in body]
            out[name] = (np.array([v == "1" for v in vals]) if name == "inside"
                         else np.array([float(v) for v in vals]))
        return out


def assemble(state, consts, profile, grid_spec=None, phi=None, with_vorticity=True):
    """Bundle a converged shape and sample the flow on a grid.

    Returns
    -------
    (SolutionBundle, AxiField)

    Raises
    ------
    NegativeRadicand
        If ``eps^2 F_R + Ftilde(psi) <= 0`` somewhere in the domain.
    """
    grid_spec = GridSpec() if grid_spec is None else grid_spec
    if consts.eps == 0:
        r = np.array([consts.R])
        z = np.array([0.0])
        data = {k: np.zeros((1, 1)) for k in CSV_COLUMNS}
        data["r"][:] = consts.R
        data["inside"] = np.zeros((1, 1), bool)
        data["p"][:] = float(profile.H(0.0))
        return None, AxiField(r, z, data, float(profile.H(0.0)), 0.0)
    bundle = SolutionBundle(consts, profile, state, state.phi if phi is None else phi)
    # validates the swirl over the whole domain, nodes included
    bundle.swirl_checked(bundle.node_derivatives()["psi"])
    r, z = grid_spec.axes(consts)
    R2, Z2 = np.meshgrid(r, z, indexing="ij")
    data = bundle.fields(R2, Z2, with_vorticity)
    return bundle, AxiField(r, z, data, bundle.outside_pressure, consts.eps)


def vorticity(bundle, field=None):
    """Vorticity components ``(omega_r, omega_phi, omega_z)`` on a grid."""
    if field is None:
        field = assemble(bundle.shape, bundle.consts, bundle.profile)[1]
    return field["omega_r"], field["omega_phi"], field["omega_z"]


def curl_fd_errors(bundle, steps):
    """Max deviation of the vorticity from a centred-difference curl of ``u``.

    Every step size is compared on the same points: the lattice of spacing
    ``max(steps)`` restricted to points whose coarsest stencil lies inside.
    Comparing on fixed points keeps the measured order free of the
    boundary-approach effect of ever finer grids.
    """
    k = bundle.consts
    H = max(steps)
    half = k.eps * (1.0 + k.eps * bundle.B.sup_norm())
    n = int(np.ceil(half / H))
    off = H * np.arange(-n, n + 1)
    R2, Z2 = np.meshgrid(k.R + off, off, indexing="ij")
    ok = bundle.inside(R2, Z2)
    for dr, dz in ((H, 0), (-H, 0), (0, H), (0, -H)):
        ok &= bundle.inside(R2 + dr, Z2 + dz)
    r, z = R2[ok], Z2[ok]
    f0 = bundle.fields(r, z)
    errors = []
    for h in steps:
        fp_r, fm_r = bundle.fields(r + h, z, False), bundle.fields(r - h, z, False)
        fp_z, fm_z = bundle.fields(r, z + h, False), bundle.fields(r, z - h, False)
        w_r = -(fp_z["u_phi"] - fm_z["u_phi"]) / (2 * h)
        w_f = (fp_z["u_r"] - fm_z["u_r"]) / (2 * h) - (fp_r["u_z"] - fm_r["u_z"]) / (2 * h)
        w_z = ((r + h) * fp_r["u_phi"] - (r - h) * fm_r["u_phi"]) / (2 * h * r)
        err = max(np.max(np.abs(w_r - f0["omega_r"])), np.max(np.abs(w_f - f0["omega_phi"])),
                  np.max(np.abs(w_z - f0["omega_z"])))
        errors.append(float(err))
    return errors


def localizability(bundle, field=None):
    """``max|u.grad p| / (max|u| max|grad p|)`` over the inside nodes.

    Zero when the pressure is constant along streamlines, and by convention
    when ``u`` or ``grad p`` vanish.
    """
    if bundle is None:
        return 0.0
    t = bundle.euler_terms()
    return localizability_from(t["u"], t["grad_p"])


def localizability_from(u, grad_p):
    """Localizability ratio for sampled vectors of shape ``(3, ...)``."""
    u = np.asarray(u, float)
    gp = np.asarray(grad_p, float)
    udp = np.abs(np.sum(u * gp, axis=0))
    umax = np.max(np.linalg.norm(u, axis=0))
    pmax = np.max(np.linalg.norm(gp, axis=0))
    if umax == 0 or pmax == 0:
        return 0.0
    return float(np.max(udp) / (umax * pmax))


# -- weak form ------------------------------------------------------------------
def _bump(t):
    """``exp(-1/(1 - t^2))`` on ``|t| < 1`` and its derivative."""
    out = np.zeros_like(t)
    d = np.zeros_like(t)
    m = np.abs(t) < 1
    q = 1.0 - t[m] ** 2
    out[m] = np.exp(-1.0 / q)
    d[m] = out[m] * (-2.0 * t[m] / q**2)
    return out, d


@dataclass
class TestBump:
    """``amp * beta((r - rc)/wr) * beta((z - zc)/wz)`` with its gradient."""

    rc: float
    zc: float
    wr: float
    wz: float
    amp: float = 1.0

    def __call__(self, r, z):
        br, dbr = _bump((r - self.rc) / self.wr)
        bz, dbz = _bump((z - self.zc) / self.wz)
        return (self.amp * br * bz, self.amp * dbr * bz / self.wr, self.amp * br * dbz / self.wz)


@dataclass
class WeakReport:
    momentum: list
    divergence: list
    n_points: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def max_momentum(self):
        return max(self.momentum, default=0.0)

    @property
    def max_divergence(self):
        return max(self.divergence, default=0.0)

    @property
    def max_residual(self):
        return max(self.max_momentum, self.max_divergence)


class _Sampler:
    """Evaluates ``u`` and ``p - p_out`` at quadrature points."""

    def __init__(self, bundle=None, field=None):
        self.bundle = bundle
        self.field = field

    def __call__(self, r, z):
        if self.bundle is not None:
            f = self.bundle.fields(r, z, with_vorticity=False)
            return f["u_r"], f["u_phi"], f["u_z"], f["p"] - self.bundle.outside_pressure, f["inside"]
        # synthetic sampled field: nearest grid value (constant fields only need this)
        fd = self.field
        i = np.clip(np.searchsorted(fd.r, r), 0, fd.r.size - 1)
        j = np.clip(np.searchsorted(fd.z, z), 0, fd.z.size - 1)
        g = lambda k: fd[k][i, j]
        return g("u_r"), g("u_phi"), g("u_z"), g("p") - fd.outside_pressure, fd.inside[i, j]


def quadrature_points(bundle, r_edges, z_edges, depth=4):
    """Midpoint rule on the cell grid, splitting cut cells ``2 x 2`` up to ``depth`` times.

    Returns points ``(r, z)`` and weights (cell areas) covering the inside of
    the domain; cells wholly outside are dropped.
    """
    rc = 0.5 * (r_edges[1:] + r_edges[:-1])
    zc = 0.5 * (z_edges[1:] + z_edges[:-1])
    hr, hz = r_edges[1] - r_edges[0], z_edges[1] - z_edges[0]
    R2, Z2 = np.meshgrid(rc, zc, indexing="ij")
    pts_r, pts_z, wts = [], [], []
    cr, cz = R2.ravel(), Z2.ravel()
    for level in range(depth + 1):
        corners = [bundle.inside(cr + sr * hr / 2, cz + sz * hz / 2)
                   for sr in (-1, 1) for sz in (-1, 1)]
        mid = bundle.inside(cr, cz)
        all_in = mid & np.logical_and.reduce(corners)
        all_out = ~mid & ~np.logical_or.reduce(corners)
        cut = ~(all_in | all_out)
        keep = all_in if level < depth else mid
        pts_r.append(cr[keep])
        pts_z.append(cz[keep])
        wts.append(np.full(int(keep.sum()), hr * hz))
        if level == depth:
            break
        cr, cz = cr[cut], cz[cut]
        hr, hz = hr / 2, hz / 2
        off = [(sr * hr / 2, sz * hz / 2) for sr in (-1, 1) for sz in (-1, 1)]
        cr = np.concatenate([cr + a for a, _ in off])
        cz = np.concatenate([cz + b for _, b in off])
    return np.concatenate(pts_r), np.concatenate(pts_z), np.concatenate(wts)


def random_tests(rng, box, n):
    """``n`` random (vector, scalar) test-field specifications inside ``box``."""
    r0, r1, z0, z1 = box
    Lr, Lz = r1 - r0, z1 - z0
    tests = []
    for _ in range(n):
        comps = []
        for _ in range(4):
            wr = rng.uniform(0.25, 0.5) * Lr
            wz = rng.uniform(0.25, 0.5) * Lz
            rc = rng.uniform(r0 + wr, r1 - wr)
            zc = rng.uniform(z0 + wz, z1 - wz)
            comps.append(TestBump(rc, zc, wr, wz, rng.uniform(-1, 1)))
        tests.append(comps)
    return tests


def verify_weak(field, n_tests=20, seed=0, bundle=None, n_cells=512, depth=4):
    """Weak-form residuals of the zero-extended flow against random test fields.

    For axisymmetric test fields ``w = (w_r, w_phi, w_z)`` and scalars ``q``
    the identities are

        int [(u x u) : grad w + (p - p_out) div w] dx = 0,   int u . grad q dx = 0,

    with ``dx = 2 pi r dr dz``.  Each residual is normalized by the integral of
    the absolute value of its integrand (``0/0`` counts as ``0``).

    Raises
    ------
    GridTooCoarse
        If the domain or the test functions span fewer than 8 cells.
    """
    r_edges = np.linspace(field.r[0], field.r[-1], n_cells + 1)
    z_edges = np.linspace(field.z[0], field.z[-1], n_cells + 1)
    hr, hz = r_edges[1] - r_edges[0], z_edges[1] - z_edges[0]
    rng = np.random.default_rng(seed)
    box = (field.r[0], field.r[-1], field.z[0], field.z[-1])
    tests = random_tests(rng, box, n_tests)
    min_w = min(min(b.wr / hr, b.wz / hz) for comps in tests for b in comps)
    if min_w < 8:
        raise GridTooCoarse(f"test functions span only {min_w:.1f} cells")
    if bundle is None:
        if np.any(field.inside):
            raise ValueError("a bundle is needed for fields with nonempty support")
        return WeakReport([0.0] * n_tests, [0.0] * n_tests, 0)
    if 2 * bundle.eps < 8 * max(hr, hz):
        raise GridTooCoarse("the domain spans fewer than 8 cells")
    r, z, w = quadrature_points(bundle, r_edges, z_edges, depth)
    ur, uf, uz, dp, _ = _Sampler(bundle)(r, z)
    w = 2 * np.pi * r * w
    mom, div = [], []
    for wr_b, wf_b, wz_b, q_b in tests:
        wr, wr_r, wr_z = wr_b(r, z)
        wf, wf_r, wf_z = wf_b(r, z)
        wz, wz_r, wz_z = wz_b(r, z)
        uu = (ur * ur * wr_r - ur * uf * wf / r + ur * uz * wr_z
              + uf * ur * wf_r + uf * uf * wr / r + uf * uz * wf_z
              + uz * ur * wz_r + uz * uz * wz_z)
        integrand = uu + dp * (wr_r + wr / r + wz_z)
        mom.append(_normalized(integrand, w))
        _, q_r, q_z = q_b(r, z)
        div.append(_normalized(ur * q_r + uz * q_z, w))
    return WeakReport(mom, div, int(r.size))


def _normalized(f, w):
    num = abs(float(np.sum(f * w)))
    den = float(np.sum(np.abs(f) * w))
    return num / den if den else 0.0


# -- 3-D export -----------------------------------------------------------------
def vtk_text(bundle, field, n=32):
    """Legacy-VTK structured points of the zero-extended 3-D flow.

    The box is the cube around the cross-section at azimuth zero, spanning the
    ``(r, z)`` extent of ``field`` in ``x`` and ``z`` and the same width in
    ``y``.  The ``(r, z)`` samples are rotated about the axis and sampled
    bilinearly; points outside the sampled box get ``u = 0`` and the outside
    pressure.
    """
    k = bundle.consts
    xs = np.linspace(float(field.r[0]), float(field.r[-1]), n)
    half = 0.5 * float(field.r[-1] - field.r[0])
    ys = np.linspace(-half, half, n)
    zs = np.linspace(float(field.z[0]), float(field.z[-1]), n)
    Z, Y, X = np.meshgrid(zs, ys, xs, indexing="ij")
    # x varies fastest, as VTK expects
    X, Y, Z = X.ravel(), Y.ravel(), Z.ravel()
    r = np.hypot(X, Y)
    cphi, sphi = X / r, Y / r
    inbox = (r >= field.r[0]) & (r <= field.r[-1]) & (Z >= field.z[0]) & (Z <= field.z[-1])
    pts = np.column_stack([np.clip(r, field.r[0], field.r[-1]), np.clip(Z, field.z[0], field.z[-1])])

    def sample(name, fill):
        f = RegularGridInterpolator((field.r, field.z), np.asarray(field[name], float), method="linear")
        out = f(pts)
        out[~inbox] = fill
        return out

    ur, uf, uz = sample("u_r", 0.0), sample("u_phi", 0.0), sample("u_z", 0.0)
    p = sample("p", field.outside_pressure)
    psi = sample("psi", 0.0)
    ux = ur * cphi - uf * sphi
    uy = ur * sphi + uf * cphi
    h = [float(a[1] - a[0]) for a in (xs, ys, zs)]
    lines = ["# vtk DataFile Version 3.0",
             f"zero-extended axisymmetric flow R={float(k.R)!r} eps={float(k.eps)!r}",
             "ASCII", "DATASET STRUCTURED_POINTS",
             f"DIMENSIONS {n} {n} {n}",
             f"ORIGIN {float(xs[0])!r} {float(ys[0])!r} {float(zs[0])!r}",
             f"SPACING {h[0]!r} {h[1]!r} {h[2]!r}",
             f"POINT_DATA {X.size}",
             "SCALARS p double 1", "LOOKUP_TABLE default"]
    lines += [repr(v) for v in p.tolist()]
    lines += ["SCALARS psi double 1", "LOOKUP_TABLE default"]
    lines += [repr(v) for v in psi.tolist()]
    lines.append("VECTORS u double")
    lines += [f"{a!r} {b!r} {c!r}" for a, b, c in zip(ux.tolist(), uy.tolist(), uz.tolist())]
    return "\n".join(lines) + "\n"


def write_vtk(bundle, field, path, n=32):
    text = vtk_text(bundle, field, n)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path
