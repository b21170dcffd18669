"""Acceptance criteria 1-9, each timed against its runtime budget.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import sys
import time

import numpy as np
import pytest

from gsod import FourierSeries, fixture_a, fixture_b, make_constants
from gsod.dirichlet import default_basis, shape_derivative, solve_dirichlet
from gsod.euler import assemble, curl_fd_errors, verify_weak
from gsod.harness import FAST_EPS, Sweep, fit_order, run_claim
from gsod.mapping import evaluate_physical
from gsod.shape import solve_shape

from oracles import polar_fd_dirichlet

RESULTS = {}


def record(number, title, checks, elapsed, budget):
    checks = dict(checks)
    checks[f"runtime {elapsed:.3g} s < {budget:g} s"] = elapsed < budget
    ok = all(checks.values())
    failed = [name for name, good in checks.items() if not good]
    RESULTS[number] = (ok, title, failed)
    assert ok, f"criterion {number} failed: {failed}"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def overdetermined_checks(profile, R, tag):
    """Checks shared by criteria 4 and 9."""
    k = make_constants(profile, R, 0.01)
    st = solve_shape(k, profile)
    bundle, _ = assemble(st, k, profile)
    q = bundle.neumann_quantity()
    norms = []
    for e in FAST_EPS:
        ke = make_constants(profile, R, e)
        norms.append(st.B.sup_norm() if e == 0.01 else solve_shape(ke, profile).B.sup_norm())
    return {
        f"{tag}: converged in {st.iter} <= 10 iterations": st.converged and st.iter <= 10,
        f"{tag}: |G| = {st.residual_norm:.2e} <= 1e-9": st.residual_norm <= 1e-9,
        f"{tag}: Neumann spread {np.ptp(q) / abs(q.mean()):.1e} <= 1e-8":
            np.ptp(q) / abs(q.mean()) <= 1e-8,
        f"{tag}: |B| slope {fit_order(FAST_EPS, norms):.2f} >= 0.7":
            fit_order(FAST_EPS, norms) >= 0.7,
    }, (k, st, bundle)


def field_checks(bundle, sweep, tag):
    """Checks shared by criteria 6 and 9."""
    k = bundle.consts
    d = bundle.node_derivatives()
    t = bundle.euler_terms()
    u = t["u"]
    stream = np.abs(u[0] * d["pr"] + u[2] * d["pz"])
    scale = np.max(np.abs(u[0] * d["pr"]))
    res = bundle.euler_residual()
    hs = [2.0**-6 * k.eps, 2.0**-7 * k.eps]
    curl = fit_order(hs, curl_fd_errors(bundle, hs))
    psi = run_claim("CL7", sweep.name, FAST_EPS, sweep)
    return {
        f"{tag}: u.grad psi {np.max(stream):.1e} at round-off": np.max(stream) <= 1e-14 * scale,
        f"{tag}: Euler residual {res:.1e} <= 1e-6": res <= 1e-6,
        f"{tag}: curl order {curl:.2f} ~ 2": abs(curl - 2) <= 0.2,
        f"{tag}: psi remainder slope {psi.slope:.2f} >= 2.7": psi.slope >= 2.7,
    }


def test_criterion_1_constants():
    prof = fixture_a()
    k, dt = timed(lambda: make_constants(prof, 2.0, 0.01))
    want = {"A0": 1.25, "A1": 0.65625, "kappa": -0.3125, "FR": 0.3125}
    checks = {f"{n} = {want[n]}": abs(getattr(k, n) - want[n]) <= 1e-12 * abs(want[n])
              for n in want}
    checks["lim c = 105/64"] = abs(k.c_limit - 105 / 64) <= 1e-12 * 105 / 64
    record(1, "constants exactness", checks, dt, 1e-3)


def test_criterion_2_dirichlet_asymptotics():
    def work():
        return run_claim("CL1", "A", FAST_EPS, Sweep("A"))
    rep, dt = timed(work)
    record(2, "Dirichlet asymptotics (CL1)",
           {f"CL1 slope {rep.slope:.3f} in [1.7, 2.3]": 1.7 <= rep.slope <= 2.3}, dt, 10)


def test_criterion_3_shape_derivative():
    def work():
        sw = Sweep("A")
        cl2 = run_claim("CL2", "A", FAST_EPS, sw)
        cl3 = run_claim("CL3", "A", FAST_EPS, sw)
        prof = sw.profile
        k = make_constants(prof, 2.0, 0.02)
        Bd, t = FourierSeries.cos(2), 1e-4
        Phi = shape_derivative(k, prof, Bd)
        plus = solve_dirichlet(k, prof, Bd * t, Phi.basis)
        minus = solve_dirichlet(k, prof, Bd * (-t), Phi.basis)
        S, T = Phi.basis.node_grid
        rho = 0.95 * S
        fd = (evaluate_physical(plus, rho, T)[0] - evaluate_physical(minus, rho, T)[0]) / (2 * t)
        return cl2, cl3, float(np.max(np.abs(fd - Phi(rho, T))))
    (cl2, cl3, fd), dt = timed(work)
    record(3, "shape-derivative oracle (CL2/CL3)", {
        f"CL2 slope {cl2.slope:.3f} >= 2.7": cl2.slope >= 2.7,
        f"CL3 slope {cl3.slope:.3f} >= 2.7": cl3.slope >= 2.7,
        f"finite difference {fd:.1e} <= 1e-6": fd <= 1e-6,
    }, dt, 20)


def test_criterion_4_overdetermined_solve():
    def work():
        ca, _ = overdetermined_checks(fixture_a(), 2.0, "A")
        cb, _ = overdetermined_checks(fixture_b(), 1.0, "B")
        return {**ca, **cb}
    checks, dt = timed(work)
    record(4, "overdetermined solve", checks, dt, 30)


def test_criterion_5_c_expansion():
    def work():
        sw = Sweep("A")
        cl4 = run_claim("CL4", "A", FAST_EPS, sw)
        cl6 = run_claim("CL6", "A", FAST_EPS, sw)
        k = sw.consts(0.01)
        st = sw.shape(0.01)
        r1 = st.c1 / (8 * np.pi * 0.01 * k.A0 * k.A1)
        r2 = st.c2 / (2 * np.pi * 0.01 * k.R)
        return cl4, cl6, r1, r2
    (cl4, cl6, r1, r2), dt = timed(work)
    record(5, "c-constant expansion (CL4/CL6/CL8)", {
        f"CL4 slope {cl4.slope:.3f} >= 1.7": cl4.slope >= 1.7,
        f"CL6 slope {cl6.slope:.3f} >= 2.7": cl6.slope >= 2.7,
        f"c1 ratio {r1:.4f} within 5%": abs(r1 - 1) <= 0.05,
        f"c2 ratio {r2:.4f} within 5%": abs(r2 - 1) <= 0.05,
    }, dt, 20)


def test_criterion_6_field_identities():
    def work():
        sw = Sweep("A")
        k = sw.consts(0.01)
        bundle, _ = assemble(sw.shape(0.01), k, sw.profile)
        return field_checks(bundle, sw, "A")
    checks, dt = timed(work)
    record(6, "field identities", checks, dt, 20)


def test_criterion_7_weak_solution():
    def work():
        prof = fixture_a()
        k = make_constants(prof, 2.0, 0.01)
        bundle, field = assemble(solve_shape(k, prof), k, prof)
        rep = verify_weak(field, n_tests=20, seed=0, bundle=bundle, n_cells=512)
        k0 = make_constants(prof, 2.0, 0.0)
        _, zero = assemble(None, k0, prof)
        zero.r = np.linspace(1.9, 2.1, 3)
        zero.z = np.linspace(-0.1, 0.1, 3)
        rep0 = verify_weak(zero, n_tests=20, seed=0, n_cells=512)
        return rep, rep0
    (rep, rep0), dt = timed(work)
    record(7, "weak-solution certification", {
        f"20 tests, max residual {rep.max_residual:.1e} <= 1e-3":
            len(rep.momentum) == 20 and rep.max_residual <= 1e-3,
        "u = 0 gives exactly 0": rep0.max_residual == 0.0,
    }, dt, 60)


def test_criterion_8_oracle_equivalence():
    def work():
        prof = fixture_a()
        k = make_constants(prof, 2.0, 0.01)
        rho, th, ref = polar_fd_dirichlet(k, prof, 33, 33)
        phi = solve_dirichlet(k, prof, full=True)
        Rg, Tg = np.meshgrid(rho, th, indexing="ij")
        return float(np.max(np.abs(phi(Rg, Tg) - ref)))
    err, dt = timed(work)
    record(8, "oracle equivalence", {f"33x33 FD deviation {err:.1e} <= 1e-4": err <= 1e-4}, dt, 5)


def test_criterion_9_degenerate_family():
    def work():
        prof = fixture_b()
        checks, (k, st, bundle) = overdetermined_checks(prof, 1.0, "B")
        checks.update(field_checks(bundle, Sweep("B"), "B"))
        checks[f"kappa = {k.kappa} = -1/16"] = abs(k.kappa + 1 / 16) <= 1e-15
        checks[f"F_R = {k.FR} = 1/4"] = abs(k.FR - 0.25) <= 1e-15
        checks["b = 0"] = k.b == 0
        F = bundle.swirl_checked(bundle.node_derivatives()["psi"])
        checks[f"min F = {np.min(F):.2e} > 0"] = bool(np.min(F) > 0)
        return checks
    checks, dt = timed(work)
    record(9, "degenerate family", checks, dt, 30)


def summary_lines():
    lines = []
    for n in range(1, 10):
        if n not in RESULTS:
            lines.append(f"criterion {n}: NOT RUN")
            continue
        ok, title, failed = RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += "  [" + "; ".join(failed) + "]"
        lines.append(line)
    return lines


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
