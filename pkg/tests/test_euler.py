import numpy as np
import pytest

from gsod import GridTooCoarse, NegativeRadicand, make_constants
from gsod.euler import (AxiField, GridSpec, assemble, curl_fd_errors, localizability,
                        localizability_from, verify_weak, vorticity)
from gsod.harness import fit_order



class TestAssemble:
    def test_streamline_identity(self, solved_a):
        _, _, bundle, field = solved_a
        ins = field.inside
        r, z = field.r[:, None] * np.ones_like(field.z), np.ones_like(field.r)[:, None] * field.z
        psi, pr, pz = bundle.stream(r[ins], z[ins])
        dot = field["u_r"][ins] * pr + field["u_z"][ins] * pz
        scale = np.max(np.abs(field["u_r"][ins] * pr))
        assert np.max(np.abs(dot)) <= 1e-14 * scale + 1e-300

    def test_swirl_identity(self, solved_a):
        k, _, bundle, field = solved_a
        ins = field.inside
        R2 = np.broadcast_to(field.r[:, None], ins.shape)
        F = bundle.profile.swirl(field["psi"][ins], k)
        assert np.allclose(field["u_phi"][ins] * R2[ins], F, rtol=1e-14, atol=0)

    def test_zero_extension(self, solved_a):
        _, _, bundle, field = solved_a
        out = ~field.inside
        assert out.any() and field.inside.any()
        for c in ("u_r", "u_phi", "u_z", "omega_r", "omega_phi", "omega_z", "psi"):
            assert np.all(field[c][out] == 0)
        assert np.all(field["p"][out] == bundle.outside_pressure)

    def test_mask_follows_boundary(self, solved_a):
        _, _, bundle, _ = solved_a
        t = np.linspace(0, 2 * np.pi, 50, endpoint=False)
        r, z = bundle.boundary_curve(t)
        x, y = r - bundle.consts.R, z
        assert np.all(bundle.inside(bundle.consts.R + 0.999 * x, 0.999 * y))
        assert not np.any(bundle.inside(bundle.consts.R + 1.001 * x, 1.001 * y))

    def test_psi_quadratic(self, sweep_a):
        eps = (0.04, 0.02, 0.01)
        errs = [sweep_a.psi_defect(e) for e in eps]
        assert fit_order(eps, errs) >= 2.7

    def test_tangency(self, solved_a, solved_b):
        for _, _, bundle, _ in (solved_a, solved_b):
            assert bundle.boundary_tangency() <= 1e-9

    def test_eps_zero(self, prof_a):
        k = make_constants(prof_a, 2.0, 0.0)
        bundle, field = assemble(None, k, prof_a)
        assert bundle is None
        for c in ("u_r", "u_phi", "u_z", "omega_r", "omega_phi", "omega_z", "psi"):
            assert np.all(field[c] == 0)
        assert not field.inside.any()
        assert localizability(bundle) == 0

    def test_negative_radicand(self, solved_a):
        _, _, bundle, _ = solved_a
        with pytest.raises(NegativeRadicand):
            bundle.swirl_checked(np.array([1.0]))

    def test_swirl_positive(self, solved_a, solved_b):
        for _, _, bundle, _ in (solved_a, solved_b):
            assert np.min(bundle.swirl_checked(bundle.node_derivatives()["psi"])) > 0

    def test_csv_round_trip(self, solved_a, tmp_path):
        _, _, _, field = solved_a
        small = assemble(solved_a[1], solved_a[0], solved_a[2].profile, GridSpec(17, 9))[1]
        path = tmp_path / "f.csv"
        small.to_csv(path)
        back = AxiField.read_csv(path)
        for c in back:
            assert np.array_equal(back[c], np.asarray(small[c]).ravel())


class TestIdentities:
    def test_euler_residual(self, solved_a, solved_b):
        for _, _, bundle, _ in (solved_a, solved_b):
            assert bundle.euler_residual() <= 1e-6

    def test_pressure_jump(self, solved_a):
        _, _, bundle, _ = solved_a
        assert bundle.pressure_jump() <= 10 * 1e-9

    def test_neumann_constant(self, solved_a, solved_b):
        for _, _, bundle, _ in (solved_a, solved_b):
            q = bundle.neumann_quantity()
            assert (q.max() - q.min()) / abs(q.mean()) <= 1e-9
            assert q.mean() == pytest.approx(bundle.c_phys, rel=1e-8)


class TestVorticity:
    def test_centre_value(self, solved_a):
        k, _, bundle, field = solved_a
        i = np.argmin(np.abs(field.r - k.R))
        j = np.argmin(np.abs(field.z))
        w = vorticity(bundle, field)[1][i, j]
        assert w == pytest.approx(-2.5, abs=10 * k.eps)

    def test_curl_order(self, solved_a):
        k, _, bundle, _ = solved_a
        hs = [2.0**-6 * k.eps, 2.0**-7 * k.eps]
        errs = curl_fd_errors(bundle, hs)
        assert fit_order(hs, errs) == pytest.approx(2.0, abs=0.2)


class TestLocalizability:
    def test_constant_pressure(self, rng):
        u = rng.standard_normal((3, 50))
        assert localizability_from(u, np.zeros((3, 50))) == 0

    def test_zero_velocity(self, rng):
        assert localizability_from(np.zeros((3, 50)), rng.standard_normal((3, 50))) == 0

    @pytest.mark.xfail(strict=True, reason="the ratio is 0.084*eps, i.e. 8.4e-4 at eps = 0.01; "
                                           "see test_fixture_a_scales_with_eps")
    def test_fixture_a_above_threshold(self, solved_a):
        assert localizability(solved_a[2]) > 1e-3

    def test_fixture_a_not_localizable(self, solved_a):
        assert localizability(solved_a[2]) > 1e-4

    def test_fixture_a_scales_with_eps(self, sweep_a):
        eps = (0.04, 0.02, 0.01)
        vals = []
        for e in eps:
            k = sweep_a.consts(e)
            bundle, _ = assemble(sweep_a.shape(e), k, sweep_a.profile, GridSpec(3, 3))
            vals.append(localizability(bundle))
        assert fit_order(eps, vals) == pytest.approx(1.0, abs=0.05)


class TestWeak:
    def test_zero_field(self, prof_a):
        k = make_constants(prof_a, 2.0, 0.0)
        _, field = assemble(None, k, prof_a)
        field.r = np.linspace(1.9, 2.1, 3)
        field.z = np.linspace(-0.1, 0.1, 3)
        rep = verify_weak(field, n_cells=256)
        assert rep.max_momentum == 0 and rep.max_divergence == 0

    def test_fixture_a_moderate_grid(self, solved_a):
        _, _, bundle, field = solved_a
        rep = verify_weak(field, n_tests=10, bundle=bundle, n_cells=256)
        assert rep.max_momentum <= 1e-3
        assert rep.max_divergence <= 1e-4

    def test_deterministic(self, solved_a):
        _, _, bundle, field = solved_a
        a = verify_weak(field, n_tests=3, seed=7, bundle=bundle, n_cells=128)
        b = verify_weak(field, n_tests=3, seed=7, bundle=bundle, n_cells=128)
        assert a.momentum == b.momentum and a.divergence == b.divergence

    def test_too_coarse(self, solved_a):
        _, _, bundle, field = solved_a
        with pytest.raises(GridTooCoarse):
            verify_weak(field, bundle=bundle, n_cells=16)
