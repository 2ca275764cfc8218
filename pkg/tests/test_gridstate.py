import math

import numpy as np
import pytest

from oamur import gridstate as gs
from oamur import operators as ops
from oamur.errors import (
    EmptySuperposition,
    FeatureExceedsGrid,
    GridMismatch,
    OamurError,
    ZeroNorm,
)


class TestGridSpec:
    def test_origin_is_a_sample(self):
        g = gs.GridSpec(64, 32, 4.0)
        assert g.x[32] == 0.0 and g.y[16] == 0.0
        assert g.x[0] == -4.0 and g.dx == pytest.approx(0.125)
        assert g.shape == (32, 64)

    @pytest.mark.parametrize("kw", [dict(nx=15), dict(nx=17), dict(ny=8), dict(half_extent=0.0),
                                    dict(half_extent=-1.0), dict(half_extent=math.inf)])
    def test_rejects_bad_grids(self, kw):
        with pytest.raises(OamurError):
            gs.GridSpec(**kw)

    def test_axes_are_read_only(self):
        with pytest.raises(ValueError):
            gs.GridSpec().x[0] = 1.0


class TestSynthesize:
    def test_normalized(self, shipped_states):
        for st in shipped_states.values():
            assert abs(st.norm() - 1.0) <= 1e-12
            assert st.decay_ok

    def test_isotropic_gaussian_peaks_at_origin(self):
        st = gs.synthesize(gs.RingGauss(0, 0.0, 1.0))
        rho = st.density()
        assert np.unravel_index(rho.argmax(), rho.shape) == (128, 128)
        # radially symmetric: quarter turn leaves the density unchanged
        np.testing.assert_allclose(gs.rotate_quarter(st).density(), rho, atol=1e-15)

    def test_ring_phase_winds_three_times(self):
        w = 1.0
        st = gs.synthesize(gs.RingGauss(3, 5 * w, w))
        g = st.grid
        # walk a sampled circle of radius r0 through the nearest grid points
        phis = np.linspace(-np.pi, np.pi, 720, endpoint=False)
        ix = np.rint(5 * w * np.cos(phis) / g.dx).astype(int) + g.nx // 2
        iy = np.rint(5 * w * np.sin(phis) / g.dy).astype(int) + g.ny // 2
        ph = np.angle(st.amplitudes[iy, ix])
        steps = np.angle(np.exp(1j * np.diff(np.append(ph, ph[0]))))
        assert abs(steps.sum() - 6 * np.pi) <= 1e-3
        # density rotationally invariant
        np.testing.assert_allclose(gs.rotate_quarter(st).density(), st.density(), atol=1e-14)

    def test_two_ring_density_follows_one_plus_cos(self, sup01):
        g = sup01.grid
        rho = sup01.density()
        i0 = g.nx // 2
        ir = int(round(gs.RING_R0 / g.dx))
        at_zero = rho[g.ny // 2, i0 + ir]
        at_pi = rho[g.ny // 2, i0 - ir]
        assert at_zero / at_pi > 1e3
        # closed form on the sampled ring: |1 + e^{i phi}|^2 / 2 times the radial profile
        X, Y = g.mesh()
        r = np.hypot(X, Y)
        on_ring = np.abs(r - gs.RING_R0) < 0.5 * g.dx
        ring = gs.synthesize(gs.RingGauss(0))
        expected = ring.density() * np.abs(1 + np.exp(1j * np.arctan2(Y, X))) ** 2 / 2
        np.testing.assert_allclose(rho[on_ring], expected[on_ring], rtol=1e-10, atol=1e-14)

    def test_feature_exceeds_grid(self):
        with pytest.raises(FeatureExceedsGrid):
            gs.synthesize(gs.RingGauss(1, 5.0, 1.0), gs.GridSpec(64, 64, 9.0))
        # fits the r0 + 5w rule but fails the decay guard
        with pytest.raises(FeatureExceedsGrid):
            gs.synthesize(gs.RingGauss(1, 5.0, 1.0), gs.GridSpec(64, 64, 10.5))

    def test_empty_superposition(self):
        with pytest.raises(EmptySuperposition):
            gs.Superposition(())
        with pytest.raises(EmptySuperposition):
            gs.Superposition(((0, gs.RingGauss(0)), (0.0, gs.RingGauss(1))))

    def test_laguerre_gauss_matches_polar_formula(self):
        from scipy.special import eval_genlaguerre
        mode = gs.LaguerreGauss(2, -3, 1.3)
        st = gs.synthesize(mode)
        X, Y = st.grid.mesh()
        r, phi = np.hypot(X, Y), np.arctan2(Y, X)
        w = 1.3
        ref = ((np.sqrt(2) * r / w) ** 3 * eval_genlaguerre(2, 3, 2 * r ** 2 / w ** 2)
               * np.exp(-r ** 2 / w ** 2) * np.exp(-3j * phi))
        ref = ref / np.sqrt(np.sum(np.abs(ref) ** 2) * st.grid.area)
        np.testing.assert_allclose(st.amplitudes, ref, atol=1e-12)

    def test_deterministic(self):
        m = gs.shipped_modes()["sup_lg_gauss"]
        a, b = gs.synthesize(m), gs.synthesize(m)
        assert a.amplitudes.tobytes() == b.amplitudes.tobytes()

    def test_state_is_immutable(self, sup01):
        with pytest.raises(ValueError):
            sup01.amplitudes[0, 0] = 1.0


class TestNormalize:
    def test_idempotent(self, sup01):
        again = gs.normalize(sup01)
        assert np.max(np.abs(again.amplitudes - sup01.amplitudes)) <= 1e-14

    def test_scale_invariant(self, sup01):
        scaled = sup01.replace(3.0 * sup01.amplitudes)
        np.testing.assert_allclose(gs.normalize(scaled).amplitudes, sup01.amplitudes, atol=1e-14)

    def test_zero_norm(self):
        with pytest.raises(ZeroNorm):
            gs.normalize(gs.GridState(gs.GridSpec(16, 16, 1.0), np.zeros((16, 16))))

    def test_phase_untouched(self, sup01):
        out = gs.normalize(sup01.replace(2j * sup01.amplitudes))
        big = np.abs(sup01.amplitudes) > 1e-3
        np.testing.assert_allclose(np.angle(out.amplitudes[big] / sup01.amplitudes[big]), np.pi / 2, atol=1e-12)


class TestSuperposeAndOverlap:
    def test_single_term(self, sup01):
        out = gs.superpose([sup01], [0.3 - 2j])
        assert abs(abs(gs.overlap(out, sup01)) - 1.0) <= 1e-12

    def test_cancellation(self, sup01):
        with pytest.raises(ZeroNorm):
            gs.superpose([sup01, sup01], [1, -1])

    def test_orthogonal_rings_add_in_quadrature(self, ring_states):
        a, b = ring_states[0], ring_states[1]
        raw = gs.GridState(a.grid, a.amplitudes + b.amplitudes)
        assert abs(raw.norm() - math.sqrt(2.0) * a.norm()) <= 1e-10

    def test_grid_mismatch(self, ring_states):
        other = gs.synthesize(gs.OffsetGauss(), gs.GridSpec(64, 64, 12.0))
        with pytest.raises(GridMismatch):
            gs.superpose([ring_states[0], other], [1, 1])
        with pytest.raises(GridMismatch):
            gs.overlap(ring_states[0], other)
        with pytest.raises(GridMismatch):
            gs.superpose([ring_states[0], gs.GridState(ring_states[0].grid, ring_states[0].amplitudes, 2.0)], [1, 1])

    def test_overlap_self_and_linearity(self, sup01):
        assert abs(gs.overlap(sup01, sup01) - 1.0) <= 1e-12
        assert abs(gs.overlap(sup01, sup01.replace(1j * sup01.amplitudes)) - 1j) <= 1e-12

    def test_overlap_rings_orthogonal(self, ring_states):
        assert abs(gs.overlap(ring_states[0], ring_states[1])) <= 1e-10

    def test_conjugate_symmetric(self, random_sample):
        a, b = random_sample[0], random_sample[1]
        assert abs(gs.overlap(a, b) - np.conj(gs.overlap(b, a))) <= 1e-14


class TestInvariants:
    @pytest.mark.parametrize("name", [n for n in gs.shipped_modes() if n.startswith(("ring", "lg"))])
    def test_quarter_turn_eigenphase(self, shipped_states, name):
        st = shipped_states[name]
        l = gs.shipped_modes()[name].l
        ccw = gs.rotate_quarter(st, 1).amplitudes
        cw = gs.rotate_quarter(st, -1).amplitudes
        assert np.max(np.abs(ccw - np.exp(-1j * l * np.pi / 2) * st.amplitudes)) <= 1e-10
        assert np.max(np.abs(cw - np.exp(1j * l * np.pi / 2) * st.amplitudes)) <= 1e-10

    def test_rotation_direction(self):
        g = gs.GridSpec(16, 16, 8.0)
        a = np.zeros(g.shape)
        a[8, 10] = 1.0  # point at (x, y) = (2, 0)
        out = gs.rotate_quarter(gs.GridState(g, a)).amplitudes
        assert out[10, 8] == 1.0  # moved to (0, 2)

    def test_parseval(self, shipped_states, random_sample):
        for st in list(shipped_states.values()) + random_sample[:5]:
            kx, ky, phi = ops.momentum_space(st)
            dk = (kx[1] - kx[0]) * (ky[1] - ky[0])
            assert abs(np.sum(np.abs(phi) ** 2) * dk - st.norm() ** 2) <= 1e-10

    def test_superposition_sesquilinear(self, random_sample):
        a, b = random_sample[2], random_sample[3]
        g = a.grid
        rng = np.random.default_rng(7)
        for _ in range(3):
            w1, w2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            out = gs.superpose([a, b], [w1, w2])
            for n in (1, 2, 3):
                zn = ops.z_power(g, n)
                M = lambda u, v: np.vdot(u.amplitudes, zn * v.amplitudes) * g.area
                num = (abs(w1) ** 2 * M(a, a) + abs(w2) ** 2 * M(b, b)
                       + np.conj(w1) * w2 * M(a, b) + np.conj(w2) * w1 * M(b, a))
                den = abs(w1) ** 2 + abs(w2) ** 2 + 2 * (np.conj(w1) * w2 * gs.overlap(a, b)).real
                assert abs(ops.position_moment(out, n).z_moment - num / den) <= 1e-12


class TestRandomStates:
    def test_seeded(self):
        a = gs.random_state(3)
        b = gs.random_state(3)
        assert a.amplitudes.tobytes() == b.amplitudes.tobytes()
        assert a.amplitudes.tobytes() != gs.random_state(4).amplitudes.tobytes()

    def test_guards(self, random_sample):
        for st in random_sample:
            assert st.decay_ok
            assert abs(st.norm() - 1) <= 1e-12
