import numpy as np
import pytest

from hjaf.filtering import (Diagnostics, EpsVariant, EvolutionError,
                            FilterState, SolverConfig, af_evolve, af_step,
                            epsilon_n, filter_F)
from hjaf.grids import BoundaryCondition, Grid2D, GridField
from hjaf.hamiltonians import transport_hamiltonian
from hjaf.highorder import hc_step
from hjaf.monotone import (CflViolation, MonotoneKind, MonotoneScheme,
                           h_llf, monotone_step)
from hjaf.problems import make_test

from oracles import scalar_switching_integrand

PER = BoundaryCondition.PERIODIC
NEU = BoundaryCondition.NEUMANN_ZERO
LLF = MonotoneScheme(MonotoneKind.LOCAL_LAX_FRIEDRICHS)


class TestFilterFunction:
    def test_identity_inside(self):
        assert filter_F(0.3) == 0.3

    def test_boundary_inclusive(self):
        assert filter_F(-1.0) == -1.0
        assert filter_F(1.0) == 1.0

    def test_zero_outside(self):
        assert filter_F(1.5) == 0.0
        assert filter_F(-7.0) == 0.0

    def test_array_and_bound(self):
        rho = np.linspace(-3, 3, 101)
        out = filter_F(rho)
        assert (np.abs(out) <= 1.0).all()
        assert filter_F(0.0) == 0.0


class TestFilterState:
    def test_validation(self):
        mask = np.ones((3, 3), dtype=bool)
        with pytest.raises(ValueError):
            FilterState(epsilon_n=-1.0, region_mask=mask)
        with pytest.raises(ValueError):
            FilterState(epsilon_n=0.0, region_mask=mask, K=0.5)
        FilterState(epsilon_n=0.0, region_mask=mask, K=0.6)


class TestSwitchingScale:
    def test_constant_field_zero(self):
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        f = GridField(g, np.full((10, 10), 3.0), NEU)
        mask = np.ones((10, 10), dtype=bool)
        eps = epsilon_n(f, transport_hamiltonian(), LLF, 0.02, mask)
        assert eps == 0.0

    def test_empty_region_zero(self):
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        f = GridField(g, np.arange(100.0).reshape(10, 10), PER)
        eps = epsilon_n(f, transport_hamiltonian(), LLF, 0.02,
                        np.zeros((10, 10), dtype=bool))
        assert eps == 0.0

    def test_matches_independent_scalar_transcription(self):
        # parabola data on the transport hamiltonian with the local
        # Lax-Friedrichs monotone scheme, checked node by node
        g = Grid2D(-1.0, -1.0, 0.1, 0.1, 15, 15)
        X, Y = g.meshes()
        f = GridField(g, 0.5 * X ** 2, NEU)
        H = transport_hamiltonian()
        dt = 0.02
        K = 1.0
        mask = np.ones((15, 15), dtype=bool)
        got = epsilon_n(f, H, LLF, dt, mask, K)

        def h_mono(x, y, pm, pp, qm, qp):
            return float(h_llf(H, x, y, np.float64(pm), np.float64(pp),
                               np.float64(qm), np.float64(qp)))

        expected = max(scalar_switching_integrand(f, H, h_mono, dt, K, i, j)
                       for i in range(15) for j in range(15))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_random_fields_match_scalar_oracle(self):
        rng = np.random.default_rng(31)
        g = Grid2D(0.0, 0.0, 0.2, 0.15, 8, 8)
        H = transport_hamiltonian()
        for _ in range(5):
            f = GridField(g, rng.normal(size=(8, 8)), PER)
            mask = rng.uniform(size=(8, 8)) > 0.4
            if not mask.any():
                continue
            got = epsilon_n(f, H, LLF, 0.01, mask, 1.3)

            def h_mono(x, y, pm, pp, qm, qp):
                return float(h_llf(H, x, y, np.float64(pm), np.float64(pp),
                                   np.float64(qm), np.float64(qp)))

            vals = [scalar_switching_integrand(f, H, h_mono, 0.01, 1.3, i, j)
                    for i in range(8) for j in range(8) if mask[i, j]]
            assert got == pytest.approx(max(vals), rel=1e-12)

    def test_invariant_under_constant_shift(self):
        rng = np.random.default_rng(32)
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        u = rng.normal(size=(10, 10))
        mask = np.ones((10, 10), dtype=bool)
        H = transport_hamiltonian()
        a = epsilon_n(GridField(g, u, PER), H, LLF, 0.02, mask)
        b = epsilon_n(GridField(g, u + 9.0, PER), H, LLF, 0.02, mask)
        assert b == pytest.approx(a, rel=1e-10)

    def test_secant_variant_requires_space_independence(self):
        from hjaf.hamiltonians import rotation_hamiltonian
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        f = GridField(g, np.zeros((10, 10)), NEU)
        with pytest.raises(ValueError):
            epsilon_n(f, rotation_hamiltonian(2.5), LLF, 0.001,
                      np.ones((10, 10), dtype=bool),
                      variant=EpsVariant.HAMILTONIAN)

    def test_secant_variant_zero_on_constants(self):
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        f = GridField(g, np.full((10, 10), 1.0), NEU)
        eps = epsilon_n(f, transport_hamiltonian(), LLF, 0.02,
                        np.ones((10, 10), dtype=bool),
                        variant=EpsVariant.HAMILTONIAN)
        assert eps == 0.0


class TestBlendedStep:
    def _setup(self, seed=33):
        rng = np.random.default_rng(seed)
        g = Grid2D(0, 0, 0.1, 0.1, 12, 12)
        f = GridField(g, rng.normal(size=(12, 12)), PER)
        return f, transport_hamiltonian(), 0.02

    def test_all_untrusted_is_monotone_bitwise(self):
        f, H, dt = self._setup()
        phi = np.zeros((12, 12), dtype=bool)
        out = af_step(f, LLF, hc_step, H, dt, phi, eps=10.0)
        ref = monotone_step(f, LLF, H, dt)
        assert np.array_equal(out.values, ref.values)

    def test_identical_schemes_give_monotone_bitwise(self):
        f, H, dt = self._setup()
        phi = np.ones((12, 12), dtype=bool)

        def fake_high(fld, Hh, dtt):
            return monotone_step(fld, LLF, Hh, dtt)

        out = af_step(f, LLF, fake_high, H, dt, phi, eps=1.0)
        ref = monotone_step(f, LLF, H, dt)
        assert np.array_equal(out.values, ref.values)

    def test_huge_eps_gives_high_order_bitwise(self):
        f, H, dt = self._setup()
        phi = np.ones((12, 12), dtype=bool)
        out = af_step(f, LLF, hc_step, H, dt, phi, eps=1e12)
        ref = hc_step(f, H, dt)
        assert np.array_equal(out.values, ref.values)

    def test_zero_eps_gives_monotone_bitwise(self):
        f, H, dt = self._setup()
        phi = np.ones((12, 12), dtype=bool)
        out = af_step(f, LLF, hc_step, H, dt, phi, eps=0.0)
        ref = monotone_step(f, LLF, H, dt)
        assert np.array_equal(out.values, ref.values)

    def test_sandwich_bound(self):
        f, H, dt = self._setup(seed=34)
        phi = np.ones((12, 12), dtype=bool)
        for eps in (1e-4, 1e-2, 1.0):
            out = af_step(f, LLF, hc_step, H, dt, phi, eps=eps)
            ref = monotone_step(f, LLF, H, dt)
            assert (np.abs(out.values - ref.values) <= eps * dt + 1e-15).all()

    def test_every_node_is_one_of_the_two_schemes(self):
        f, H, dt = self._setup(seed=35)
        phi = np.ones((12, 12), dtype=bool)
        eps = 0.05
        out = af_step(f, LLF, hc_step, H, dt, phi, eps=eps)
        um = monotone_step(f, LLF, H, dt).values
        ua = hc_step(f, H, dt).values
        matches = (out.values == um) | (out.values == ua)
        assert matches.all()


class TestEvolve:
    def _config(self, **kw):
        return SolverConfig(hamiltonian=transport_hamiltonian(),
                            monotone=LLF, **kw)

    def test_rejects_nonpositive_time(self):
        prob = make_test("5")
        with pytest.raises(ValueError):
            af_evolve(prob.initial_field(0), self._config(), 0.0, 10)

    def test_one_step_equals_af_step(self):
        prob = make_test("5")
        u0 = prob.initial_field(0)
        dt = 0.01
        cfg = SolverConfig(hamiltonian=prob.hamiltonian, monotone=prob.monotone)
        u1, diag = af_evolve(u0, cfg, dt, 1)
        from hjaf.indicators2d import Indicator2DConfig, smoothness_2d
        sm = smoothness_2d(u0, Indicator2DConfig())
        eps = epsilon_n(u0, prob.hamiltonian, prob.monotone, dt, sm.phi == 1, 1.0)
        ref = af_step(u0, prob.monotone, hc_step, prob.hamiltonian, dt,
                      sm.phi == 1, eps)
        assert np.array_equal(u1.values, ref.values)
        assert len(diag.rows) == 1
        assert diag.rows[0][2] == eps

    def test_cfl_rejected_before_stepping(self):
        g = Grid2D(0, 0, 0.1, 0.1, 10, 10)
        f = GridField(g, np.zeros((10, 10)), NEU)
        with pytest.raises(CflViolation):
            af_evolve(f, self._config(), 1.0, 2)  # dt/dx = 5

    def test_nonfinite_aborts_with_step_number(self):
        # the bare fourth-order scheme on a kinked profile blows up
        g = Grid2D(-1, -1, 0.05, 0.05, 41, 41)
        X, Y = g.meshes()
        f = GridField(g, np.abs(X) + np.abs(Y), NEU)
        cfg = self._config(mode="raw", highorder="rkc4")
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(EvolutionError, match="step"):
                af_evolve(f, cfg, 50.0, 500)

    def test_diagnostics_csv(self):
        import io
        d = Diagnostics(rows=[(1, 0.1, 0.5, 3), (2, 0.2, 0.25, 0)])
        buf = io.StringIO()
        d.write_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "step,t,epsilon_n,phi_zero_count"
        assert len(lines) == 3
        step, t, eps, nz = lines[1].split(",")
        assert (int(step), float(t), float(eps), int(nz)) == (1, 0.1, 0.5, 3)

    def test_switching_scale_drops_after_kink_forms(self):
        # convex-hamiltonian run up to kink formation: the scale grows
        # while the profile steepens, then collapses once the steep nodes
        # are excluded from the trusted region
        prob = make_test("8")
        cfg = SolverConfig(hamiltonian=prob.hamiltonian,
                           monotone=prob.monotone, mode="af",
                           highorder="rkc4")
        _, diag = af_evolve(prob.initial_field(1), cfg, prob.T_final,
                            prob.n_steps(1))
        eps = np.array([r[2] for r in diag.rows])
        flagged = np.array([r[3] for r in diag.rows])
        quarter = len(eps) // 4
        assert (flagged[:quarter] == 0).all()       # smooth at first
        assert flagged[-quarter:].mean() > 50       # kink detected later
        assert eps.argmax() < len(eps) - quarter    # peak before the end
        assert eps[-1] < 0.5 * eps.max()            # and then it drops

    def test_fixed_mode_needs_eps(self):
        with pytest.raises(ValueError):
            self._config(mode="fixed")

    def test_k_must_exceed_half(self):
        with pytest.raises(ValueError):
            self._config(K=0.5)
