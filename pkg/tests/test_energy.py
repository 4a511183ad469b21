import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanocasimir.energy import (EV_PER_NM_TO_PN, QuadratureConfig, casimir_energy, casimir_force,
                                sharp_limit_energy)
from nanocasimir.errors import BreakdownError, ConvergenceError, DomainError, MaterialKindError
from nanocasimir.materials import (GOLD, PERFECT, POTASSIUM, SAPPHIRE, TIO2, VACUUM, Environment,
                                   Material)
from nanocasimir.spectral import Geometry

AU_PERFECT = Environment(GOLD, PERFECT)


def sharp_oracle(wp, f_c, ratio):
    """Closed form with n0 = 1/3 + 2/3 f x, n1 = 1/3 + 1/3 f x, x = (R/d)^3, at 40 digits."""
    mpmath.mp.dps = 40
    x = mpmath.mpf(ratio) ** -3
    third = mpmath.mpf(1) / 3
    n0 = third + 2 * third * f_c * x
    n1 = third + third * f_c * x
    return mpmath.mpf(wp) / 2 * (mpmath.sqrt(n0) + 2 * mpmath.sqrt(n1) - 3 * mpmath.sqrt(third))


class TestSharpLimit:
    def test_reference_value(self):
        oracle = sharp_oracle(8.55, -1, 2)
        assert float(oracle) == pytest.approx(-0.6494895, abs=1e-7)
        env = Environment(Material.drude(8.55, 1e-3), PERFECT)
        assert sharp_limit_energy(env, Geometry(10, 10)) == pytest.approx(float(oracle), rel=1e-14)

    def test_null(self):
        assert sharp_limit_energy(Environment(GOLD, VACUUM), Geometry(10, 3)) == 0.0

    def test_breakdown(self):
        with pytest.raises(BreakdownError):
            sharp_limit_energy(AU_PERFECT, Geometry(10, 0))

    def test_decays_as_inverse_cube(self):
        ratios = np.geomspace(10, 100, 6)
        u = [abs(sharp_limit_energy(AU_PERFECT, Geometry(10, 10 * (r - 1)))) for r in ratios]
        assert np.all(np.diff(u) < 0)
        assert np.polyfit(np.log(ratios), np.log(u), 1)[0] == pytest.approx(-3, abs=0.01)

    def test_verbatim(self):
        g = Geometry(10, 10)
        assert sharp_limit_energy(AU_PERFECT, g, "verbatim") == pytest.approx(
            8.55 * sharp_limit_energy(AU_PERFECT, g), rel=1e-15)


class TestSingleLineEnergy:
    """Each damped line carries exactly hbar w_s / 2, whatever the damping."""

    @pytest.mark.parametrize("n, gamma", [(1 / 3, 0.0126), (0.25, 0.105), (0.1, 0.5)])
    def test_mpmath_quadrature(self, n, gamma):
        mpmath.mp.dps = 30
        wp = mpmath.mpf(8.55)
        ws = mpmath.sqrt(n) * wp
        width = gamma * wp

        def f(w):
            return w / 2 * (2 / mpmath.pi) * ws * w * width / ((w * w - ws * ws) ** 2 + (w * width) ** 2)

        val = mpmath.quad(f, [0, ws, 2 * ws, mpmath.inf])
        assert float(val) == pytest.approx(float(ws / 2), rel=1e-12)


class TestCasimirEnergy:
    def test_null_coupling_exact(self):
        res = casimir_energy(Environment(GOLD, VACUUM), Geometry(10, 2))
        assert res.energy == 0.0 and res.estimated_error == 0.0 and not res.breakdown

    def test_negative(self):
        assert casimir_energy(AU_PERFECT, Geometry(10, 10)).value < 0

    def test_gold_vs_potassium(self):
        for sub in (SAPPHIRE, TIO2, PERFECT):
            au = casimir_energy(Environment(GOLD, sub), Geometry(10, 10)).value
            k = casimir_energy(Environment(POTASSIUM, sub), Geometry(10, 10)).value
            assert 1.5 <= au / k <= 3.0

    def test_ordered_by_contrast(self):
        g = Geometry(10, 10)
        u = [abs(casimir_energy(Environment(GOLD, s), g).value) for s in (SAPPHIRE, TIO2, PERFECT)]
        assert u[0] < u[1] < u[2]

    @pytest.mark.parametrize("gamma", [1e-3, 0.0126, 0.105, 0.3])
    @pytest.mark.parametrize("sub, ratio", [(PERFECT, 2.0), (SAPPHIRE, 1.2), (TIO2, 6.0)])
    def test_matches_sharp_limit(self, gamma, sub, ratio):
        env = Environment(Material.drude(8.55, gamma), sub)
        g = Geometry(10, 10 * (ratio - 1))
        res = casimir_energy(env, g)
        assert res.value == pytest.approx(sharp_limit_energy(env, g), rel=1e-7)
        assert res.estimated_error < 1e-6 * abs(res.value)

    def test_literal_matrix_against_its_sharp_limit(self):
        env = Environment(GOLD, SAPPHIRE)
        g = Geometry(10, 8)
        res = casimir_energy(env, g, selection_rule=False)
        assert res.value == pytest.approx(sharp_limit_energy(env, g, selection_rule=False), rel=1e-7)
        assert res.value != pytest.approx(casimir_energy(env, g).value, rel=1e-3)

    def test_cutoff_doubling(self):
        env = Environment(POTASSIUM, SAPPHIRE)
        g = Geometry(10, 7)
        quad = QuadratureConfig()
        a = casimir_energy(env, g, quad).value
        b = casimir_energy(env, g, QuadratureConfig(omega_max=100)).value
        assert abs(a - b) < 5 * quad.rel_tol * abs(a)

    def test_tail_is_needed(self):
        env = Environment(POTASSIUM, SAPPHIRE)
        g = Geometry(10, 7)
        raw = casimir_energy(env, g, QuadratureConfig(tail_correction=False)).value
        exact = sharp_limit_energy(env, g)
        assert abs(raw - exact) > 1e-4 * abs(exact)
        assert casimir_energy(env, g).value == pytest.approx(exact, rel=1e-8)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(0.2, 5), st.floats(0.1, 100))
    def test_scale_law(self, ratio, c):
        env = Environment(GOLD, TIO2)
        a = casimir_energy(env, Geometry.from_ratio(10, ratio)).value
        b = casimir_energy(env, Geometry.from_ratio(10 * c, ratio)).value
        assert a == pytest.approx(b, rel=1e-8)

    def test_breakdown_result(self):
        res = casimir_energy(AU_PERFECT, Geometry(10, 0))
        assert res.breakdown and res.energy is None
        assert res.diagnostics["factors"][0] == pytest.approx(-1 / 3)
        with pytest.raises(BreakdownError):
            res.value

    def test_verbatim_units(self):
        g = Geometry(10, 10)
        assert casimir_energy(AU_PERFECT, g, normalization="verbatim").value == pytest.approx(
            8.55 * casimir_energy(AU_PERFECT, g).value, rel=1e-12)

    def test_needs_drude_sphere(self):
        with pytest.raises(MaterialKindError):
            casimir_energy(Environment(TIO2, PERFECT), Geometry(10, 10))

    def test_budget_exhausted(self):
        with pytest.raises(ConvergenceError):
            casimir_energy(AU_PERFECT, Geometry(10, 10), QuadratureConfig(rel_tol=1e-12, max_subdivisions=5))

    @pytest.mark.parametrize("kwargs", [dict(rel_tol=0), dict(rel_tol=0.1), dict(omega_max=5),
                                        dict(max_subdivisions=0)])
    def test_config_validation(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureConfig(**kwargs)


class TestCasimirForce:
    def test_null(self):
        f = casimir_force(Environment(GOLD, VACUUM), Geometry(10, 2))
        assert f.force == 0.0

    @pytest.mark.parametrize("R, z", [(10, 5), (10, 40), (100, 30), (1000, 500)])
    def test_attractive(self, R, z):
        assert casimir_force(Environment(POTASSIUM, PERFECT), Geometry(R, z)).force < 0

    def test_radius_scaling(self):
        env = Environment(POTASSIUM, PERFECT)
        a = casimir_force(env, Geometry.from_ratio(10, 1.0)).force
        b = casimir_force(env, Geometry.from_ratio(100, 1.0)).force
        assert a / b == pytest.approx(10, rel=1e-4)

    @pytest.mark.parametrize("ratio", [0.5, 1.0, 3.0, 5.0])
    def test_methods_agree(self, ratio):
        env = Environment(GOLD, SAPPHIRE)
        g = Geometry.from_ratio(10, ratio)
        fd = casimir_force(env, g, method="fd").force
        an = casimir_force(env, g, method="analytic").force
        assert fd == pytest.approx(an, rel=1e-4)

    def test_sharp_limit_derivative(self):
        # closed-form dU/dd = (wp/2) sum_m g_m dn_m/dd / (2 sqrt(n_m)), dn_m/dd = -3 c_m f R^3 / d^4
        mpmath.mp.dps = 40
        R, d, f, wp = mpmath.mpf(10), mpmath.mpf(17), mpmath.mpf(-0.516), mpmath.mpf(8.55)
        x = (R / d) ** 3
        dU = 0
        for c, g in ((mpmath.mpf(2) / 3, 1), (mpmath.mpf(1) / 3, 2)):
            n = mpmath.mpf(1) / 3 + c * f * x
            dU += wp / 2 * g * (-3 * c * f * R ** 3 / d ** 4) / (2 * mpmath.sqrt(n))
        force = casimir_force(Environment(GOLD, SAPPHIRE), Geometry(10, 7), method="analytic")
        assert force.force == pytest.approx(-float(dU), rel=1e-8)

    def test_piconewtons(self):
        f = casimir_force(AU_PERFECT, Geometry(10, 10))
        assert f.force_pN == pytest.approx(f.force * 160.2177, rel=1e-6)
        assert EV_PER_NM_TO_PN == pytest.approx(160.2177, rel=1e-6)

    def test_one_sided_at_contact(self):
        env = Environment(GOLD, Material.constant(2.0))
        f = casimir_force(env, Geometry(10, 0))
        assert f.diagnostics["one_sided"]
        assert f.force == pytest.approx(casimir_force(env, Geometry(10, 0), method="analytic").force, rel=1e-4)

    def test_one_sided_next_to_breakdown(self):
        # z/R = 0.27 sits just outside the perfect-conductor breakdown region (n0 <= 0 below ~0.26)
        g = Geometry.from_ratio(10, 0.2600001)
        f = casimir_force(AU_PERFECT, g)
        assert f.diagnostics["one_sided"]
        assert f.force < 0

    def test_breakdown(self):
        with pytest.raises(BreakdownError):
            casimir_force(AU_PERFECT, Geometry(10, 1))
        with pytest.raises(BreakdownError):
            casimir_force(AU_PERFECT, Geometry(10, 1), method="analytic")

    def test_three_orders_over_forty_nanometres(self):
        # a weakly contrasting substrate keeps z = 0 out of breakdown
        env = Environment(GOLD, Material.constant(2.0))
        near = casimir_force(env, Geometry(10, 0)).force
        far = casimir_force(env, Geometry(10, 40)).force
        assert 1e2 <= near / far <= 1e4

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            casimir_force(AU_PERFECT, Geometry(10, 10), method="spline")
