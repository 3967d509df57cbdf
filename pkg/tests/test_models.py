import math

import numpy as np
import pytest
import scipy.special

from saskit.models import (
    COMMON_PARAMETERS,
    InvalidRange,
    ModelInfo,
    ParameterOutOfBounds,
    ParameterSpec,
    QGrid,
    Registry,
    UnknownModel,
    UnknownParameter,
    default_qgrid,
    default_registry,
    evaluate,
    generate_dataset,
    list_models,
)
from saskit.models import cylinder, ellipsoid, kernels, sphere


class TestRegistry:
    def test_bundled_models_sorted(self):
        infos = list_models()
        assert [m.name for m in infos] == ["cylinder", "ellipsoid", "lamellar", "sphere"]

    def test_every_model_has_scale_and_background(self):
        for info in list_models():
            names = [p.name for p in info.parameters]
            assert "scale" in names and "background" in names
            assert info.parameter("scale").default == 1.0
            assert info.parameter("background").default == 0.001

    def test_sld_parameters_use_sld_units(self):
        for info in list_models():
            for p in info.parameters:
                if p.name.startswith("sld"):
                    assert p.units == "1e-6/Ang^2"

    def test_register_extension_model(self):
        registry = default_registry()
        info = ModelInfo(
            name="porod_rod", category="shape:extension",
            parameters=COMMON_PARAMETERS + (
                ParameterSpec("length", "Ang", 100.0, 1.0, 1e6, "Rod length"),),
            title="Toy extension model", description="q^-1 decay.",
            equation="I(q) = scale/(q*length) + background",
            validity="toy")
        registry.register(info, lambda q, length: 1.0 / (q * length))
        assert len(registry.list_models()) == 5
        assert "porod_rod" in registry.names()
        got = registry.evaluate("porod_rod", {"background": 0.0}, np.array([0.1]))
        assert got[0] == pytest.approx(1.0 / (0.1 * 100.0))

    def test_unknown_model(self):
        with pytest.raises(UnknownModel):
            evaluate("flexible_cylinder", {}, np.array([0.1]))

    def test_unknown_parameter_rejected(self):
        with pytest.raises(UnknownParameter):
            evaluate("sphere", {"radius_pd": 0.2}, np.array([0.1]))

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ParameterOutOfBounds):
            evaluate("sphere", {"radius": -5.0}, np.array([0.1]))


SPHERE_PARAMS = {"radius": 50.0, "sld": 1.0, "sld_solvent": 6.3,
                 "scale": 1.0, "background": 0.0}


class TestSphere:
    def test_forward_limit(self):
        # [DERIVED] analytic q->0 limit 1e-4*V*drho^2, hand-computed pre-build
        got = evaluate("sphere", SPHERE_PARAMS, np.array([1e-6]))
        assert got[0] == pytest.approx(1470.788961, abs=0.1)

    def test_closed_form_at_x_pi(self):
        # [DERIVED] K(pi) = 3/pi^2 exactly
        got = evaluate("sphere", SPHERE_PARAMS, np.array([math.pi / 50.0]))
        assert got[0] == pytest.approx(1470.788961 * (3.0 / math.pi ** 2) ** 2, rel=1e-9)

    def test_contrast_match_gives_background(self):
        params = dict(SPHERE_PARAMS, sld=6.3, sld_solvent=6.3, background=0.17)
        q = default_qgrid(1e-3, 1.0, 50)
        assert evaluate("sphere", params, q) == pytest.approx(np.full(50, 0.17))

    def test_high_q_envelope(self):
        # |sin x - x cos x| <= sqrt(1 + x^2), so K^2 <= 9 (1+x^2)/x^6
        r = 50.0
        q = np.geomspace(10.5 / r, 100.0 / r, 400)
        x = q * r
        intensity = evaluate("sphere", SPHERE_PARAMS, q)
        volume = 4.0 / 3.0 * math.pi * r ** 3
        envelope = 1e-4 * volume * 5.3 ** 2 * 9.0 * (1.0 + x ** 2) / x ** 6
        assert np.all(intensity <= envelope * (1.0 + 1e-12))


class TestEllipsoid:
    def test_degenerate_matches_sphere(self):
        q = default_qgrid(1e-3, 1.0, 200)
        ell = evaluate("ellipsoid", {"radius_polar": 50.0, "radius_equatorial": 50.0,
                                     "sld": 1.0, "sld_solvent": 6.3, "background": 0.0}, q)
        sph = evaluate("sphere", SPHERE_PARAMS, q)
        assert ell == pytest.approx(sph, rel=1e-6)

    def test_quadrature_convergence(self):
        # 76-pt vs 256-pt reference, all kernel arguments <= 20
        q = np.geomspace(1e-3, 0.4, 60)
        base = ellipsoid.orientation_average(q, 20.0, 50.0, order=76)
        ref = ellipsoid.orientation_average(q, 20.0, 50.0, order=256)
        assert base == pytest.approx(ref, rel=1e-6)


class TestCylinder:
    def test_quadrature_convergence(self):
        q = np.geomspace(1e-3, 1.0, 60)  # qR <= 20 and qL/2 <= 20
        base = cylinder.orientation_average(q, 20.0, 40.0, order=76)
        ref = cylinder.orientation_average(q, 20.0, 40.0, order=256)
        assert base == pytest.approx(ref, rel=1e-6)

    def test_low_q_limit_is_volume_term(self):
        # A -> 1 as q -> 0, so I -> 1e-4 V drho^2
        params = {"radius": 20.0, "length": 40.0, "sld": 4.0, "sld_solvent": 1.0,
                  "background": 0.0}
        got = evaluate("cylinder", params, np.array([1e-8]))
        volume = math.pi * 20.0 ** 2 * 40.0
        assert got[0] == pytest.approx(1e-4 * volume * 9.0, rel=1e-8)


class TestLamellar:
    def test_against_direct_formula(self):
        q = np.array([0.02, 0.1, 0.7])
        params = {"thickness": 50.0, "sld": 1.0, "sld_solvent": 6.0, "background": 0.0}
        expected = 1e-4 * 8 * math.pi * 25.0 * np.sin(q * 25.0) ** 2 / (50.0 * q ** 4)
        assert evaluate("lamellar", params, q) == pytest.approx(expected, rel=1e-12)


class TestSharedInvariants:
    Q = default_qgrid(1e-3, 1.0, 64)
    CASES = [
        ("sphere", {"radius": 60.0, "sld": 2.0, "sld_solvent": 6.0}),
        ("cylinder", {"radius": 20.0, "length": 150.0, "sld": 4.0, "sld_solvent": 1.0}),
        ("ellipsoid", {"radius_polar": 30.0, "radius_equatorial": 80.0,
                       "sld": 4.0, "sld_solvent": 1.0}),
        ("lamellar", {"thickness": 50.0, "sld": 1.0, "sld_solvent": 6.0}),
    ]

    @pytest.mark.parametrize("model,params", CASES)
    def test_scale_linearity(self, model, params):
        one = evaluate(model, dict(params, scale=1.0, background=0.0), self.Q)
        two = evaluate(model, dict(params, scale=2.0, background=0.0), self.Q)
        assert two == pytest.approx(2.0 * one, rel=1e-12)

    @pytest.mark.parametrize("model,params", CASES)
    def test_background_additivity(self, model, params):
        zero = evaluate(model, dict(params, background=0.0), self.Q)
        raised = evaluate(model, dict(params, background=0.375), self.Q)
        assert raised - zero == pytest.approx(np.full(len(self.Q), 0.375), abs=1e-12)

    @pytest.mark.parametrize("model,params", CASES)
    def test_contrast_quadratic(self, model, params):
        base = evaluate(model, dict(params, background=0.0), self.Q)
        solvent = params["sld_solvent"]
        tripled = dict(params, background=0.0,
                       sld=solvent + 3.0 * (params["sld"] - solvent))
        assert evaluate(model, tripled, self.Q) == pytest.approx(9.0 * base, rel=1e-12)

    @pytest.mark.parametrize("model,params", CASES)
    def test_finite_nonnegative(self, model, params):
        intensity = evaluate(model, dict(params), self.Q)
        assert np.all(np.isfinite(intensity))
        assert np.all(intensity >= 0)


class TestKernels:
    def test_sphere_kernel_series_continuity(self):
        cut = kernels.SPHERE_SERIES_CUTOFF
        lo = kernels.sphere_kernel(np.array([cut - 1e-9]))[0]
        hi = kernels.sphere_kernel(np.array([cut + 1e-9]))[0]
        assert abs(hi - lo) / abs(lo) < 1e-9

    def test_sinc_series_continuity(self):
        cut = kernels.SINC_SERIES_CUTOFF
        lo = kernels.sinc(np.array([cut - 1e-12]))[0]
        hi = kernels.sinc(np.array([cut + 1e-12]))[0]
        assert abs(hi - lo) / abs(lo) < 1e-9

    def test_j1c_series_continuity(self):
        cut = kernels.J1C_SERIES_CUTOFF
        lo = kernels.j1c(np.array([cut - 1e-9]))[0]
        hi = kernels.j1c(np.array([cut + 1e-9]))[0]
        assert abs(hi - lo) / abs(lo) < 1e-9

    def test_j1_against_scipy_oracle(self):
        x = np.concatenate([np.linspace(1e-3, 7.99, 500),
                            np.linspace(8.0, 120.0, 500)])
        ours = kernels.bessel_j1(x)
        ref = scipy.special.j1(x)
        assert np.max(np.abs(ours - ref)) < 2e-7

    def test_evaluate_continuity_through_series_switch(self):
        # q*r crosses the sphere-kernel cutoff
        r = 1.0
        cut = kernels.SPHERE_SERIES_CUTOFF
        params = dict(SPHERE_PARAMS, radius=r)
        lo = evaluate("sphere", params, np.array([cut - 1e-9]))[0]
        hi = evaluate("sphere", params, np.array([cut + 1e-9]))[0]
        assert abs(hi - lo) / abs(lo) < 1e-9


class TestQGrid:
    def test_three_point_log_grid(self):
        grid = default_qgrid(0.01, 1.0, 3)
        assert grid.points == pytest.approx([0.01, 0.1, 1.0], rel=1e-12)

    def test_constant_ratio(self):
        grid = default_qgrid(0.001, 0.5, 100)
        assert len(grid) == 100
        ratios = grid.points[1:] / grid.points[:-1]
        assert ratios == pytest.approx(np.full(99, ratios[0]), rel=1e-9)
        assert grid.points[0] == pytest.approx(0.001, rel=1e-12)
        assert grid.points[-1] == pytest.approx(0.5, rel=1e-12)

    def test_invalid_ranges(self):
        with pytest.raises(InvalidRange):
            default_qgrid(1.0, 0.01, 50)
        with pytest.raises(InvalidRange):
            default_qgrid(0.0, 1.0, 50)
        with pytest.raises(InvalidRange):
            default_qgrid(0.01, 1.0, 1)


class TestGenerate:
    def test_noise_free_matches_evaluate(self):
        grid = default_qgrid(0.01, 0.3, 40)
        ds = generate_dataset("sphere", SPHERE_PARAMS, grid, noise_fraction=0.0, seed=3)
        assert ds.intensity == pytest.approx(evaluate("sphere", SPHERE_PARAMS, grid))
        assert ds.d_intensity is None

    def test_seed_determinism(self):
        grid = default_qgrid(0.01, 0.3, 40)
        a = generate_dataset("sphere", SPHERE_PARAMS, grid, 0.02, seed=11)
        b = generate_dataset("sphere", SPHERE_PARAMS, grid, 0.02, seed=11)
        assert np.array_equal(a.intensity, b.intensity)
        assert np.array_equal(a.d_intensity, b.d_intensity)

    def test_error_bars_track_clean_curve(self):
        grid = default_qgrid(0.01, 0.3, 40)
        clean = evaluate("sphere", SPHERE_PARAMS, grid)
        ds = generate_dataset("sphere", SPHERE_PARAMS, grid, 0.05, seed=1)
        assert ds.d_intensity == pytest.approx(0.05 * clean)
        assert ds.source["model"] == "sphere"
        assert ds.source["seed"] == 1
