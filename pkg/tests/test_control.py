"""Closed-form solver: characteristic roots, saddle-path construction,
first-order conditions, and the brute-force oracle cross-check."""

import math

import numpy as np
import pytest

from mmrclimate.control import (
    CharRoots,
    ScenarioConfig,
    char_roots,
    no_abatement_solution,
    numeric_oracle,
    solution_cost,
    solve_optimal,
)
from mmrclimate.economy import (
    ClimateModel,
    EconParams,
    discounted_total_cost,
)
from mmrclimate.errors import InvalidDiscount, ValidationError
from mmrclimate.exppoly import ExpPoly

FIG_MODEL = ClimateModel("HAD", 0.002286)
FIG_ECON = EconParams(alpha=0.000125, beta=0.018)


class TestCharRoots:
    def test_zero_response_degenerates(self):
        roots = char_roots(0.04, 0.0, 0.000125, 0.018)
        assert roots.lam_plus == pytest.approx(0.04)
        assert roots.lam_minus == pytest.approx(0.0, abs=1e-15)

    def test_worked_values_satisfy_characteristic_equation(self):
        roots = char_roots(0.05, 0.002286, 0.000125, 0.018)
        k = 0.018 * 0.002286**2 / 0.000125
        assert roots.stiffness == pytest.approx(k, rel=1e-14)
        assert k == pytest.approx(7.525e-4, rel=1e-3)
        for lam in (roots.lam_plus, roots.lam_minus):
            assert lam * lam - 0.05 * lam - k == pytest.approx(0.0, abs=1e-15)
        assert roots.lam_plus > 0.05 > 0.0 > roots.lam_minus

    def test_vieta_identities(self):
        rng = np.random.default_rng(41)
        for _ in range(40):
            delta = float(rng.uniform(0.005, 0.08))
            m = float(rng.uniform(0.0005, 0.004))
            alpha = float(rng.uniform(5e-5, 3e-4))
            beta = float(rng.uniform(0.005, 0.03))
            r = char_roots(delta, m, alpha, beta)
            assert r.lam_plus + r.lam_minus == pytest.approx(delta, abs=1e-12)
            assert r.lam_plus * r.lam_minus == pytest.approx(-r.stiffness, abs=1e-12)

    def test_invalid_discount(self):
        with pytest.raises(InvalidDiscount):
            char_roots(0.0, 0.002, 0.000125, 0.018)
        with pytest.raises(InvalidDiscount):
            char_roots(-0.01, 0.002, 0.000125, 0.018)


class TestSolveOptimal:
    def test_zero_response_never_abates(self, scenario):
        sol = solve_optimal(0.05, ClimateModel("null", 0.0), scenario)
        assert sol.abatement.is_zero
        assert sol.j_star == pytest.approx(0.0, abs=1e-12)

    def test_abatement_lags_then_overtakes_baseline(self, scenario):
        # At the worked-example parameters abatement is partial through
        # the bulk of the 21st century and overtakes the baseline in the
        # 22nd, so the emissions stock rises and then falls.  (In the
        # first few years the drawdown of the legacy stock can exceed the
        # fitted curve, whose left edge sits below the scenario data.)
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        gap = scenario.baseline - sol.abatement
        t = np.arange(25.0, 81.0)
        assert np.all(gap(t) > 0)
        t2 = np.arange(80.0, 200.0)
        assert np.any(gap(t2) < 0)
        emissions = sol.net_emissions(np.arange(0.0, 400.0))
        t_peak = float(np.argmax(emissions))
        assert 80.0 < t_peak < 180.0   # peak inside the 22nd century

    def test_state_equation_is_exact_identity(self, config, scenario):
        for delta in config.deltas:
            sol = solve_optimal(delta, FIG_MODEL, scenario)
            residual = (sol.net_emissions.derivative() - scenario.baseline) \
                + sol.abatement
            assert residual.is_zero

    def test_initial_stock_pinned(self, config, scenario):
        for delta in (0.01, 0.04, 0.07):
            sol = solve_optimal(delta, FIG_MODEL, scenario)
            assert sol.net_emissions(0.0) == pytest.approx(scenario.e0, rel=1e-9)

    def test_foc_residual(self, scenario):
        for delta, model in [(0.05, FIG_MODEL), (0.01, FIG_MODEL),
                             (0.03, ClimateModel("GFDL", 0.00157))]:
            sol = solve_optimal(delta, model, scenario)
            k = sol.roots.stiffness
            residual = sol.abatement.derivative() - delta * sol.abatement \
                + k * sol.net_emissions
            t = np.linspace(0.0, 1000.0, 4001)
            scale = max(1.0, float(np.abs(sol.abatement(t)).max()))
            assert float(np.abs(residual(t)).max()) <= 1e-8 * scale

    def test_integrability_bound_on_rates(self, config, scenario):
        for delta in config.deltas:
            sol = solve_optimal(delta, FIG_MODEL, scenario)
            assert sol.abatement.max_rate() < 0.5 * delta

    def test_emissions_decay_to_zero(self, scenario):
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        t = np.arange(0.0, 2001.0)
        peak = float(sol.net_emissions(t).max())
        assert abs(sol.net_emissions(2000.0)) < 0.01 * peak

    def test_temperature_is_scaled_emissions(self, scenario):
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        for t in (0.0, 50.0, 300.0):
            assert sol.temperature(t) == pytest.approx(
                FIG_MODEL.ccr * sol.net_emissions(t), rel=1e-12)

    def test_stationarity_under_perturbations(self, scenario):
        # central differences are exact for a quadratic functional, so
        # the Gateaux derivative at the optimum is pure roundoff
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        rng = np.random.default_rng(53)
        eps = 1e-3
        for _ in range(5):
            h = ExpPoly((
                (float(rng.uniform(-1.0, 1.0)), int(rng.integers(0, 2)),
                 float(rng.uniform(-0.04, -0.005))),
                (float(rng.uniform(-1.0, 1.0)), 0,
                 float(rng.uniform(-0.04, -0.005))),
            ))
            j_hi = discounted_total_cost(sol.abatement + eps * h, FIG_ECON,
                                         FIG_MODEL, 0.05, scenario.baseline,
                                         scenario.e0)
            j_lo = discounted_total_cost(sol.abatement + (-eps) * h, FIG_ECON,
                                         FIG_MODEL, 0.05, scenario.baseline,
                                         scenario.e0)
            assert abs(j_hi - j_lo) / (2.0 * eps) <= 1e-6

    def test_resonant_forcing_perturbs_with_warning(self, scenario):
        # pick the response that puts the stable root exactly on the
        # baseline decay rate: k = theta^2 + delta*theta
        theta = -scenario.baseline.rates()[0]
        delta = 0.04
        k = theta * theta + delta * theta
        m = math.sqrt(k * scenario.econ.alpha / scenario.econ.beta)
        with pytest.warns(UserWarning, match="perturbing"):
            sol = solve_optimal(delta, ClimateModel("resonant", m), scenario)
        assert sol.delta_solved != delta
        assert sol.j_star > 0
        neighbors = [solve_optimal(d, ClimateModel("resonant", m), scenario).j_star
                     for d in (0.035, 0.045)]
        assert min(neighbors) * 0.5 < sol.j_star < max(neighbors) * 2.0

    def test_near_resonant_costing_matches_quadrature(self, scenario):
        # gap ~ 1e-5: float coefficients cancel catastrophically, the
        # high-precision route must agree with adaptive quadrature
        from scipy.integrate import quad

        theta = -scenario.baseline.rates()[0]
        delta = 0.04
        k = (theta + 1e-5) ** 2 + delta * (theta + 1e-5)
        m = math.sqrt(k * scenario.econ.alpha / scenario.econ.beta)
        sol = solve_optimal(delta, ClimateModel("near", m), scenario)
        assert sol.ill_conditioned
        j = solution_cost(sol, 0.06, scenario, ccr_eval=0.00244)
        a, e = sol.abatement, sol.net_emissions
        alpha, beta = scenario.econ.alpha, scenario.econ.beta

        def integrand(t):
            return 0.5 * (alpha * a(t) ** 2 + beta * (0.00244 * e(t)) ** 2) \
                * math.exp(-0.06 * t)

        expected = sum(quad(integrand, lo, hi, limit=600)[0]
                       for lo, hi in [(0.0, 60.0), (60.0, 500.0), (500.0, 3000.0)])
        assert j == pytest.approx(expected, rel=1e-6)


class TestNoAbatement:
    def test_path_is_zero_and_stock_accumulates(self, scenario):
        sol = no_abatement_solution(FIG_MODEL, scenario)
        assert sol.abatement.is_zero
        t = np.arange(0.0, 3001.0)
        emissions = sol.net_emissions(t)
        assert np.all(np.diff(emissions) >= -1e-12)
        assert emissions[0] == pytest.approx(scenario.e0)

    def test_closed_form_accumulation(self):
        scen = ScenarioConfig(baseline=ExpPoly.term(10.0, 0, -0.01), e0=0.0,
                              econ=EconParams(1e-4, 0.018))
        sol = no_abatement_solution(ClimateModel("X", 0.002), scen)
        for t in (1.0, 50.0, 400.0):
            assert sol.net_emissions(t) == pytest.approx(
                1000.0 * (1.0 - math.exp(-0.01 * t)), rel=1e-12)

    def test_cost_computable_at_any_rate(self, scenario):
        sol = no_abatement_solution(FIG_MODEL, scenario)
        costs = [
            discounted_total_cost(sol.abatement, scenario.econ, FIG_MODEL,
                                  d, scenario.baseline, scenario.e0)
            for d in (0.01, 0.05)
        ]
        assert costs[0] > costs[1] > 0


class TestNumericOracle:
    def test_matches_closed_form_cost(self, scenario):
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        oracle = numeric_oracle(0.05, FIG_MODEL, scenario)
        assert oracle.j_estimate == pytest.approx(sol.j_star, rel=5e-3)

    def test_matches_closed_form_path(self, scenario):
        sol = solve_optimal(0.05, FIG_MODEL, scenario)
        oracle = numeric_oracle(0.05, FIG_MODEL, scenario)
        mask = oracle.times <= 500.0
        exact = sol.abatement(oracle.times[mask])
        deviation = np.abs(oracle.abatement[mask] - exact).max()
        assert deviation < 0.01 * np.abs(exact).max()

    def test_zero_response_returns_zero_path(self, scenario):
        oracle = numeric_oracle(0.05, ClimateModel("null", 0.0), scenario)
        assert np.abs(oracle.abatement).max() < 1e-6

    def test_grid_preconditions(self, scenario):
        with pytest.raises(ValidationError):
            numeric_oracle(0.05, FIG_MODEL, scenario, step=2.0)
        with pytest.raises(ValidationError):
            numeric_oracle(0.05, FIG_MODEL, scenario, horizon=500.0)


class TestScenarioValidation:
    def test_negative_stock_rejected(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(baseline=ExpPoly.term(10.0, 0, -0.01), e0=-1.0,
                           econ=EconParams(1e-4, 0.018))

    def test_growing_baseline_rejected(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(baseline=ExpPoly.term(10.0, 0, 0.01), e0=0.0,
                           econ=EconParams(1e-4, 0.018))
