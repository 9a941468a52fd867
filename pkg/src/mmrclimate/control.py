"""Closed-form solution of the abatement planning problem.

The planner minimizes the discounted integral of quadratic abatement
cost plus quadratic damage subject to dE/dt = B - A and T = m E.  The
first-order conditions reduce to a coupled linear system

    dA/dt = delta A - k E        with  k = beta m^2 / alpha
    dE/dt = B - A

whose matrix has one unstable root lam_plus > delta and one stable root
lam_minus < 0 (lam_plus + lam_minus = delta, lam_plus * lam_minus = -k).
Boundedness of the discounted objective forces the coefficient of the
unstable mode to zero; the stable-mode coefficient is pinned by the
initial stock E(0) = E0.  With an exponential-polynomial baseline the
particular response is found by a finite downward recurrence, so the
optimal paths are exact ExpPoly objects.

``numeric_oracle`` solves the same problem by brute force (piecewise
linear abatement on an annual grid, conjugate gradient on the discrete
normal equations) and is used only to cross-check the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import _hiprec
from .economy import ClimateModel, EconParams, discounted_total_cost
from .errors import InvalidDiscount, NonConvergence, ResonantForcing, ValidationError
from .exppoly import ExpPoly

# Below this root gap the discount rate is nudged outright: even exact
# arithmetic would leave the float path representation useless.
RESONANCE_TOL = 1e-7
# Below this gap the float closed form still evaluates pointwise but its
# discounted cost cancels catastrophically; costs go through _hiprec.
HIPREC_GAP = 3e-3


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything the solver needs besides the {delta, model} pair."""

    baseline: ExpPoly       # GtC/yr, all rates strictly negative
    e0: float               # GtC, net cumulative emissions at t = 0
    econ: EconParams
    start_year: int = 2020

    def __post_init__(self):
        if self.e0 < 0:
            raise ValidationError("initial cumulative emissions must be >= 0")
        if not self.baseline.is_zero and self.baseline.max_rate() >= 0:
            raise ValidationError("baseline must decay (all rates < 0)")


@dataclass(frozen=True)
class CharRoots:
    """Eigenstructure of the optimality system."""

    lam_plus: float     # unstable, > delta
    lam_minus: float    # stable, <= 0
    stiffness: float    # k = beta m^2 / alpha, 1/yr^2


@dataclass(frozen=True)
class OptimalSolution:
    """Exact paths plus provenance.  ``delta``/``model`` record the pair
    the path was optimized for (``delta`` is None for no abatement, where
    the cost is computed per evaluation rate instead of stored).
    ``delta_solved`` is the rate actually used, which differs from
    ``delta`` only after an anti-resonance nudge.  ``ill_conditioned``
    marks near-resonant solutions whose costs must be evaluated in high
    precision; ``solution_cost`` handles the dispatch."""

    abatement: ExpPoly       # GtC/yr
    net_emissions: ExpPoly   # GtC
    temperature: ExpPoly     # degC, ccr * E
    model: ClimateModel
    delta: float | None
    j_star: float | None
    roots: CharRoots | None = None
    delta_solved: float | None = None
    ill_conditioned: bool = False


def char_roots(delta: float, m: float, alpha: float, beta: float) -> CharRoots:
    """Roots of lam^2 - delta lam - k = 0, ordered lam_plus >= lam_minus."""
    if delta <= 0.0:
        raise InvalidDiscount(
            f"discount rate must be positive, got {delta}: transversality "
            "fails at zero discounting"
        )
    if alpha <= 0.0:
        raise ValidationError("alpha must be positive")
    if beta < 0.0 or m < 0.0:
        raise ValidationError("beta and m must be nonnegative")
    k = beta * m * m / alpha
    s = math.sqrt(delta * delta + 4.0 * k)
    return CharRoots(lam_plus=0.5 * (delta + s), lam_minus=0.5 * (delta - s),
                     stiffness=k)


def _particular_response(baseline: ExpPoly, delta: float, k: float) -> ExpPoly:
    """Bounded particular solution E_p of the forced optimality system.

    For each baseline rate group c_n t^n e^{mu t} the vector coefficients
    w_j of (A_p, E_p) = e^{mu t} sum_j w_j t^j satisfy

        (M - mu I) w_j = (j+1) w_{j+1} - (0, c_j)

    with M = [[delta, -k], [-1, 0]]; the 2x2 solves run from the top
    power down.  Only the E component is returned; A follows exactly from
    A = B - dE/dt, which keeps the state equation a bitwise identity.
    """
    groups: dict[float, dict[int, float]] = {}
    for c, n, mu in baseline.terms:
        groups.setdefault(mu, {})[n] = c
    e_terms = []
    for mu, coeffs in groups.items():
        det = mu * mu - delta * mu - k  # det(M - mu I)
        top = max(coeffs)
        w_next = (0.0, 0.0)
        for j in range(top, -1, -1):
            rhs_a = (j + 1) * w_next[0]
            rhs_e = (j + 1) * w_next[1] - coeffs.get(j, 0.0)
            # inverse of [[delta-mu, -k], [-1, -mu]] times rhs
            w_a = (-mu * rhs_a + k * rhs_e) / det
            w_e = (rhs_a + (delta - mu) * rhs_e) / det
            w_next = (w_a, w_e)
            e_terms.append((w_e, j, mu))
    return ExpPoly(tuple(e_terms))


def solve_optimal(delta: float, model: ClimateModel,
                  scenario: ScenarioConfig) -> OptimalSolution:
    """Exact optimal abatement for one {delta, model} pair.

    A zero climate response makes damages insensitive to emissions, so
    the strictly convex cost pins abatement at exactly zero.  If a
    baseline rate collides with a characteristic root (within
    RESONANCE_TOL) the discount rate is nudged with a warning until the
    resonance clears; this moves the answer by far less than any
    published tolerance.  Merely *near*-resonant solutions keep the
    requested rate but are marked for high-precision costing.
    """
    econ = scenario.econ
    baseline = scenario.baseline

    if model.ccr == 0.0:
        # no climate response, so damages never react to emissions and
        # the strictly convex cost term pins abatement at exactly zero
        passive = no_abatement_solution(model, scenario)
        roots = char_roots(delta, 0.0, econ.alpha, econ.beta)
        return replace(passive, delta=delta, delta_solved=delta,
                       j_star=0.0, roots=roots)

    delta_used = delta
    for attempt in range(6):
        roots = char_roots(delta_used, model.ccr, econ.alpha, econ.beta)
        gap = min(
            (min(abs(mu - roots.lam_plus), abs(mu - roots.lam_minus))
             for mu in baseline.rates()),
            default=math.inf,
        )
        if gap > RESONANCE_TOL:
            break
        delta_used = delta + RESONANCE_TOL * 3.0 ** (attempt + 1)
        warnings.warn(
            f"baseline rate within {RESONANCE_TOL} of a characteristic root; "
            f"perturbing discount rate to {delta_used!r}",
            stacklevel=2,
        )
    else:
        raise ResonantForcing(
            f"could not separate baseline rates from characteristic roots "
            f"near delta = {delta}"
        )

    ill_conditioned = gap < HIPREC_GAP
    if ill_conditioned:
        emissions = ExpPoly(_hiprec.solution_exppoly_terms(
            baseline.terms, scenario.e0, delta_used, roots.stiffness))
    else:
        e_part = _particular_response(baseline, delta_used, roots.stiffness)
        c_stable = scenario.e0 - e_part(0.0)
        emissions = e_part + ExpPoly.term(c_stable, 0, roots.lam_minus)
    abatement = baseline - emissions.derivative()

    if abatement.max_rate() >= 0.5 * delta_used:
        raise ResonantForcing(
            "optimal path violates the integrability bound; "
            "this indicates a resonance the perturbation missed"
        )
    sol = OptimalSolution(
        abatement=abatement,
        net_emissions=emissions,
        temperature=emissions * model.ccr,
        model=model,
        delta=delta,
        j_star=None,
        roots=roots,
        delta_solved=delta_used,
        ill_conditioned=ill_conditioned,
    )
    return replace(sol, j_star=solution_cost(sol, delta_used, scenario))


def solution_cost(sol: OptimalSolution, delta_eval: float,
                  scenario: ScenarioConfig, ccr_eval: float | None = None) -> float:
    """Discounted total cost of a solved path under an evaluation state.

    Well-conditioned paths use the ordinary closed form; near-resonant
    ones are rebuilt and integrated in high precision, since their float
    coefficients cancel catastrophically inside the cost sum.
    """
    if ccr_eval is None:
        ccr_eval = sol.model.ccr
    if sol.ill_conditioned:
        return _hiprec.cost(
            scenario.baseline.terms, scenario.e0,
            sol.delta_solved, sol.roots.stiffness,
            delta_eval, scenario.econ.alpha, scenario.econ.beta, ccr_eval,
        )
    return discounted_total_cost(
        sol.abatement, scenario.econ,
        ClimateModel(sol.model.name, ccr_eval), delta_eval,
        scenario.baseline, scenario.e0,
    )


def no_abatement_solution(model: ClimateModel,
                          scenario: ScenarioConfig) -> OptimalSolution:
    """The passive benchmark: A = 0, E = E0 + cumulative baseline."""
    emissions = ExpPoly.constant(scenario.e0) + scenario.baseline.cumulative()
    return OptimalSolution(
        abatement=ExpPoly.zero(),
        net_emissions=emissions,
        temperature=emissions * model.ccr,
        model=model,
        delta=None,
        j_star=None,
        roots=None,
    )


@dataclass(frozen=True)
class OracleResult:
    times: np.ndarray
    abatement: np.ndarray
    j_estimate: float


def numeric_oracle(delta: float, model: ClimateModel, scenario: ScenarioConfig,
                   step: float = 1.0, horizon: float = 1500.0,
                   tol: float = 1e-10) -> OracleResult:
    """Brute-force check: minimize the discretized objective directly.

    Abatement is piecewise linear on the grid; the integral uses
    trapezoid weights and the running emissions integral uses the
    matching trapezoid cumulative, so the discrete problem is a strictly
    convex quadratic in the nodal values.  It is solved by conjugate
    gradient with the Hessian applied matrix-free through prefix sums.
    Nothing here touches the closed-form solver.
    """
    if step > 1.0:
        raise ValidationError("oracle grid step must be <= 1 year")
    if horizon < 1000.0:
        raise ValidationError("oracle horizon must be >= 1000 years")
    if delta <= 0.0:
        raise InvalidDiscount(f"discount rate must be positive, got {delta}")

    n = int(round(horizon / step))
    t = np.arange(n + 1) * step
    w = np.full(n + 1, step)
    w[0] = w[-1] = 0.5 * step
    omega = w * np.exp(-delta * t)

    cum_b = scenario.baseline.cumulative()(t)
    alpha, beta = scenario.econ.alpha, scenario.econ.beta
    bm2 = beta * model.ccr ** 2

    def cumulative_trapezoid(a):
        mids = 0.5 * step * (a[1:] + a[:-1])
        out = np.empty_like(a)
        out[0] = 0.0
        np.cumsum(mids, out=out[1:])
        return out

    def emissions_of(a):
        return scenario.e0 + cum_b - cumulative_trapezoid(a)

    def gradient(a):
        e = emissions_of(a)
        we = omega * e
        suffix = np.concatenate((np.cumsum(we[::-1])[::-1], [0.0]))
        pull = 0.5 * we + suffix[1:]
        pull[0] = 0.5 * suffix[1]
        return omega * alpha * a - bm2 * step * pull

    g0 = gradient(np.zeros(n + 1))

    def apply_hessian(v):
        return gradient(v) - g0

    # Jacobi preconditioner; the e^{-delta t} weights spread the diagonal
    # over tens of orders of magnitude, which plain CG cannot survive.
    omega_suffix = np.concatenate((np.cumsum(omega[::-1])[::-1], [0.0]))
    diag = omega * alpha + bm2 * step ** 2 * (0.25 * omega + omega_suffix[1:])
    diag[0] = omega[0] * alpha + bm2 * step ** 2 * 0.25 * omega_suffix[1]

    # preconditioned conjugate gradient for H a = -g0
    a = np.zeros(n + 1)
    r = -g0.copy()
    z = r / diag
    p = z.copy()
    rz = float(r @ z)
    r0 = math.sqrt(float(g0 @ g0))
    for _ in range(20 * (n + 1)):
        r_norm = math.sqrt(float(r @ r))
        if r_norm <= max(tol * r0, 1e-300):
            break
        hp = apply_hessian(p)
        denom = float(p @ hp)
        if denom <= 0:
            raise NonConvergence("oracle lost positive definiteness")
        alpha_cg = rz / denom
        a += alpha_cg * p
        r -= alpha_cg * hp
        z = r / diag
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    else:
        if math.sqrt(float(r @ r)) > 1e-6 * r0:
            raise NonConvergence("oracle conjugate gradient did not converge")

    e = emissions_of(a)
    j = float(np.sum(omega * 0.5 * (alpha * a * a + bm2 * e * e)))
    return OracleResult(times=t, abatement=a, j_estimate=j)
