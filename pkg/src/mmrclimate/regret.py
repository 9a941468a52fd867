"""Regret accounting over the {discount rate, climate model} ensemble.

A *state of the world* is one {delta, model} pair; the candidate *policy
set* holds the optimal path for every pair plus the passive no-abatement
benchmark.  The regret of a policy in a state is the cost of following
that policy when the state turns out to be true, minus the cost of the
state's own optimal policy.  The minimax-regret choice is the policy
whose worst-case regret across all states is smallest.

Matrix orientation follows the published layout: rows are actual states,
columns are policies, both enumerated model-major with the discount rate
cycling fastest and no abatement as the last column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import (
    OptimalSolution,
    ScenarioConfig,
    solution_cost,
    solve_optimal,
)
from .economy import ClimateModel, discounted_total_cost, net_cumulative_emissions
from .errors import NoPeak, ValidationError
from .exppoly import ExpPoly

NONNEG_TOL = 1e-9


@dataclass(frozen=True)
class StateOfWorld:
    delta: float
    model: ClimateModel

    def label(self) -> str:
        return f"d={self.delta:g}/{self.model.name}"


@dataclass(frozen=True)
class Policy:
    """An abatement path with provenance: the {delta, model} pair it was
    optimized for, or the no-abatement benchmark (both None).  The
    originating solution is kept so near-resonant paths can be costed
    through the high-precision route."""

    path: ExpPoly
    delta: float | None
    model: ClimateModel | None
    solution: OptimalSolution | None = None

    @property
    def is_no_abatement(self) -> bool:
        return self.delta is None

    def label(self) -> str:
        if self.is_no_abatement:
            return "no-abatement"
        return f"d={self.delta:g}/{self.model.name}"

    @staticmethod
    def from_solution(sol: OptimalSolution) -> "Policy":
        return Policy(path=sol.abatement, delta=sol.delta, model=sol.model,
                      solution=sol)

    @staticmethod
    def no_abatement() -> "Policy":
        return Policy(path=ExpPoly.zero(), delta=None, model=None)


def _check_ensemble(deltas, ensemble):
    if not deltas or not ensemble:
        raise ValidationError("need at least one discount rate and one model")
    if any(d <= 0 for d in deltas):
        raise ValidationError("all discount rates must be positive")
    if len(set(deltas)) != len(deltas):
        raise ValidationError("duplicate discount rate in ensemble")
    ccrs = [m.ccr for m in ensemble]
    if len(set(ccrs)) != len(ccrs):
        raise ValidationError("duplicate climate response in ensemble")


def build_states(deltas, ensemble) -> list:
    """All {delta, model} pairs, model-major, delta cycling fastest."""
    _check_ensemble(deltas, ensemble)
    return [StateOfWorld(delta=d, model=m) for m in ensemble for d in deltas]


def build_policy_set(deltas, ensemble, scenario: ScenarioConfig) -> list:
    """One optimal policy per {delta, model} pair plus no abatement, in
    the same deterministic order as :func:`build_states`."""
    _check_ensemble(deltas, ensemble)
    policies = []
    for m in ensemble:
        for d in deltas:
            try:
                policies.append(Policy.from_solution(solve_optimal(d, m, scenario)))
            except Exception as exc:
                raise type(exc)(
                    f"solver failed for policy pair (delta={d}, model={m.name}): {exc}"
                ) from exc
    policies.append(Policy.no_abatement())
    return policies


def _policy_cost(policy: Policy, state: StateOfWorld,
                 scenario: ScenarioConfig) -> float:
    if policy.solution is not None:
        return solution_cost(policy.solution, state.delta, scenario,
                             ccr_eval=state.model.ccr)
    return discounted_total_cost(policy.path, scenario.econ, state.model,
                                 state.delta, scenario.baseline, scenario.e0)


def _state_optimal_cost(state: StateOfWorld, scenario: ScenarioConfig) -> float:
    sol = solve_optimal(state.delta, state.model, scenario)
    return solution_cost(sol, state.delta, scenario)


def regret(policy: Policy, state: StateOfWorld, scenario: ScenarioConfig,
           j_opt: float | None = None) -> float:
    """Cost of the policy in the state minus the state's optimal cost."""
    if j_opt is None:
        j_opt = _state_optimal_cost(state, scenario)
    return _policy_cost(policy, state, scenario) - j_opt


@dataclass(frozen=True)
class RegretMatrix:
    """Rows: actual states.  Columns: policies.  Values are regrets in
    percent of the present value of output."""

    states: tuple
    policies: tuple
    values: np.ndarray     # shape (n_states, n_policies)
    j_opt: np.ndarray      # optimal cost per state, same row order

    def __post_init__(self):
        if self.values.shape != (len(self.states), len(self.policies)):
            raise ValidationError("matrix shape does not match labels")
        if self.values.min() < -NONNEG_TOL:
            raise ValidationError(
                f"negative regret {self.values.min():.3e}; optimal costs are "
                "not actually optimal"
            )

    @property
    def max_regret(self) -> np.ndarray:
        """Worst-case regret of each policy (column maxima)."""
        return self.values.max(axis=0)

    @property
    def mmr_index(self) -> int:
        return self._select()[0]

    def _select(self):
        column_max = self.max_regret
        best = None
        for j, policy in enumerate(self.policies):
            if policy.is_no_abatement:
                tie_key = (math.inf, math.inf)
            else:
                tie_key = (policy.delta, policy.model.ccr)
            entry = (column_max[j], tie_key, j)
            if best is None or entry < best:
                best = entry
        return best[2], best[0]

    def diagonal_indices(self):
        """(row, col) pairs where the policy provenance equals the state."""
        pairs = []
        for i, state in enumerate(self.states):
            for j, policy in enumerate(self.policies):
                if (not policy.is_no_abatement
                        and policy.delta == state.delta
                        and policy.model.name == state.model.name):
                    pairs.append((i, j))
        return pairs


def regret_matrix(policies, states, scenario: ScenarioConfig) -> RegretMatrix:
    """Evaluate every policy in every state.

    Cells are independent; the loop order (row-major) only fixes the
    deterministic assembly of the array.
    """
    j_opt = np.array([_state_optimal_cost(s, scenario) for s in states])
    values = np.empty((len(states), len(policies)))
    for i, state in enumerate(states):
        for j, policy in enumerate(policies):
            values[i, j] = regret(policy, state, scenario, j_opt=j_opt[i])
    return RegretMatrix(states=tuple(states), policies=tuple(policies),
                        values=values, j_opt=j_opt)


def mmr_select(matrix: RegretMatrix):
    """Policy minimizing the worst-case regret.

    Ties are broken toward the lower discount rate, then the lower
    climate response, with no abatement considered last.
    """
    idx, value = matrix._select()
    return matrix.policies[idx], float(value)


def tmax(policy: Policy, model: ClimateModel, scenario: ScenarioConfig,
         horizon: float = 3000.0, root_tol: float = 1e-6,
         relative_to_start: bool = False):
    """Peak temperature under a policy if ``model`` is the true model.

    Returns (years to peak, peak degC).  The emissions peak is the root
    of B - A with a + to - sign change (yearly scan plus bisection to
    ``root_tol``); with several such roots the one with the highest
    emissions wins.  Temperature is ccr * E including the initial stock,
    matching the published convention; pass ``relative_to_start`` to
    measure the increase over the starting temperature instead.
    Nondecreasing emissions (the no-abatement case) raise NoPeak carrying
    the asymptotic temperature when it is finite; a path that only drains
    the stock reports its peak at time zero.
    """
    emissions = net_cumulative_emissions(policy.path, scenario.baseline,
                                         scenario.e0)
    slope = scenario.baseline - policy.path   # dE/dt
    grid = np.arange(0.0, horizon + 1.0)
    values = slope(grid)

    crossings = []
    sign = np.sign(values)
    for i in range(len(grid) - 1):
        if sign[i] > 0 and sign[i + 1] <= 0:
            lo, hi = grid[i], grid[i + 1]
            while hi - lo > root_tol:
                mid = 0.5 * (lo + hi)
                if slope(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            crossings.append(0.5 * (lo + hi))

    if not crossings:
        if np.any(values > 0):
            try:
                asymptote = model.ccr * emissions.limit_at_infinity()
            except ValueError:
                asymptote = None
            raise NoPeak(
                f"net cumulative emissions are nondecreasing under "
                f"{policy.label()}; the supremum is at the horizon",
                asymptote_degc=asymptote,
            )
        t_peak = 0.0   # stock only drains; the maximum sits at the start
    else:
        t_peak = max(crossings, key=emissions)
    offset = model.ccr * scenario.e0 if relative_to_start else 0.0
    return float(t_peak), float(model.ccr * emissions(t_peak) - offset)


@dataclass(frozen=True)
class SweepCell:
    alpha: float
    beta: float
    policy_delta: float
    policy_model: str
    mmr_value: float
    years_to_peak: float
    tmax_degc: float            # under the highest-response model
    tmax_model: str
    tmax_by_model: tuple        # (model name, Tmax) for every ensemble member


@dataclass(frozen=True)
class SweepReport:
    alphas: tuple
    betas: tuple
    cells: tuple                # row-major over (alpha, beta)

    def cell(self, alpha, beta) -> SweepCell:
        for c in self.cells:
            if c.alpha == alpha and c.beta == beta:
                return c
        raise KeyError((alpha, beta))


def sweep(alphas, betas, deltas, ensemble, scenario: ScenarioConfig) -> SweepReport:
    """MMR selection and peak warming across an (alpha, beta) grid.

    For each cell the full regret matrix is rebuilt with the scenario's
    cost and damage weights replaced, the MMR policy selected, and its
    peak temperature evaluated under every ensemble member (the headline
    number uses the highest-response model, the worst case a planner can
    prepare for).
    """
    from dataclasses import replace
    from .economy import EconParams

    if not alphas or not betas:
        raise ValidationError("alpha and beta grids must be nonempty")
    worst_model = max(ensemble, key=lambda m: m.ccr)
    cells = []
    for alpha in alphas:
        for beta in betas:
            cell_scenario = replace(scenario, econ=EconParams(alpha=alpha, beta=beta))
            states = build_states(deltas, ensemble)
            policies = build_policy_set(deltas, ensemble, cell_scenario)
            matrix = regret_matrix(policies, states, cell_scenario)
            policy, value = mmr_select(matrix)
            years, peak = tmax(policy, worst_model, cell_scenario)
            by_model = tuple(
                (m.name, tmax(policy, m, cell_scenario)[1]) for m in ensemble
            )
            cells.append(SweepCell(
                alpha=alpha, beta=beta,
                policy_delta=policy.delta, policy_model=policy.model.name,
                mmr_value=value, years_to_peak=years, tmax_degc=peak,
                tmax_model=worst_model.name, tmax_by_model=by_model,
            ))
    return SweepReport(alphas=tuple(alphas), betas=tuple(betas),
                       cells=tuple(cells))
