"""Run configuration: a flat INI file with one section per concern.

The bundled ``data/default_config.ini`` reproduces the published middle
case.  ``e0 = auto`` resolves the initial cumulative-emissions stock
from the asymptotic-temperature anchor: the no-abatement temperature
limit under the anchor model equals ``anchor_temp_degc``, so
E0 = anchor / ccr - total baseline emissions.  Any float overrides it.

Schema (see README for the full key list)::

    [scenario]   start_year, e0, anchor_temp_degc, anchor_model
    [baseline]   variant, theta, phi, b0, r_squared, data
    [economy]    alpha, beta, report_scale
    [uncertainty] deltas, alpha_grid, beta_grid   (space separated)
    [ensemble]   NAME = ccr   (one per model, order defines m1..mN)
    [tolerances] integrability_margin, root_tol, oracle_rel_tol
    [output]     directory, formats
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace
from importlib.resources import files

from .baseline import BaselineParams, FormVariant, baseline_exppoly, cumulative_baseline
from .control import ScenarioConfig
from .economy import ClimateModel, EconParams
from .errors import ParseError, ValidationError

ENV_CONFIG = "MMRCLIMATE_CONFIG"


def bundled_data_path(name: str) -> str:
    """Filesystem path of a file shipped under ``mmrclimate/data``."""
    return str(files("mmrclimate").joinpath("data", name))


@dataclass(frozen=True)
class ToleranceConfig:
    integrability_margin: float = 1e-9
    root_tol: float = 1e-6
    oracle_rel_tol: float = 0.005


@dataclass(frozen=True)
class RunConfig:
    start_year: int
    e0_setting: str                  # "auto" or a float literal
    anchor_temp_degc: float
    anchor_model: str
    baseline: BaselineParams
    data_file: str
    econ: EconParams
    report_scale: float
    deltas: tuple
    alpha_grid: tuple
    beta_grid: tuple
    ensemble: tuple                  # ClimateModel, order defines m1..mN
    tolerances: ToleranceConfig
    output_dir: str
    formats: tuple

    def __post_init__(self):
        if len(set(self.deltas)) != len(self.deltas) or any(
            d <= 0 for d in self.deltas
        ):
            raise ValidationError("deltas must be positive and distinct")
        ccrs = [m.ccr for m in self.ensemble]
        if len(set(ccrs)) != len(ccrs) or any(c <= 0 for c in ccrs):
            raise ValidationError("ensemble responses must be positive and distinct")
        if not self.alpha_grid or not self.beta_grid:
            raise ValidationError("alpha/beta grids must be nonempty")

    def model(self, name: str) -> ClimateModel:
        for m in self.ensemble:
            if m.name.lower() == name.lower():
                return m
        known = ", ".join(m.name for m in self.ensemble)
        raise ValidationError(f"unknown model {name!r}; ensemble has: {known}")

    def resolved_e0(self) -> float:
        if self.e0_setting.strip().lower() == "auto":
            anchor = self.model(self.anchor_model)
            e0 = self.anchor_temp_degc / anchor.ccr - cumulative_baseline(self.baseline)
        else:
            try:
                e0 = float(self.e0_setting)
            except ValueError as exc:
                raise ValidationError(
                    f"e0 must be a number or 'auto', got {self.e0_setting!r}"
                ) from exc
        if e0 < 0:
            raise ValidationError(f"resolved initial stock is negative ({e0:.1f} GtC)")
        return e0

    def to_scenario(self) -> ScenarioConfig:
        """Build the solver scenario.

        The reporting scale multiplies both quadratic weights jointly,
        which scales every cost and regret by exactly that factor and
        provably leaves all selections unchanged; it defaults to 1 and
        exists only as a unit-convention escape hatch.
        """
        kappa = self.report_scale
        econ = self.econ if kappa == 1.0 else EconParams(
            alpha=self.econ.alpha * kappa, beta=self.econ.beta * kappa)
        return ScenarioConfig(
            baseline=baseline_exppoly(self.baseline),
            e0=self.resolved_e0(),
            econ=econ,
            start_year=self.start_year,
        )

    def scaled_grids(self):
        """(alpha, beta) sweep grids with the reporting scale applied."""
        kappa = self.report_scale
        return (tuple(a * kappa for a in self.alpha_grid),
                tuple(b * kappa for b in self.beta_grid))

    def with_baseline(self, params: BaselineParams) -> "RunConfig":
        return replace(self, baseline=params)


def _floats(text: str) -> tuple:
    return tuple(float(tok) for tok in text.split())


def load_config(path: str | None = None) -> RunConfig:
    """Read a config file; fall back to $MMRCLIMATE_CONFIG, then the
    bundled default."""
    if path is None:
        path = os.environ.get(ENV_CONFIG) or bundled_data_path("default_config.ini")
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ParseError(f"bad config {path}: {exc}") from exc

    try:
        scen = parser["scenario"]
        base = parser["baseline"]
        econ = parser["economy"]
        unc = parser["uncertainty"]
        ens = parser["ensemble"]
        tol = parser["tolerances"] if parser.has_section("tolerances") else {}
        out = parser["output"] if parser.has_section("output") else {}

        r2 = base.get("r_squared", "").strip()
        baseline = BaselineParams(
            theta=float(base["theta"]),
            phi=float(base["phi"]),
            b0=float(base["b0"]),
            r_squared=float(r2) if r2 else None,
            variant=FormVariant(base.get("variant", "theta-scaled")),
        )
        ensemble = tuple(
            ClimateModel(name=name, ccr=float(value)) for name, value in ens.items()
        )
        return RunConfig(
            start_year=int(scen.get("start_year", "2020")),
            e0_setting=scen.get("e0", "auto"),
            anchor_temp_degc=float(scen.get("anchor_temp_degc", "14.7")),
            anchor_model=scen.get("anchor_model", "HAD"),
            baseline=baseline,
            data_file=base.get("data", "extended_rcp85_emissions.csv"),
            econ=EconParams(alpha=float(econ["alpha"]), beta=float(econ["beta"])),
            report_scale=float(econ.get("report_scale", "1.0")),
            deltas=_floats(unc["deltas"]),
            alpha_grid=_floats(unc["alpha_grid"]),
            beta_grid=_floats(unc["beta_grid"]),
            ensemble=ensemble,
            tolerances=ToleranceConfig(
                integrability_margin=float(tol.get("integrability_margin", "1e-9")),
                root_tol=float(tol.get("root_tol", "1e-6")),
                oracle_rel_tol=float(tol.get("oracle_rel_tol", "0.005")),
            ),
            output_dir=out.get("directory", "out"),
            formats=tuple(out.get("formats", "csv txt svg").split()),
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad config {path}: {exc}") from exc


def save_config(config: RunConfig, path: str) -> None:
    """Serialize with full float precision so a round trip is exact."""
    parser = configparser.ConfigParser(delimiters=("=",))
    parser.optionxform = str
    parser["scenario"] = {
        "start_year": str(config.start_year),
        "e0": config.e0_setting,
        "anchor_temp_degc": repr(config.anchor_temp_degc),
        "anchor_model": config.anchor_model,
    }
    parser["baseline"] = {
        "variant": config.baseline.variant.value,
        "theta": repr(config.baseline.theta),
        "phi": repr(config.baseline.phi),
        "b0": repr(config.baseline.b0),
        "data": config.data_file,
    }
    if config.baseline.r_squared is not None:
        parser["baseline"]["r_squared"] = repr(config.baseline.r_squared)
    parser["economy"] = {
        "alpha": repr(config.econ.alpha),
        "beta": repr(config.econ.beta),
        "report_scale": repr(config.report_scale),
    }
    parser["uncertainty"] = {
        "deltas": " ".join(repr(d) for d in config.deltas),
        "alpha_grid": " ".join(repr(a) for a in config.alpha_grid),
        "beta_grid": " ".join(repr(b) for b in config.beta_grid),
    }
    parser["ensemble"] = {m.name: repr(m.ccr) for m in config.ensemble}
    parser["tolerances"] = {
        "integrability_margin": repr(config.tolerances.integrability_margin),
        "root_tol": repr(config.tolerances.root_tol),
        "oracle_rel_tol": repr(config.tolerances.oracle_rel_tol),
    }
    parser["output"] = {
        "directory": config.output_dir,
        "formats": " ".join(config.formats),
    }
    with open(path, "w") as fh:
        parser.write(fh)
