"""Study configuration files: schema, parsing, and bundled studies.

Configs are JSON with four optional blocks plus a required analysis block:

    {
      "geometry":   {"a": f, "b": f, "b1": f, "b3": f},
      "potentials": {"v1": [re, im] | "<slope>", ..., "v4": ...},
      "field":      {"alpha": [re, im] | "<slope>"},
      "basis":      {"nx0": int, "nmax": int},
      "analysis":   {"mode": "spectrum" | "sweep" | "density" | "validate", ...}
    }

Complex values are always two-element [re, im] arrays. In sweep mode an
entry may instead be one of the slope strings "lambda", "-lambda",
"i*lambda", "-i*lambda", marking where the swept parameter enters. Omitted
blocks default to the reference geometry (a = sqrt(3), b = sqrt(2),
boundaries at 0.4 b and 0.6 b), zero potentials, zero field, and
nx0 = 1, nmax = 50. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from stripedbox.model import (
    BoxGeometry,
    SpectralBasisConfig,
    StripePotentials,
    UniformField,
    standard_geometry,
)
from stripedbox.pt_analysis import SweepSpec

SCHEMA_VERSION = 1

MODES = ("spectrum", "sweep", "density", "validate")

_SLOPES = {
    "lambda": 1.0 + 0.0j,
    "-lambda": -1.0 + 0.0j,
    "i*lambda": 1.0j,
    "-i*lambda": -1.0j,
}
_SLOPE_NAMES = {v: k for k, v in _SLOPES.items()}


class ConfigError(ValueError):
    """A study configuration failed validation."""


@dataclass(frozen=True)
class SweepParams:
    lambda_start: float
    lambda_end: float
    steps: int
    plot_branches: int = 3
    refine: bool = True


@dataclass(frozen=True)
class DensityParams:
    level: int  # 1-based, ascending real part
    nx_samples: int = 201
    ny_samples: int = 201


@dataclass(frozen=True)
class ValidateParams:
    e_tol: float = 0.05
    quad_check_tol: float = 1e-8
    levels: int = 5


@dataclass(frozen=True)
class StudyConfig:
    """A fully validated study: inputs plus the analysis to run on them."""

    geometry: BoxGeometry
    base_potentials: StripePotentials
    potential_slopes: tuple[complex, complex, complex, complex]
    base_field: UniformField
    field_slope: complex
    basis: SpectralBasisConfig
    mode: str
    sweep: SweepParams | None = None
    density: DensityParams | None = None
    validate: ValidateParams | None = None

    @property
    def has_sweep_template(self) -> bool:
        return any(s != 0 for s in self.potential_slopes) or self.field_slope != 0

    def sweep_spec(self) -> SweepSpec:
        if self.mode != "sweep" or self.sweep is None:
            raise ConfigError("config is not a sweep study")
        return SweepSpec(
            geometry=self.geometry,
            basis=self.basis,
            base_potentials=self.base_potentials,
            potential_slopes=self.potential_slopes,
            base_field=self.base_field,
            field_slope=self.field_slope,
            lambda_start=self.sweep.lambda_start,
            lambda_end=self.sweep.lambda_end,
            steps=self.sweep.steps,
        )

    def to_mapping(self) -> dict:
        """Render back to the JSON schema; re-parsing yields an equal config."""
        mapping: dict = {
            "geometry": {
                "a": self.geometry.a,
                "b": self.geometry.b,
                "b1": self.geometry.b1,
                "b3": self.geometry.b3,
            },
            "potentials": {
                f"v{i + 1}": _render_entry(self.base_potentials.values[i], self.potential_slopes[i])
                for i in range(4)
            },
            "field": {"alpha": _render_entry(self.base_field.alpha, self.field_slope)},
            "basis": {"nx0": self.basis.nx0, "nmax": self.basis.nmax},
        }
        analysis: dict = {"mode": self.mode}
        if self.sweep is not None:
            analysis.update(
                lambda_start=self.sweep.lambda_start,
                lambda_end=self.sweep.lambda_end,
                steps=self.sweep.steps,
                plot_branches=self.sweep.plot_branches,
                refine=self.sweep.refine,
            )
        if self.density is not None:
            analysis.update(
                level=self.density.level,
                nx_samples=self.density.nx_samples,
                ny_samples=self.density.ny_samples,
            )
        if self.validate is not None:
            analysis.update(
                e_tol=self.validate.e_tol,
                quad_check_tol=self.validate.quad_check_tol,
                levels=self.validate.levels,
            )
        mapping["analysis"] = analysis
        return mapping


def _render_entry(base: complex, slope: complex):
    if slope != 0:
        return _SLOPE_NAMES[slope]
    return [base.real, base.imag]


def _check_keys(block, allowed: set[str], context: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{context} must be a JSON object")
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {context}: {', '.join(sorted(unknown))}")


def _number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{context} must be a number, got {value!r}")
    return float(value)


def _integer(value, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{context} must be an integer, got {value!r}")
    return value


def _complex_entry(value, context: str) -> tuple[complex, complex]:
    """Parse an entry into (base, slope); exactly one of them is nonzero."""
    if isinstance(value, str):
        if value not in _SLOPES:
            raise ConfigError(
                f"{context}: unknown template {value!r}; allowed: {', '.join(sorted(_SLOPES))}"
            )
        return 0j, _SLOPES[value]
    if isinstance(value, list) and len(value) == 2:
        re = _number(value[0], f"{context}[0]")
        im = _number(value[1], f"{context}[1]")
        return complex(re, im), 0j
    raise ConfigError(f"{context} must be a [re, im] pair or a lambda-template string")


def parse_study_config(mapping: dict) -> StudyConfig:
    """Validate a parsed JSON mapping into a StudyConfig.

    Raises ConfigError on unknown keys, malformed values, or invariant
    violations (delegating geometry/basis checks to the domain types).
    """
    if not isinstance(mapping, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(mapping, {"geometry", "potentials", "field", "basis", "analysis"}, "config")

    geo_block = mapping.get("geometry", {})
    _check_keys(geo_block, {"a", "b", "b1", "b3"}, "geometry")
    if geo_block:
        defaults = standard_geometry()
        try:
            geometry = BoxGeometry(
                a=_number(geo_block.get("a", defaults.a), "geometry.a"),
                b=_number(geo_block.get("b", defaults.b), "geometry.b"),
                b1=_number(geo_block.get("b1", defaults.b1), "geometry.b1"),
                b3=_number(geo_block.get("b3", defaults.b3), "geometry.b3"),
            )
        except ValueError as exc:
            raise ConfigError(f"geometry: {exc}") from exc
    else:
        geometry = standard_geometry()

    pot_block = mapping.get("potentials", {})
    _check_keys(pot_block, {"v1", "v2", "v3", "v4"}, "potentials")
    bases = []
    slopes = []
    for name in ("v1", "v2", "v3", "v4"):
        base, slope = _complex_entry(pot_block.get(name, [0.0, 0.0]), f"potentials.{name}")
        bases.append(base)
        slopes.append(slope)
    base_potentials = StripePotentials(*bases)
    potential_slopes = tuple(slopes)

    field_block = mapping.get("field", {})
    _check_keys(field_block, {"alpha"}, "field")
    alpha_base, alpha_slope = _complex_entry(field_block.get("alpha", [0.0, 0.0]), "field.alpha")
    base_field = UniformField(alpha_base)

    basis_block = mapping.get("basis", {})
    _check_keys(basis_block, {"nx0", "nmax"}, "basis")
    try:
        basis = SpectralBasisConfig(
            nx0=_integer(basis_block.get("nx0", 1), "basis.nx0"),
            nmax=_integer(basis_block.get("nmax", 50), "basis.nmax"),
        )
    except ValueError as exc:
        raise ConfigError(f"basis: {exc}") from exc

    if "analysis" not in mapping:
        raise ConfigError("config requires an analysis block")
    analysis = mapping["analysis"]
    if not isinstance(analysis, dict) or "mode" not in analysis:
        raise ConfigError("analysis block requires a mode")
    mode = analysis["mode"]
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")

    templated = any(s != 0 for s in potential_slopes) or alpha_slope != 0
    sweep = density = validate = None

    if mode == "sweep":
        _check_keys(
            analysis,
            {"mode", "lambda_start", "lambda_end", "steps", "plot_branches", "refine"},
            "analysis",
        )
        for key in ("lambda_start", "lambda_end", "steps"):
            if key not in analysis:
                raise ConfigError(f"sweep mode requires analysis.{key}")
        if not templated:
            raise ConfigError(
                "sweep mode requires a lambda template in potentials or field"
            )
        refine = analysis.get("refine", True)
        if not isinstance(refine, bool):
            raise ConfigError("analysis.refine must be a boolean")
        sweep = SweepParams(
            lambda_start=_number(analysis["lambda_start"], "analysis.lambda_start"),
            lambda_end=_number(analysis["lambda_end"], "analysis.lambda_end"),
            steps=_integer(analysis["steps"], "analysis.steps"),
            plot_branches=_integer(analysis.get("plot_branches", 3), "analysis.plot_branches"),
            refine=refine,
        )
        if not sweep.lambda_start < sweep.lambda_end:
            raise ConfigError("analysis.lambda_start must be below analysis.lambda_end")
        if sweep.steps < 2:
            raise ConfigError("analysis.steps must be at least 2")
        if sweep.plot_branches < 1:
            raise ConfigError("analysis.plot_branches must be positive")
    else:
        if templated:
            raise ConfigError(f"lambda templates are only valid in sweep mode, not {mode!r}")

    if mode == "density":
        _check_keys(analysis, {"mode", "level", "nx_samples", "ny_samples"}, "analysis")
        if "level" not in analysis:
            raise ConfigError("density mode requires analysis.level")
        density = DensityParams(
            level=_integer(analysis["level"], "analysis.level"),
            nx_samples=_integer(analysis.get("nx_samples", 201), "analysis.nx_samples"),
            ny_samples=_integer(analysis.get("ny_samples", 201), "analysis.ny_samples"),
        )
        if density.level < 1 or density.level > basis.nmax:
            raise ConfigError(
                f"analysis.level must be in 1..nmax={basis.nmax}, got {density.level}"
            )
        if density.nx_samples < 2 or density.ny_samples < 2:
            raise ConfigError("density grids need at least 2 samples per axis")

    if mode == "validate":
        _check_keys(analysis, {"mode", "e_tol", "quad_check_tol", "levels"}, "analysis")
        validate = ValidateParams(
            e_tol=_number(analysis.get("e_tol", 0.05), "analysis.e_tol"),
            quad_check_tol=_number(analysis.get("quad_check_tol", 1e-8), "analysis.quad_check_tol"),
            levels=_integer(analysis.get("levels", 5), "analysis.levels"),
        )
        if validate.e_tol <= 0 or validate.quad_check_tol <= 0 or validate.levels < 1:
            raise ConfigError("validate tolerances must be positive and levels >= 1")

    if mode == "spectrum":
        _check_keys(analysis, {"mode"}, "analysis")

    return StudyConfig(
        geometry=geometry,
        base_potentials=base_potentials,
        potential_slopes=potential_slopes,
        base_field=base_field,
        field_slope=alpha_slope,
        basis=basis,
        mode=mode,
        sweep=sweep,
        density=density,
        validate=validate,
    )


def load_study_config(path: str | Path) -> StudyConfig:
    """Load and validate a config from a JSON file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        return parse_study_config(mapping)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def bundled_config_names() -> list[str]:
    """Names of the studies shipped with the package."""
    root = resources.files("stripedbox") / "configs"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_config_path(name: str) -> Path:
    """Filesystem path of a bundled study config by bare name."""
    candidate = resources.files("stripedbox") / "configs" / f"{name}.json"
    if not candidate.is_file():
        raise ConfigError(
            f"no bundled config named {name!r}; available: {', '.join(bundled_config_names())}"
        )
    return Path(str(candidate))


def resolve_config(spec: str | Path) -> StudyConfig:
    """Load a config from a filesystem path, or by bundled name if no such file."""
    path = Path(spec)
    if path.exists():
        return load_study_config(path)
    if isinstance(spec, str) and "/" not in spec and not spec.endswith(".json"):
        return load_study_config(bundled_config_path(spec))
    raise ConfigError(f"config file not found: {spec}")
