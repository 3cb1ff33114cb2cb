"""
Run configuration: a YAML document validated into a ``RunConfig``.

Angles are given in degrees and complex material values as numbers, strings
such as ``"2.25+0.1i"`` or ``[re, im]`` pairs.
"""
import math
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

import numpy as np
import pydantic
from pydantic import AfterValidator, BaseModel, BeforeValidator, ConfigDict, Field

from .core import Polarization
from .designer import (
    DesignMode,
    DesignSpec,
    ParabolicQ,
    SinusoidalQ,
    sinusoidal_design,
    synthesize,
)
from .exceptions import GrazingIncidence, ValidationError
from .profiles import (
    BumpProfile,
    HomogeneousSlab,
    LayerStack,
    LinearRamp,
    load_profile_table,
)
from .settings import Settings, solver_settings
from .utils import parse_complex, sorted_methods
from .xcheck import METHODS, random_profile
from .yaml import key_line, load_mapping


def _to_complex(value):
    try:
        return parse_complex(value)
    except TypeError as exc:
        raise ValueError(str(exc))


ComplexValue = Annotated[Any, BeforeValidator(_to_complex)]


def _check_angle(theta_deg):
    if abs(math.cos(math.radians(theta_deg))) < solver_settings.GRAZING_COS:
        raise GrazingIncidence(math.radians(theta_deg))
    return theta_deg


AngleDeg = Annotated[float, AfterValidator(_check_angle)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SweepConfig(StrictModel):
    start: float
    stop: float
    num: int = Field(ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @pydantic.model_validator(mode="after")
    def check_bounds(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("Sweep bounds must be finite")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ValueError("Log-spaced sweeps need positive bounds")
        return self

    def values(self):
        if self.num == 1:
            return [self.start]
        if self.spacing == "log":
            points = np.geomspace(self.start, self.stop, self.num)
        else:
            points = np.linspace(self.start, self.stop, self.num)
        return [float(v) for v in points]


class HomogeneousConfig(StrictModel):
    family: Literal["homogeneous"]
    eps_hat: ComplexValue
    mu_hat: ComplexValue = 1.0
    a: float = 0.0
    ell: float = Field(1.0, gt=0)

    def build(self, polarization, seed=None):
        return HomogeneousSlab(self.eps_hat, self.mu_hat, a=self.a, ell=self.ell)


class RampConfig(StrictModel):
    family: Literal["ramp"]
    eps_start: ComplexValue
    eps_stop: ComplexValue
    mu_start: ComplexValue = 1.0
    mu_stop: ComplexValue = 1.0
    a: float = 0.0
    ell: float = Field(1.0, gt=0)

    def build(self, polarization, seed=None):
        return LinearRamp(
            self.eps_start,
            self.eps_stop,
            mu_start=self.mu_start,
            mu_stop=self.mu_stop,
            a=self.a,
            ell=self.ell,
        )


class StackConfig(StrictModel):
    family: Literal["stack"]
    thicknesses: List[float] = Field(min_length=1)
    eps_hats: List[ComplexValue]
    mu_hats: Optional[List[ComplexValue]] = None
    a: float = 0.0

    @pydantic.model_validator(mode="after")
    def check_layers(self):
        if any(not t > 0 for t in self.thicknesses):
            raise ValueError("Layer thicknesses must be positive")
        counts = {len(self.thicknesses), len(self.eps_hats)}
        if self.mu_hats is not None:
            counts.add(len(self.mu_hats))
        if len(counts) != 1:
            raise ValueError("Every layer needs a thickness and material values")
        return self

    def build(self, polarization, seed=None):
        return LayerStack(self.thicknesses, self.eps_hats, self.mu_hats, a=self.a)


class TableConfig(StrictModel):
    family: Literal["table"]
    path: str
    a: Optional[float] = None

    def build(self, polarization, seed=None):
        return load_profile_table(self.path, a=self.a)


class BumpConfig(StrictModel):
    amplitude: ComplexValue
    center: float
    width: float = Field(gt=0)


class BumpsConfig(StrictModel):
    family: Literal["bumps"]
    a: float = 0.0
    ell: float = Field(1.0, gt=0)
    eps_bumps: List[BumpConfig] = []
    mu_bumps: List[BumpConfig] = []

    def build(self, polarization, seed=None):
        return BumpProfile(
            self.a,
            self.ell,
            eps_bumps=[(b.amplitude, b.center, b.width) for b in self.eps_bumps],
            mu_bumps=[(b.amplitude, b.center, b.width) for b in self.mu_bumps],
        )


class RandomConfig(StrictModel):
    family: Literal["random"]
    seed: Optional[int] = None
    a: float = 0.0
    ell: float = Field(1.0, gt=0)
    magnetic: bool = False
    lossy: bool = True

    def build(self, polarization, seed=None):
        if self.seed is not None:
            seed = self.seed
        return random_profile(
            seed, a=self.a, ell=self.ell, magnetic=self.magnetic, lossy=self.lossy
        )


class DesignConfig(StrictModel):
    family: Literal["parabolic", "sinusoidal"]
    kappa_ell: Optional[float] = Field(None, gt=0)
    z: Optional[ComplexValue] = None
    n: int = Field(1, ge=1)
    ell: float = Field(1.0, gt=0)
    a: float = 0.0
    k_star: Optional[float] = Field(None, gt=0)
    theta_star_deg: AngleDeg = 180.0
    mode: DesignMode = DesignMode.TE_NONMAGNETIC
    given: ComplexValue = 1.0
    branch: Optional[Literal[1, -1]] = None
    nodes: Optional[int] = Field(None, ge=2)

    @pydantic.model_validator(mode="after")
    def check_family(self):
        if self.family == "parabolic":
            if self.kappa_ell is None or self.k_star is None:
                raise ValueError("The parabolic design needs kappa_ell and k_star")
        elif self.z is None:
            raise ValueError("The sinusoidal design needs z")
        return self

    def spec(self, polarization):
        theta_star = math.radians(self.theta_star_deg)
        if self.family == "parabolic":
            q = ParabolicQ(self.kappa_ell / self.ell, self.ell, a=self.a)
        elif self.k_star is None:
            base = sinusoidal_design(self.z, self.n, self.ell, theta_star, a=self.a)
            return DesignSpec(
                base.q, base.k_star, theta_star, self.mode, polarization, self.given
            )
        else:
            q = SinusoidalQ(self.z, self.n, self.ell, a=self.a)
        return DesignSpec(
            q, self.k_star, theta_star, self.mode, polarization, self.given
        )


class DesignedConfig(StrictModel):
    family: Literal["designed"]
    design: DesignConfig

    def build(self, polarization, seed=None):
        return synthesize(self.design.spec(polarization), branch=self.design.branch)


ProfileConfig = Annotated[
    Union[
        HomogeneousConfig,
        RampConfig,
        StackConfig,
        TableConfig,
        BumpsConfig,
        RandomConfig,
        DesignedConfig,
    ],
    Field(discriminator="family"),
]


def _default_kappa_sweep():
    return SweepConfig(start=0.01, stop=50.0, num=60, spacing="log")


class FigureConfig(StrictModel):
    kappa_ell: SweepConfig = Field(default_factory=_default_kappa_sweep)
    k_star_ell: List[float] = Field([1.0, 5.0, 20.0], min_length=1)
    theta_star_deg: AngleDeg = 180.0

    @pydantic.field_validator("k_star_ell")
    def check_k_star_ell(cls, value):
        if any(not (v > 0 and math.isfinite(v)) for v in value):
            raise ValueError("k_star_ell values must be positive and finite")
        return value


class OutputConfig(StrictModel):
    path: Optional[str] = None
    format: Literal["csv", "json", "yaml"] = "csv"


class RunConfig(StrictModel):
    command: Literal["scatter", "design", "xcheck", "figure"]
    polarization: Polarization = Polarization.TE
    profile: Optional[ProfileConfig] = None
    k: Optional[float] = Field(None, gt=0)
    k_sweep: Optional[SweepConfig] = None
    theta_deg: Optional[AngleDeg] = None
    theta_sweep: Optional[SweepConfig] = None
    methods: Optional[List[str]] = None
    rtol: float = Field(default_factory=lambda: Settings.defaults["RTOL"], gt=0)
    atol: float = Field(default_factory=lambda: Settings.defaults["ATOL"], gt=0)
    n_slices: Optional[int] = Field(None, ge=1)
    tolerance: Optional[float] = Field(None, gt=0)
    design: Optional[DesignConfig] = None
    figure: Optional[FigureConfig] = None
    output: OutputConfig = Field(default_factory=OutputConfig)
    seed: Optional[int] = None
    threads: Optional[int] = Field(None, ge=1)
    settings: Dict[str, float] = {}

    @pydantic.field_validator("polarization", mode="before")
    def upper_polarization(cls, value):
        if isinstance(value, str):
            return value.upper()
        return value

    @pydantic.field_validator("methods")
    def check_methods(cls, value):
        if value is None:
            return value
        unknown = [m for m in value if m not in METHODS]
        if unknown:
            raise ValueError(
                "Unknown method(s) {}, expected some of {}".format(
                    ", ".join(unknown), ", ".join(METHODS)
                )
            )
        if not value:
            raise ValueError("At least one method is needed")
        return sorted_methods(set(value))

    @pydantic.field_validator("settings")
    def check_settings(cls, value):
        unknown = sorted(set(value) - set(Settings.defaults))
        if unknown:
            raise ValueError("Unknown settings: {}".format(", ".join(unknown)))
        return value

    @pydantic.model_validator(mode="after")
    def check_command(self):
        if self.command in ("scatter", "xcheck"):
            if self.profile is None:
                raise ValueError("The {} command needs a profile".format(self.command))
            if (self.k is None) == (self.k_sweep is None):
                raise ValueError("Give exactly one of k and k_sweep")
            if any(not k > 0 for k in self.wavenumbers()):
                raise ValueError("Wavenumbers must be positive")
            if self.theta_deg is not None and self.theta_sweep is not None:
                raise ValueError("Give at most one of theta_deg and theta_sweep")
            if self.theta_sweep is not None:
                for theta_deg in self.theta_sweep.values():
                    _check_angle(theta_deg)
            if self.methods is None:
                if self.command == "scatter":
                    self.methods = ["riccati"]
                else:
                    self.methods = sorted_methods(METHODS)
            if self.command == "xcheck" and len(self.methods) < 2:
                raise ValueError("Cross-validation needs at least two methods")
        elif self.command == "design":
            if self.design is None:
                raise ValueError("The design command needs a design block")
        elif self.figure is None:
            self.figure = FigureConfig()
        return self

    def wavenumbers(self):
        if self.k_sweep is not None:
            return self.k_sweep.values()
        return [self.k]

    def angles_deg(self):
        if self.theta_sweep is not None:
            return self.theta_sweep.values()
        if self.theta_deg is None:
            return [0.0]
        return [self.theta_deg]

    def build_profile(self):
        try:
            return self.profile.build(self.polarization, seed=self.seed)
        except ValueError as exc:
            raise ValidationError(str(exc), field="profile")

    def build_design(self):
        try:
            return self.design.spec(self.polarization)
        except ValueError as exc:
            raise ValidationError(str(exc), field="design")

    def build_designed_profile(self, spec):
        try:
            return synthesize(spec, branch=self.design.branch)
        except ValueError as exc:
            raise ValidationError(str(exc), field="design")


def _merge(data, overrides):
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            _merge(data[key], value)
        else:
            data[key] = value
    return data


def parse_config(text, command=None, overrides=None):
    """
    Validate a YAML document into a RunConfig. ``command`` and
    ``overrides`` come from the command line and win over the document.
    """
    data = load_mapping(text)
    if command is not None:
        existing = data.get("command")
        if existing is not None and existing != command:
            raise ValidationError(
                "config is for {!r}, not {!r}".format(existing, command),
                field="command",
                line=key_line(text, ["command"]),
            )
        data["command"] = command
    if overrides:
        _merge(data, overrides)

    try:
        return RunConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        error = exc.errors()[0]
        loc = error["loc"]
        raise ValidationError(
            error["msg"],
            field=".".join(str(part) for part in loc) or None,
            line=key_line(text, loc),
        )
