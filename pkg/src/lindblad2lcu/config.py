"""Run configuration for the lindblad2lcu cli.

A run is configured by its command line flags plus an optional YAML file of
tolerances and numerical limits. The YAML file is validated with cfgv, and
every key has a default, so an empty mapping (or no file) is valid.
"""

from __future__ import annotations

import argparse
import dataclasses
from importlib import metadata
import logging
import math
from typing import Any
from typing import cast
from typing import TYPE_CHECKING
from typing import TypedDict

from cfgv import apply_defaults
from cfgv import check_type
from cfgv import load_from_filename
from cfgv import Map
from cfgv import Optional
from cfgv import OptionalRecurse
from yaml import safe_load

from lindblad2lcu.pauli import amplitude_damping
from lindblad2lcu.pauli import describe
from lindblad2lcu.pauli import load_spec

if TYPE_CHECKING:
    from os import PathLike

    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

_NUMBER = check_type((int, float), typename="number")
_INT = check_type(int, typename="integer")


class Error(Exception):
    """The top-level class for exceptions generated by this module."""


class InvalidConfigError(Error):
    """An error for invalid config."""


class Tolerances(TypedDict):
    """Absolute tolerances for checks that compare against exact values."""

    lemma1: float
    oaa_exact: float
    probability: float


_TOLERANCES_SCHEMA = Map(
    "Tolerances",
    None,
    Optional("lemma1", _NUMBER, 1e-9),
    Optional("oaa_exact", _NUMBER, 1e-10),
    Optional("probability", _NUMBER, 1e-12),
)


class DiamondSettings(TypedDict):
    """Effort spent refining diamond norm lower bounds."""

    restarts: int
    iterations: int


_DIAMOND_SCHEMA = Map(
    "DiamondSettings",
    None,
    Optional("restarts", _INT, 20),
    Optional("iterations", _INT, 50),
)


class Limits(TypedDict):
    """Guards for end-to-end simulation."""

    max_qubits: int
    max_r: int


_LIMITS_SCHEMA = Map(
    "Limits", None, Optional("max_qubits", _INT, 3), Optional("max_r", _INT, 4096)
)


class Settings(TypedDict):
    """The top-level YAML config dict."""

    tolerances: Tolerances
    diamond: DiamondSettings
    limits: Limits


_SCHEMA = Map(
    "Settings",
    None,
    OptionalRecurse("tolerances", _TOLERANCES_SCHEMA, {}),
    OptionalRecurse("diamond", _DIAMOND_SCHEMA, {}),
    OptionalRecurse("limits", _LIMITS_SCHEMA, {}),
)


def default_settings() -> Settings:
    """The settings used when no config file is given."""
    return cast(Settings, apply_defaults({}, _SCHEMA))


def load_from_path(path: str | PathLike[str]) -> Settings:
    """Load settings from a YAML file.

    Raises:
        InvalidConfigError: If the file does not pass validation.
    """
    settings = cast(
        Settings,
        load_from_filename(path, _SCHEMA, safe_load, exc_tp=InvalidConfigError),
    )
    for section in ("tolerances", "diamond", "limits"):
        for key, value in settings[section].items():  # type: ignore[literal-required]
            if not value > 0 or not math.isfinite(value):
                msg = f"{section}.{key} must be positive and finite, got {value}"
                raise InvalidConfigError(msg)
    return settings


def version() -> str:
    """The installed version, or "unknown" when running from a source tree."""
    try:
        return metadata.version("lindblad2lcu")
    except metadata.PackageNotFoundError:
        return "unknown"


def _list_of(tp: type[float] | type[int], text: str) -> list[Any]:
    try:
        values = [tp(item) for item in text.split(",") if item.strip()]
    except ValueError as ex:
        msg = f"expected a comma-separated list, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from ex
    if not values:
        msg = "expected at least one value"
        raise argparse.ArgumentTypeError(msg)
    return values


def float_list(text: str) -> list[float]:
    """Parses "0.2,0.1,0.05"."""
    return cast("list[float]", _list_of(float, text))


def int_list(text: str) -> list[int]:
    """Parses "4,8,16"."""
    return cast("list[int]", _list_of(int, text))


def add_run_args(parser: argparse.ArgumentParser) -> None:
    """Adds the flags that every subcommand shares."""
    parser.add_argument(
        "--seed", type=int, default=0, help="seed of every random choice (default 0)"
    )
    parser.add_argument(
        "--jobs", type=int, default=1, help="worker processes for sweeps (default 1)"
    )
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="report format"
    )
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument(
        "--schema", action="store_true", help="describe the report columns and exit"
    )
    parser.add_argument("--config", help="YAML file of tolerances and limits")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")


def add_spec_arg(parser: argparse.ArgumentParser) -> None:
    """Adds --spec; without it, commands use amplitude damping."""
    parser.add_argument(
        "--spec", help="JSON Lindbladian spec (default: amplitude damping)"
    )


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything that determines a report.

    Attributes:
        command: The subcommand name.
        spec: The spec path, if any.
        params: The subcommand's numeric parameters, by flag name.
        seed: The root seed.
        jobs: Worker processes.
        format: csv or json.
        out: The report path, or None for stdout.
        settings: Tolerances and limits.
    """

    command: str
    spec: str | None
    params: dict[str, Any]
    seed: int
    jobs: int
    format: str
    out: str | None
    settings: Settings

    @classmethod
    def from_args(cls, args: argparse.Namespace, *params: str) -> RunConfig:
        """Collects a RunConfig from parsed flags.

        Raises:
            InvalidConfigError: If --config fails validation.
        """
        settings = load_from_path(args.config) if args.config else default_settings()
        if args.jobs < 1:
            msg = f"--jobs must be at least 1, got {args.jobs}"
            raise InvalidConfigError(msg)
        return cls(
            command=args.command,
            spec=getattr(args, "spec", None),
            params={name: getattr(args, name) for name in params},
            seed=args.seed,
            jobs=args.jobs,
            format=args.format,
            out=args.out,
            settings=settings,
        )

    def load_spec(self) -> LindbladSpec:
        """The spec named by --spec, or amplitude damping with gamma = 1."""
        spec = amplitude_damping() if self.spec is None else load_spec(self.spec)
        name = self.spec if self.spec is not None else "amplitude_damping"
        _LOG.info("loaded spec %s: %s", name, describe(spec))
        return spec

    def meta(self) -> dict[str, Any]:
        """Report metadata: the config, the version and the tolerances."""
        return {
            "command": self.command,
            "version": version(),
            "spec": self.spec if self.spec is not None else "amplitude_damping",
            "seed": self.seed,
            **{f"param.{k}": v for k, v in self.params.items()},
            **{
                f"{section}.{key}": value
                for section, values in self.settings.items()
                for key, value in values.items()  # type: ignore[attr-defined]
            },
        }
