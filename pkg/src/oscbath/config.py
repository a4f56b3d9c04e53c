"""Flat key-value configuration files and run manifests.

The config format is one ``key = value`` per line, ``#`` starts a comment,
unknown keys are rejected by name.  A run manifest echoes the fully resolved
configuration as plain key-value lines (metadata lives in comment lines), so
a manifest file is itself a valid ``--config`` input that reproduces the run
bitwise.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .bath import DISCRETIZATIONS, PAPER_EQ44, BathSpec, SystemParams
from .errors import ConfigError
from .io import format_float

_FLOAT_KEYS = ("omega0", "hbar", "lambda_q", "lambda_b", "omega_c",
               "lambda_q_prime", "dt", "t_end", "q0", "qdot0")
_INT_KEYS = ("n_modes", "seed", "sample_count")
_STR_KEYS = ("discretization",)
KNOWN_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS


@dataclass(frozen=True)
class ConfigDocument:
    """Resolved run configuration."""

    omega0: float = 1.0
    hbar: float = 0.01
    lambda_q: float = 0.5
    lambda_b: float = 0.5
    n_modes: int = 100
    omega_c: float = 1.5
    lambda_q_prime: float | None = None  # default 2 * omega0 * lambda_q
    discretization: str | None = None    # default chosen per command
    seed: int = 0
    dt: float = 1e-3
    t_end: float = 10.0
    q0: float = 1.0
    qdot0: float = 0.0
    sample_count: int = 10000

    def resolved(self, default_discretization: str = PAPER_EQ44) -> "ConfigDocument":
        """Fill in the derived defaults and validate every value."""
        doc = self
        if doc.lambda_q_prime is None:
            doc = replace(doc, lambda_q_prime=2.0 * doc.omega0 * doc.lambda_q)
        if doc.discretization is None:
            doc = replace(doc, discretization=default_discretization)
        doc.validate()
        return doc

    def validate(self) -> None:
        from .errors import InvalidSpec

        try:
            self.system_params()
            if self.lambda_q_prime is not None:
                BathSpec(
                    n_modes=self.n_modes,
                    omega_c=self.omega_c,
                    lambda_q_prime=self.lambda_q_prime,
                    discretization=self.discretization or PAPER_EQ44,
                    seed=self.seed,
                )
        except InvalidSpec as exc:
            raise ConfigError(str(exc)) from exc
        if self.discretization is not None and self.discretization not in DISCRETIZATIONS:
            raise ConfigError(
                f"discretization must be one of {DISCRETIZATIONS}, "
                f"got {self.discretization!r}"
            )
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.sample_count < 1:
            raise ConfigError(f"sample_count must be >= 1, got {self.sample_count}")

    def system_params(self) -> SystemParams:
        return SystemParams(
            omega0=self.omega0,
            hbar=self.hbar,
            lambda_q=self.lambda_q,
            lambda_b=self.lambda_b,
        )

    def bath_spec(self) -> BathSpec:
        if self.lambda_q_prime is None or self.discretization is None:
            raise ConfigError("config not resolved; call resolved() first")
        return BathSpec(
            n_modes=self.n_modes,
            omega_c=self.omega_c,
            lambda_q_prime=self.lambda_q_prime,
            discretization=self.discretization,
            seed=self.seed,
        )

    def to_text(self) -> str:
        lines = []
        for key in KNOWN_KEYS:
            value = getattr(self, key)
            if value is None:
                continue
            if key in _INT_KEYS:
                lines.append(f"{key} = {int(value)}")
            elif key in _STR_KEYS:
                lines.append(f"{key} = {value}")
            else:
                lines.append(f"{key} = {format_float(value)}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str, source: str = "<config>") -> ConfigDocument:
    """Parse config text; unknown keys and malformed values are errors."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    return ConfigDocument(**values)


def load_config(path) -> ConfigDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written before any other output of a run."""

    command: str
    config: ConfigDocument
    outputs: tuple[str, ...]
    derived: dict[str, str]

    def to_text(self) -> str:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        lines = [
            "# oscbath run manifest",
            f"# command = {self.command}",
            f"# version = {__version__}",
            f"# timestamp = {timestamp}",
            f"# outputs = {', '.join(self.outputs)}",
        ]
        for key, value in self.derived.items():
            lines.append(f"# derived {key} = {value}")
        lines.append("# resolved configuration (reusable as --config):")
        lines.append(self.config.to_text().rstrip("\n"))
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())
