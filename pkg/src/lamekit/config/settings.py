"""
Settings for lamekit

Loads config/lamekit.yaml, merges the active environment over the base
section and resolves ${VAR} / ${VAR:-default} placeholders.
"""

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger

PROJECT_ROOT = Path(__file__).parents[3]
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "lamekit.yaml"

_ENV_PATTERN = re.compile(r"\$\{([^:}]+)(?::-(.*?))?\}")


@dataclass(frozen=True)
class LameSettings:
    """Lamé spectral-curve construction"""
    max_n: int = 10
    band_edge_tol: float = 1e-9
    numeric_g2: float = 4.0
    numeric_g3: float = 1.0


@dataclass(frozen=True)
class QuadratureSettings:
    """Composite Gauss-Legendre contour integration"""
    nodes: int = 64
    clearance: float = 1e-3
    target_error: float = 1e-11
    max_panels: int = 256
    singular_split: float = 0.5


@dataclass(frozen=True)
class PeriodSettings:
    halphen_ratio: Fraction = Fraction(5, 27)
    lambda1: float = 1.0
    tau_tol: float = 1e-8
    bilinear_tol: float = 1e-9


@dataclass(frozen=True)
class ThetaSettings:
    eps: float = 1e-14
    argument_convention: str = "unscaled"
    sample_box: float = 0.5


@dataclass(frozen=True)
class CoverSettings:
    catalog_path: Path = PROJECT_ROOT / "data" / "covers" / "catalog.json"
    max_degree: int = 3
    max_exponent: int = 3


@dataclass(frozen=True)
class TrackingSettings:
    """MLflow run tracking (off unless enabled in config)"""
    enabled: bool = False
    tracking_uri: str = "file:./mlruns"
    experiment_name: str = "lamekit-checks"
    run_name_prefix: str = "lamekit-check"


@dataclass(frozen=True)
class LamekitSettings:
    """Top-level settings object"""
    environment: str = "development"
    lame: LameSettings = field(default_factory=LameSettings)
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    periods: PeriodSettings = field(default_factory=PeriodSettings)
    theta: ThetaSettings = field(default_factory=ThetaSettings)
    covers: CoverSettings = field(default_factory=CoverSettings)
    tracking: TrackingSettings = field(default_factory=TrackingSettings)
    seed: int = 20240601

    def to_dict(self) -> Dict[str, Any]:
        return {
            "environment": self.environment,
            "lame": vars(self.lame),
            "quadrature": vars(self.quadrature),
            "periods": {**vars(self.periods), "halphen_ratio": str(self.periods.halphen_ratio)},
            "theta": vars(self.theta),
            "covers": {**vars(self.covers), "catalog_path": str(self.covers.catalog_path)},
            "tracking": vars(self.tracking),
            "seed": self.seed,
        }


def _replace_env_vars(config: Any) -> Any:
    """Replace ${VAR} placeholders with environment variables"""
    if isinstance(config, str):
        value = config
        for var_name, default in _ENV_PATTERN.findall(config):
            env_value = os.getenv(var_name, default)
            value = value.replace(f"${{{var_name}}}", env_value)
            if default:
                value = value.replace(f"${{{var_name}:-{default}}}", env_value)
        return value
    if isinstance(config, dict):
        return {k: _replace_env_vars(v) for k, v in config.items()}
    return config


def _merge_sections(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for section, values in override.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section] = {**merged[section], **values}
        else:
            merged[section] = values
    return merged


def load_settings(config_path: Optional[str] = None, environment: Optional[str] = None) -> LamekitSettings:
    """Load settings from YAML, falling back to defaults when the file is absent."""
    environment = environment or os.getenv("LAMEKIT_ENV", "development")
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH

    if not path.exists():
        logger.warning(f"Config file not found: {path}; using built-in defaults")
        return LamekitSettings(environment=environment)

    with open(path, "r") as f:
        raw = yaml.safe_load(f) or {}

    base = raw.get("lamekit", {})
    env_config = raw.get("environments", {}).get(environment, {}) or {}
    merged = _replace_env_vars(_merge_sections(base, env_config))

    periods = dict(merged.get("periods", {}))
    if "halphen_ratio" in periods:
        periods["halphen_ratio"] = Fraction(str(periods["halphen_ratio"]))

    covers = dict(merged.get("covers", {}))
    if "catalog_path" in covers:
        catalog_path = Path(covers["catalog_path"])
        covers["catalog_path"] = catalog_path if catalog_path.is_absolute() else PROJECT_ROOT / catalog_path

    settings = LamekitSettings(
        environment=environment,
        lame=LameSettings(**merged.get("lame", {})),
        quadrature=QuadratureSettings(**merged.get("quadrature", {})),
        periods=PeriodSettings(**periods),
        theta=ThetaSettings(**merged.get("theta", {})),
        covers=CoverSettings(**covers),
        tracking=TrackingSettings(**merged.get("tracking", {})),
        seed=int(merged.get("cli", {}).get("seed", 20240601)),
    )
    logger.debug(f"Loaded lamekit settings from {path} (env: {environment})")
    return settings


@lru_cache(maxsize=1)
def get_settings() -> LamekitSettings:
    """Process-wide settings, loaded once"""
    return load_settings()
