"""
Tests for YAML settings loading.
"""

import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.config.settings import DEFAULT_CONFIG_PATH, PROJECT_ROOT, LamekitSettings, load_settings

CONFIG = """
lamekit:
  periods:
    halphen_ratio: "5/27"
  theta:
    eps: 1.0e-12
  covers:
    catalog_path: "${LAMEKIT_TEST_CATALOG:-data/covers/catalog.json}"
  tracking:
    tracking_uri: "${LAMEKIT_TEST_URI}"
  quadrature:
    max_panels: 256
  cli:
    seed: 7

environments:
  ci:
    quadrature:
      max_panels: 512
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "lamekit.yaml"
    path.write_text(CONFIG)
    return path


class TestLoadSettings:
    """Test settings resolution."""

    def test_shipped_config(self):
        settings = load_settings(str(DEFAULT_CONFIG_PATH), environment="development")
        assert settings.theta.eps == 1e-14
        assert settings.theta.argument_convention == "unscaled"
        assert settings.periods.halphen_ratio == Fraction(5, 27)
        assert settings.seed == 20240601

    def test_values(self, config_file, monkeypatch):
        monkeypatch.setenv("LAMEKIT_TEST_URI", "file:/tmp/runs")
        settings = load_settings(str(config_file), environment="development")
        assert settings.theta.eps == 1e-12
        assert settings.seed == 7
        assert settings.tracking.tracking_uri == "file:/tmp/runs"

    def test_default_placeholder(self, config_file, monkeypatch):
        monkeypatch.delenv("LAMEKIT_TEST_CATALOG", raising=False)
        settings = load_settings(str(config_file), environment="development")
        assert settings.covers.catalog_path == PROJECT_ROOT / "data" / "covers" / "catalog.json"

    def test_absolute_catalog_path(self, config_file, monkeypatch, tmp_path):
        monkeypatch.setenv("LAMEKIT_TEST_CATALOG", str(tmp_path / "mine.json"))
        settings = load_settings(str(config_file), environment="development")
        assert settings.covers.catalog_path == Path(tmp_path / "mine.json")

    def test_environment_merge(self, config_file):
        assert load_settings(str(config_file), environment="ci").quadrature.max_panels == 512
        assert load_settings(str(config_file), environment="development").quadrature.max_panels == 256

    def test_environment_from_variable(self, config_file, monkeypatch):
        monkeypatch.setenv("LAMEKIT_ENV", "ci")
        settings = load_settings(str(config_file))
        assert settings.environment == "ci"
        assert settings.quadrature.max_panels == 512

    def test_missing_file(self, tmp_path):
        settings = load_settings(str(tmp_path / "absent.yaml"), environment="development")
        assert settings == LamekitSettings(environment="development")

    def test_to_dict(self):
        data = LamekitSettings().to_dict()
        assert data["periods"]["halphen_ratio"] == "5/27"
        assert isinstance(data["covers"]["catalog_path"], str)
