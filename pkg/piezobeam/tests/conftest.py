"""Pytest configuration and fixtures."""

import json
import sys
import pytest
from dataclasses import replace
from pathlib import Path

# Add the repository root to path
package_dir = Path(__file__).parent.parent
sys.path.insert(0, str(package_dir.parent))

from typer.testing import CliRunner
from piezobeam.services.materials import default_materials_path, load_materials, reduce
from piezobeam.services.section import Layup, section_properties
from piezobeam.utils.performance import clear_cache

H1 = 200e-6
H2 = 500e-6
LENGTH = 6e-3


@pytest.fixture(autouse=True)
def fresh_cache():
    """Start every test with an empty solution cache."""
    clear_cache()
    yield
    clear_cache()


@pytest.fixture(scope="session")
def materials():
    """Shipped material table (PZT-5A on glass)."""
    return load_materials(default_materials_path())


@pytest.fixture(scope="session")
def layup(materials):
    """Reference layup: 200 um PZT-5A on 500 um glass, L = 6 mm."""
    return Layup(
        piezo=reduce(materials["PZT-5A"], H1),
        substrate=reduce(materials["glass"], H2),
        length=LENGTH,
    )


@pytest.fixture(scope="session")
def section(layup):
    return section_properties(layup)


@pytest.fixture(scope="session")
def inert_layup(layup):
    """Same layup with the piezoelectric coupling switched off (F = 0)."""
    return replace(layup, piezo=replace(layup.piezo, ebar31=0.0))


@pytest.fixture(scope="session")
def classical_section(inert_layup):
    """Section of the uncoupled layup with rotary inertia and eta1 removed."""
    return replace(section_properties(inert_layup), rho2=0.0, eta1=0.0)


@pytest.fixture
def run_config_data():
    """Minimal valid run configuration dictionary."""
    return {
        "piezo": "PZT-5A",
        "substrate": "glass",
        "h1": H1,
        "h2": H2,
        "length": LENGTH,
        "modes": [1, 3, 5],
    }


@pytest.fixture
def write_config(tmp_path):
    """Write a run configuration to a temporary JSON file and return its path."""
    def _write(data, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def runner():
    """Typer CLI test runner."""
    return CliRunner()
