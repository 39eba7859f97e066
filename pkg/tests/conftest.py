"""
Pytest configuration and fixtures for cn-groups tests
"""

import sys
import pytest
from pathlib import Path

# Add project directory to path
project_dir = Path(__file__).parent.parent
sys.path.insert(0, str(project_dir))

from cn_groups.bounds import Bounds, get_bounds, set_bounds
from cn_groups.catalog import builtin_specs
from cn_groups.constructors import (
    alternating_group,
    c3_times_q8,
    cyclic_group,
    quaternion_group,
    sl23,
    symmetric_group,
)


@pytest.fixture
def project_root():
    """Fixture providing the project root directory"""
    return project_dir


@pytest.fixture
def config_path(project_root):
    """Fixture providing the config file path"""
    return project_root / "config" / "config.yaml"


@pytest.fixture
def catalog_dir(tmp_path):
    """Fixture providing an empty catalog directory"""
    directory = tmp_path / "catalog"
    directory.mkdir()
    return directory


@pytest.fixture
def bounds():
    """Fixture that lets a test tighten bounds; the previous bounds are restored afterwards"""
    previous = get_bounds()

    def apply(**values):
        set_bounds(Bounds().override(**values))

    yield apply
    set_bounds(previous)


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(scope="session")
def s4():
    return symmetric_group(4)


@pytest.fixture(scope="session")
def s5():
    return symmetric_group(5)


@pytest.fixture(scope="session")
def a4():
    return alternating_group(4)


@pytest.fixture(scope="session")
def a5():
    return alternating_group(5)


@pytest.fixture(scope="session")
def q8():
    return quaternion_group(8)


@pytest.fixture(scope="session")
def sl23_group():
    return sl23()


@pytest.fixture(scope="session")
def c3q8():
    return c3_times_q8()


@pytest.fixture(scope="session")
def c12():
    return cyclic_group(12)



@pytest.fixture(scope="session")
def small_catalog():
    """(name, group) for every built-in catalog group of order at most 2000"""
    groups = []
    for spec in builtin_specs():
        G = spec.build()
        if G.order() <= 2000:
            groups.append((spec.name, G))
    return groups
