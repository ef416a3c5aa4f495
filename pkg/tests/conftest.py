"""
Shared fixtures: the small models are built once per session
"""

import pytest

from src.models import build_model
from src.semantics import default_structures, harness_language


@pytest.fixture(scope="session")
def bool2():
    return build_model("bool2")


@pytest.fixture(scope="session")
def trop8():
    return build_model("trop:8")


@pytest.fixture(scope="session")
def rel2():
    return build_model("rel:2")


@pytest.fixture(scope="session")
def rel22():
    return build_model("rel:2,2")


@pytest.fixture(scope="session")
def rel21():
    return build_model("rel:2,1")


@pytest.fixture(scope="session")
def cyclic3():
    return build_model("cyclic:3")


@pytest.fixture(scope="session")
def lang():
    return harness_language()


@pytest.fixture(scope="session")
def structures(lang):
    return default_structures(lang)
