from pathlib import Path

import pytest
from hypothesis import settings

from bbt import ground, parse_domain, plan_request_from_domain, refine_tree

settings.register_profile("suite", max_examples=100, derandomize=True)
settings.load_profile("suite")

REPO = Path(__file__).resolve().parent.parent
DOMAINS = REPO / "domains"


@pytest.fixture(scope="session")
def soda_path() -> Path:
    return DOMAINS / "soda.bbt"


@pytest.fixture(scope="session")
def soda_det_path() -> Path:
    return DOMAINS / "soda_deterministic.bbt"


@pytest.fixture(scope="session")
def soda_domain(soda_path):
    return ground(parse_domain(soda_path.read_text(encoding="utf-8")))


@pytest.fixture(scope="session")
def soda_det_domain(soda_det_path):
    return ground(parse_domain(soda_det_path.read_text(encoding="utf-8")))


@pytest.fixture(scope="session")
def planned_det(soda_det_domain):
    return refine_tree(plan_request_from_domain(soda_det_domain))


@pytest.fixture(scope="session")
def planned_stochastic(soda_domain):
    return refine_tree(plan_request_from_domain(soda_domain))
