from functools import lru_cache

import pytest
from hypothesis import settings

from supchev.superalg import build_chevalley_basis

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def basis(family: str):
    return build_chevalley_basis(family)


@pytest.fixture
def cb_sl21():
    return basis("sl(2|1)")


@pytest.fixture
def cb_osp12():
    return basis("osp(1|2)")
