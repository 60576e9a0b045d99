import numpy as np
import pytest

from rankmetric import families as fam
from rankmetric.gf import build_context


@pytest.fixture(scope="session")
def ctx25():
    return build_context(2, 1, 5)


@pytest.fixture(scope="session")
def ctx24():
    return build_context(2, 1, 4)


@pytest.fixture(scope="session")
def ctx34():
    return build_context(3, 1, 4)


@pytest.fixture(scope="session")
def ctx35():
    return build_context(3, 1, 5)


@pytest.fixture(scope="session")
def ctx52():
    return build_context(5, 1, 2)


@pytest.fixture(scope="session")
def fixture_codes():
    """The 12 reference-table codes at their default parameters."""
    out = {}
    for tag in fam.TAGS:
        spec = fam.default_spec(tag)
        ctx, code = spec.build()
        out[tag] = (spec, ctx, code)
    return out


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
