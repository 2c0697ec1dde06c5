from collections.abc import Callable

import numpy as np
import pytest

from gfdiv.config import get_settings
from gfdiv.core.models import SolverOpts
from gfdiv.core.probcore import Dist
from gfdiv.generators import AdmissiblePair, lookup_generator, lookup_transform, make_pair


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20_240_601)


@pytest.fixture
def fast_opts() -> SolverOpts:
    return SolverOpts(restarts=3, max_iters=3000)


@pytest.fixture
def pair() -> Callable[..., AdmissiblePair]:
    def build(g: str, f: str, g_params: dict | None = None, **f_params: float) -> AdmissiblePair:
        return make_pair(lookup_transform(g, **(g_params or {})), lookup_generator(f, **f_params))

    return build


@pytest.fixture
def random_dist(rng: np.random.Generator) -> Callable[[int], Dist]:
    def draw(n: int) -> Dist:
        return Dist(rng.dirichlet(np.ones(n)))

    return draw
