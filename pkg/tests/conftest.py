import numpy as np
import pytest

from fraclab.quadrature import DEFAULT_CONFIG
from fraclab.specfun import FracParams


@pytest.fixture
def cfg():
    return DEFAULT_CONFIG


@pytest.fixture(params=[(1, 0.25), (1, 0.5), (1, 0.75), (2, 0.5)], ids=lambda p: f"n{p[0]}-s{p[1]}")
def params(request):
    return FracParams.make(*request.param)


def axis(n, r):
    x = np.zeros(n)
    x[0] = r
    return x
