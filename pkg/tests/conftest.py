import math

import numpy as np
import pytest
from hypothesis import strategies as st

from jcwaveguide.core import SystemParams

STRONG = SystemParams(0.0, 0.0, math.sqrt(5.0), 1.0)
WEAK = SystemParams(0.0, 0.0, 1 / math.sqrt(5.0), 1.0)
REFERENCE = SystemParams(0.0, 0.0, 1.0, 2.0)

rates = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def system_params(draw, lossy=True, min_g=0.0):
    return SystemParams(
        omega=draw(rates),
        Omega_a=draw(rates),
        # couplings below 1e-150 push s_a = -sqrt(kappa)/g past the float range
        g=draw(st.just(0.0) | st.floats(max(min_g, 1e-150), 5)) if min_g == 0 else draw(st.floats(min_g, 5)),
        kappa=draw(st.floats(0.1, 5)),
        gamma=draw(st.floats(0, 1)) if lossy else 0.0,
    )


def setwise_distance(a, b):
    a, b = list(a), list(b)
    return min(max(abs(a[0] - b[0]), abs(a[1] - b[1])), max(abs(a[0] - b[1]), abs(a[1] - b[0])))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
