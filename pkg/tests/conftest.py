import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relqubit.lorentz import MomentumLabel  # noqa: E402
from relqubit.state import friis_state  # noqa: E402

P_PLUS = MomentumLabel(1.0, 0.0, 0.0, 1.0)
P_MINUS = MomentumLabel(1.0, 0.0, 0.0, -1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


@pytest.fixture
def friis_quarter():
    return friis_state(math.pi / 4, math.pi / 4, P_PLUS, P_MINUS)
