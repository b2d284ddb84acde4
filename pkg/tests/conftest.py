import numpy as np
import pytest

from rhmsp.model import KernelVariant, ProcessSpec, StabilityIndex, parse_hurst


def make_spec(alpha=1.5, hurst="const:0.5", kernel="X", horizon=4.0):
    return ProcessSpec(alpha=StabilityIndex(alpha),
                       hurst=parse_hurst(hurst, horizon),
                       kernel=KernelVariant(kernel),
                       horizon=horizon)


@pytest.fixture
def default_spec():
    return make_spec()
