from functools import lru_cache

import pytest
from hypothesis import settings

from selfrecovery.model_core import DampingLaw, InertiaParams, PDGains, RampProfile
from selfrecovery.rigid_sim import RigidRunConfig, simulate_rigid

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FIG_INERTIAS = InertiaParams(0.0625, 0.625)


@lru_cache(maxsize=None)
def rigid_run(k_raw: float = 1.0, c0: float = 100.0, c1: float = 100.0, rate: float = 2.0,
              stop: float = 10.0, end: float = 40.0, rtol: float = 1e-9, sps: float = 200.0):
    law = DampingLaw.raw_constant(k_raw)
    cfg = RigidRunConfig(FIG_INERTIAS, law, PDGains(c0, c1), RampProfile(rate, stop), end,
                         rtol=rtol, samples_per_second=sps)
    return simulate_rigid(cfg)


@pytest.fixture
def boundedness_trace():
    """High-gain run with raw k = 1: bounded near -0.125 rad, then recovers."""
    return rigid_run()


@pytest.fixture
def undamped_trace():
    return rigid_run(k_raw=0.0, stop=5.0, end=20.0)
