import numpy as np
import pytest

from polarshort import GaParams, build_profile


@pytest.fixture(scope="session")
def profile8():
    return build_profile(8, GaParams(design_snr_db=0.0))


@pytest.fixture(scope="session")
def profile_cache():
    cache = {}

    def get(n, design_snr_db=0.0):
        key = (n, design_snr_db)
        if key not in cache:
            cache[key] = build_profile(n, GaParams(design_snr_db=design_snr_db))
        return cache[key]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
