import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_blob_mask(rng, h=24, w=24, fill=0.45):
    """Random mask dominated by one or a few blobs (smoothed noise)."""
    from scipy import ndimage

    noise = ndimage.uniform_filter(rng.random((h, w)), size=3)
    return noise > np.quantile(noise, 1 - fill)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
