import os
import warnings

import pytest
from hypothesis import HealthCheck, settings

from speiser.corpus import load_manifest

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

warnings.filterwarnings("ignore", message=".*enumeration.*")


@pytest.fixture(scope="session")
def corpus():
    return {e.id: e for e in load_manifest()}


def entry_ids():
    return [e.id for e in load_manifest()]
