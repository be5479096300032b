import os

import numpy as np
import pytest

os.environ.setdefault("CELERY_TASK_ALWAYS_EAGER", "1")
os.environ.setdefault("CELERY_BROKER_URL", "memory://")
os.environ.setdefault("GERBE_PARALLEL", "local")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def make_rng():
    def factory(seed):
        return np.random.default_rng(seed)

    return factory
