import numpy as np
import pytest
from fastapi.testclient import TestClient


@pytest.fixture
def rng():
    return np.random.default_rng(seed=20240521)


@pytest.fixture
def client():
    from pure.main import app

    with TestClient(app) as test_client:
        yield test_client
