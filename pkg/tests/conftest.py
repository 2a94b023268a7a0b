"""Configuration pytest: algèbres construites une fois par session, Celery en eager."""
import os

# Avant tout import de app.*: les tâches tournent dans le process de test
os.environ["AFFVIR_EAGER"] = "true"

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402

from app.algebra.affine_virasoro import AffineVirasoro  # noqa: E402
from app.algebra.simple_lie import build_simple_lie  # noqa: E402
from app.tasks.verification_tasks import get_algebra  # noqa: E402

settings.register_profile("affvir", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "affvir"))


@pytest.fixture(scope="session")
def a1():
    return build_simple_lie("A1")


@pytest.fixture(scope="session")
def a2():
    return build_simple_lie("A2")


@pytest.fixture(scope="session")
def b2():
    return build_simple_lie("B2")


@pytest.fixture(scope="session")
def g2():
    return build_simple_lie("G2")


@pytest.fixture(scope="session")
def L_a1() -> AffineVirasoro:
    # même instance que les tâches Celery: les caches de solveurs sont partagés
    return get_algebra("A1", False)


@pytest.fixture(scope="session")
def L_a2() -> AffineVirasoro:
    return get_algebra("A2", False)


@pytest.fixture(scope="session")
def L_a1_normalized() -> AffineVirasoro:
    return get_algebra("A1", True)
