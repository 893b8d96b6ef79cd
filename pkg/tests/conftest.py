import pytest

from galoisfinder.fields import make_field


@pytest.fixture(scope="session")
def F1():
    return make_field(12037, 1)


@pytest.fixture(scope="session")
def F2():
    return make_field(12037, 2)


@pytest.fixture(scope="session")
def tables():
    from galoisfinder.bundled import golden_tables
    return golden_tables()


@pytest.fixture(scope="session")
def store():
    from galoisfinder.bundled import newform_store
    try:
        return newform_store()
    except FileNotFoundError:
        pytest.skip("bundled newform fixture not present")
