import pytest

from syncalg.models import builtin_model_path, load_model


@pytest.fixture(scope="session")
def rel_uni():
    return load_model(builtin_model_path("two_state.model"))


@pytest.fixture(scope="session")
def ev_uni():
    return load_model(builtin_model_path("two_event.model"))


@pytest.fixture(scope="session")
def comb_uni():
    return load_model(builtin_model_path("combined.model"))
