import pytest

from strsolve.snfa import set_validation


@pytest.fixture(autouse=True)
def _validated_automata():
    """Run every test with the debug well-formedness validator enabled.
    Tests that build huge automata opt out locally."""
    previous = set_validation(True)
    yield
    set_validation(previous)
