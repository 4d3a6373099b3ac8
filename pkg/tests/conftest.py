import pytest
from hypothesis import settings

from hinorm.constructions import build_dependent_sequence, unit_blocks
from hinorm.normingset.profile import make_profile

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def desk():
    return make_profile("desk")


@pytest.fixture(scope="session")
def strict():
    return make_profile("strict")


@pytest.fixture(scope="session")
def dep2(desk):
    return build_dependent_sequence(unit_blocks, unit_blocks, 2, desk)


@pytest.fixture(scope="session")
def dep4(desk):
    from hinorm.engine.suites import random_blocks
    return build_dependent_sequence(random_blocks("t:x"), random_blocks("t:y"), 4, desk)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[n])
