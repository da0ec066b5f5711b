import pytest

from branchmap.core import RuleSpec, canonicalize, preset_3x1, preset_7xpm1


@pytest.fixture(scope="session")
def m3():
    return preset_3x1()


@pytest.fixture(scope="session")
def m7():
    return preset_7xpm1()


@pytest.fixture(scope="session")
def m5():
    # 5x+-1 analogue: positive drift, so orbits are expected to grow
    return canonicalize(
        "5xpm1",
        [
            RuleSpec((1,), 4, 5, 1, 1),
            RuleSpec((3,), 4, 5, -1, 1),
            RuleSpec((0,), 2, 1, 0, 2),
        ],
    )


@pytest.fixture(scope="session")
def m99():
    # steep divergent map; overflows 128 bits within ~80 steps from small starts
    return canonicalize(
        "99x1",
        [
            RuleSpec((1,), 2, 99, 1, 1),
            RuleSpec((0,), 2, 1, 0, 2),
        ],
    )
