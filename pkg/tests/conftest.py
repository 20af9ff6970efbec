import pytest

from matroid_spheres import (
    boolean_matroid,
    lattice_from_flats,
    load_matroid,
    uniform_matroid,
    vector_config,
)

FANO_COLUMNS = [
    [0, 0, 1],
    [0, 1, 0],
    [0, 1, 1],
    [1, 0, 0],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
]

N134_FLATS = [
    [],
    ["1"], ["2"], ["3"], ["4"],
    ["1", "2"], ["2", "3"], ["2", "4"], ["1", "3", "4"],
    ["1", "2", "3", "4"],
]


@pytest.fixture(scope="session")
def u24():
    return uniform_matroid(2, 4)


@pytest.fixture(scope="session")
def u34():
    return uniform_matroid(3, 4)


@pytest.fixture(scope="session")
def bool3():
    return boolean_matroid(["a", "b", "c"])


@pytest.fixture(scope="session")
def fano():
    return load_matroid({"format": "linear", "field": "GF", "p": 2, "columns": FANO_COLUMNS})


@pytest.fixture(scope="session")
def n134():
    return lattice_from_flats(["1", "2", "3", "4"], N134_FLATS)


@pytest.fixture(scope="session")
def u24_vec():
    return vector_config([[1, 0], [0, 1], [1, 1], [1, -1]])


@pytest.fixture(scope="session")
def u34_vec():
    return vector_config([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])


@pytest.fixture(scope="session")
def coord2_vec():
    return vector_config([[1, 0], [0, 1]])


@pytest.fixture(scope="session")
def coord3_vec():
    return vector_config([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


@pytest.fixture(scope="session")
def n134_vec():
    # elements 1,3,4 coplanar: realizes the rank-3 weak-map target fixture
    return vector_config([[1, 0, 0], [0, 0, 1], [0, 1, 0], [1, 1, 0]])


@pytest.fixture(scope="session")
def nonfano_vec():
    return vector_config(
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    )
