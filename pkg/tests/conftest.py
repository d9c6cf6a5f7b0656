import pathlib

import pytest

from fastmap_explorer.dataset import parse_data, parse_names

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def animal_names_text():
    return (FIXTURES / "animal.names").read_text()


@pytest.fixture(scope="session")
def heart_names_text():
    return (FIXTURES / "heart.names").read_text()


@pytest.fixture(scope="session")
def heart_data_text():
    return (FIXTURES / "heart.data").read_text()


@pytest.fixture
def heart_dataset(heart_names_text, heart_data_text):
    meta = parse_names(heart_names_text)
    dataset, errors = parse_data(heart_data_text, meta)
    assert errors == []
    return dataset
