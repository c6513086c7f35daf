"""Shared fixtures for trainer-bridge tests."""

import pytest

from bridge_helpers import make_records, write_dataset


@pytest.fixture
def dataset(tmp_path):
    return write_dataset(tmp_path / "train.jsonl", make_records(8))
