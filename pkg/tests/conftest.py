import json
from pathlib import Path

import pytest

from vocalize import fixtures


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory) -> Path:
    target = tmp_path_factory.mktemp("fixtures")
    fixtures.write_all(target)
    return target


@pytest.fixture(scope="session")
def demo_wav_bytes() -> bytes:
    return fixtures.demo_wav()


@pytest.fixture()
def demo_campaign():
    return fixtures.demo_campaign()


@pytest.fixture()
def demo_transcriber():
    return fixtures.demo_transcriber()
