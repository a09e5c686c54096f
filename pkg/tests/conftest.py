import json
from pathlib import Path

import pytest

from src.exactla.field import FieldCfg
from src.geometry.model import make_model
from src.geometry.varieties import parse_spec
from src.inference.catalog import KnowledgeBase
from src.utils.config import ProbeConfig, default_config

SMALL_PRIME = 2147483659  # smallest prime above 2^31


@pytest.fixture
def prime_field():
    return FieldCfg()


@pytest.fixture
def small_prime_field():
    return FieldCfg(modulus=SMALL_PRIME)


@pytest.fixture
def rational_field():
    return FieldCfg.rational(50)


@pytest.fixture
def probe_config():
    return ProbeConfig(trials=2, seed=0)


@pytest.fixture
def app_config(tmp_path):
    config = default_config()
    config.probes.trials = 2
    config.output.output_directory = str(tmp_path / 'output')
    return config


@pytest.fixture(scope='session')
def knowledge_base():
    return KnowledgeBase.load()


@pytest.fixture
def model():
    """Build a model from a spec string."""
    def build(text):
        return make_model(parse_spec(text))
    return build


@pytest.fixture
def corrupted_knowledge_base(tmp_path) -> Path:
    path = tmp_path / 'knowledge_base.json'
    path.write_text(json.dumps({'version': 1, 'entries': [{'id': 'Bad Id', 'fact': 'Sometimes'}]}))
    return path
