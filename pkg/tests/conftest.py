from pathlib import Path

import pytest

import hardmdp
from hardmdp.instances import ClassSpec, HardInstanceParams, build_instance

DATA_DIR = Path(__file__).parent / 'data'


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def log_records(caplog, monkeypatch):
    """
    Records emitted by the package logger (it does not propagate by default).
    """
    monkeypatch.setattr(hardmdp.logger, 'propagate', True)
    caplog.set_level('DEBUG', logger='hardmdp')
    return caplog


@pytest.fixture
def s3_pair():
    params = HardInstanceParams('s3-stationary', A=2, H=2, eps=0.1, arm=(1,))
    return build_instance(params.with_arm(None)), build_instance(params)


@pytest.fixture
def tree_spec():
    return ClassSpec('tree', A=2, H=9, S=6, Hbar=3, eps=0.1)


@pytest.fixture
def tree_pair(tree_spec):
    reference = tree_spec.reference_params()
    return build_instance(reference), build_instance(reference.with_arm((4, 1, 0)))
