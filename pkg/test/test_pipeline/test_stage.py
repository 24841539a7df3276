import pytest

from cityqa.conf.schema import STAGES
from cityqa.pipeline import ConfigInvalid, ordered, plan, registry


def test_registry():
    assert set(registry) == set(STAGES)
    assert registry['generate'].uses_gateway
    assert not registry['render'].uses_gateway


def test_ordered():
    assert ordered(STAGES) == [
        'ingest', 'graph', 'render', 'encode-demo', 'serialize', 'generate', 'qc', 'evaluate',
    ]
    assert ordered(['evaluate', 'graph', 'ingest', 'graph']) == ['ingest', 'graph', 'evaluate']


def test_plan():
    assert plan(['graph', 'ingest']) == ['ingest', 'graph']
    assert plan(['qc'], completed=['ingest', 'graph', 'serialize', 'render', 'generate']) == ['qc']


def test_plan_missing_dependency():
    with pytest.raises(ConfigInvalid) as info:
        plan(['qc'])

    assert 'requires generate' in str(info.value)


def test_plan_unknown():
    with pytest.raises(ConfigInvalid):
        plan(['ingest', 'publish'])
