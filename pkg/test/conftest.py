import pytest

from .fixture import ConfFixture, LogCapture, ScriptedModel, campus_scene, harbor_scene


def pytest_addoption(parser):
    parser.addoption('--record-golden', action='store_true',
                     help='re-record the checked-in replay fixture and artifact digests')


@pytest.fixture
def confpatch(monkeypatch, tmp_path):
    monkeypatch.setenv('CITYQA_PREFIX_CACHE', str(tmp_path / 'cache'))
    monkeypatch.setenv('CITYQA_PREFIX_DATA', str(tmp_path / 'data'))

    for name in ('OPENAI_API_KEY', 'DASHSCOPE_API_KEY', 'DEEPSEEK_API_KEY'):
        monkeypatch.delenv(name, raising=False)

    return ConfFixture(tmp_path)


@pytest.fixture
def campus():
    return campus_scene()


@pytest.fixture
def harbor():
    return harbor_scene()


@pytest.fixture
def model():
    return ScriptedModel()


@pytest.fixture
def caplog_struct():
    with LogCapture.caplog() as logs:
        yield logs
