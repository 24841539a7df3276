import json
import re

import pytest

from cityqa.cli import ExitCode, main
from cityqa.pipeline import StageStatus, load_manifest


STAGE_LINE = re.compile(r'^\S+ (?P<stage>[\w-]+) (?P<status>[a-z]+)\b', re.MULTILINE)

ANSI = re.compile(r'\x1b\[[0-9;]*m')


@pytest.fixture
def run_conf(confpatch, campus, harbor):
    confpatch.add_scene(campus)
    confpatch.add_scene(harbor)
    return confpatch


@pytest.fixture
def fixture_path(tmp_path):
    return tmp_path / 'fixture.jsonl'


def invoke(*argv, **settings):
    main(argv=[str(arg) for arg in argv], **settings)


def exit_code(*argv, **settings):
    with pytest.raises(SystemExit) as info:
        invoke(*argv, **settings)

    return info.value.code


def statuses(text):
    """Stage names mapped to the status printed beside them."""
    return {match['stage']: StageStatus(match['status'])
            for match in STAGE_LINE.finditer(ANSI.sub('', text))}


def test_run(run_conf, model, fixture_path, capsys):
    conf_path = run_conf.write()

    invoke('--config', conf_path, '--record', fixture_path, 'run',
           transport_factory=model.transport)

    out = capsys.readouterr().out
    assert statuses(out) == {name: StageStatus.completed for name in (
        'ingest', 'graph', 'render', 'encode-demo', 'serialize', 'generate', 'qc', 'evaluate',
    )}
    assert 'manifest:' in out
    assert fixture_path.is_file()

    # gateway stages rerun under replay
    invoke('--config', conf_path, '--replay', fixture_path, 'run')

    out = capsys.readouterr().out
    assert statuses(out)['graph'] is StageStatus.skipped
    assert statuses(out)['generate'] is StageStatus.completed

    manifest = load_manifest(run_conf.out)
    assert manifest.mode == 'replay'
    assert manifest.counts['samples'] == 48

    invoke('--config', conf_path, '--replay', fixture_path, 'run')

    assert set(statuses(capsys.readouterr().out).values()) == {StageStatus.skipped}

    invoke('--config', conf_path, 'report')

    report = capsys.readouterr().out
    assert report.startswith(f'Run {manifest.run_id}\n')
    assert 'Overall' in report


def test_dry_run(run_conf, capsys):
    invoke('--config', run_conf.write(), '--dry-run', 'run')

    out = capsys.readouterr().out

    assert set(statuses(out).values()) == {StageStatus.planned}
    assert len(statuses(out)) == 8
    assert 'dry run:' in out
    assert not (run_conf.out / 'manifest.json').exists()


def test_stage_commands(run_conf, capsys):
    invoke('--config', run_conf.write(), 'ingest')
    invoke('--config', run_conf.write(), 'graph')

    assert statuses(capsys.readouterr().out) == {'ingest': StageStatus.completed,
                                                 'graph': StageStatus.completed}
    assert set(load_manifest(run_conf.out).stages) == {'ingest', 'graph'}
    assert (run_conf.out / 'graphs' / 'campus.json').is_file()


def test_out_override(run_conf, tmp_path, capsys):
    invoke('--config', run_conf.write(), '--out', tmp_path / 'elsewhere', 'ingest')

    assert (tmp_path / 'elsewhere' / 'manifest.json').is_file()
    assert not run_conf.out.exists()


def test_encode_demo(run_conf, capsys):
    invoke('--config', run_conf.write(), 'ingest')
    invoke('--config', run_conf.write(), 'encode-demo', '--task', 'SceneCaption')

    demo = json.loads((run_conf.out / 'encoder' / 'demo.json').read_text())

    assert demo['scene_id'] == 'campus'
    assert demo['activation']['E_o'] == 'zero'
    assert demo['activation']['targets'] == []
    assert demo['shapes']['E_s'] == [5, 12]

    invoke('--config', run_conf.write(), 'encode-demo', '--scene', 'harbor', '--select', 11)

    demo = json.loads((run_conf.out / 'encoder' / 'demo.json').read_text())

    assert demo['scene_id'] == 'harbor'
    assert demo['activation']['targets'] == [11]
    assert demo['activation']['E_o'] == 'active'


def test_missing_config(tmp_path, capsys):
    assert exit_code('--config', tmp_path / 'absent.toml', 'run') == 2


def test_config_invalid(run_conf, capsys):
    run_conf.set('generate', n_pairs=-1)

    assert exit_code('--config', run_conf.write(), 'ingest') == ExitCode.Config
    assert 'n_pairs' in capsys.readouterr().err


def test_secret_in_config(run_conf, capsys):
    run_conf.set('gateway', generator={'api_key': 'sk-not-here'})

    assert exit_code('--config', run_conf.write(), 'ingest') == ExitCode.Config
    assert 'api_key_env' in capsys.readouterr().err


def test_unmet_dependency(run_conf, capsys):
    assert exit_code('--config', run_conf.write(), 'qc') == ExitCode.Config
    assert 'requires generate' in capsys.readouterr().err


def test_report_missing(run_conf, capsys):
    invoke('--config', run_conf.write(), 'ingest')

    assert exit_code('--config', run_conf.write(), 'report') == ExitCode.Stage


def test_replay_miss(run_conf, model, fixture_path, capsys):
    invoke('--config', run_conf.write(), '--record', fixture_path, 'run',
           transport_factory=model.transport)

    run_conf.set('generate', n_paraphrases=2)

    code = exit_code('--config', run_conf.write(), '--replay', fixture_path, 'run')

    assert code == ExitCode.Stage
    assert 'record it with --record' in capsys.readouterr().err


def test_budget(run_conf, model, capsys):
    run_conf.set('gateway', generator={'max_calls': 1})

    code = exit_code('--config', run_conf.write(), 'run', transport_factory=model.transport)

    assert code == ExitCode.Budget
    assert 'budget' in capsys.readouterr().err


def test_exclusive_modes(run_conf, fixture_path, capsys):
    fixture_path.write_text('')

    code = exit_code('--config', run_conf.write(), '--replay', fixture_path,
                     '--record', fixture_path, 'run')

    assert code == 2
