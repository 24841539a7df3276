"""Run configuration and packaged data tables.

A run is configured by a single TOML (or YAML) file, merged over the
packaged `include/defaults.toml` and validated by `schema`.

"""
import copy
import functools
import importlib.resources
import os
import pathlib
import sys

from cityqa.util.format import Loader, dump_canonical
from cityqa.util.ident import digest_text
from cityqa.util.log import LogSink

from . import schema
from .error import (  # noqa: F401
    ConfError,
    ConfSyntaxError,
    ConfTypeError,
    ConfValueError,
    NoConfError,
    SecretInConfError,
    TemplateTableError,
)
from .path import prefix  # noqa: F401
from .template import render_template  # noqa: F401


#: keys which would carry secrets, forbidden in files
SECRET_KEYS = frozenset(('api_key', 'apikey', 'token', 'secret'))

#: path-valued settings resolved relative to the configuration file
RELATIVE_PATHS = (
    ('pipeline', 'out'),
    ('evaluate', 'predictions'),
    ('gateway', 'cache'),
)


@functools.lru_cache(maxsize=None)
def _read_table(name):
    resource = importlib.resources.files(__name__) / 'include' / f'{name}.toml'
    text = resource.read_text(encoding='utf-8')

    try:
        return Loader.loads_toml(text)
    except Loader.toml.raises as exc:
        raise ConfSyntaxError('toml', exc, f'include/{name}.toml') from exc


def load_table(name):
    """Load the packaged data table `name` (*e.g.* `templates`).

    A copy is returned, as callers may modify it.

    """
    table = _read_table(name)

    if 'version' not in table:
        raise TemplateTableError(f'include/{name}.toml: missing version')

    return copy.deepcopy(table)


def task_names():
    return tuple(name for name in _read_table('tasks') if name != 'version')


def merge(base, update):
    """Deep-merge mapping `update` over mapping `base` (returning a new
    mapping). Lists and scalars of `update` replace those of `base`.

    """
    merged = dict(base)

    for (key, value) in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value

    return merged


def check_secrets(data, location=''):
    """Raise SecretInConfError for any secret-bearing key in `data`."""
    if isinstance(data, dict):
        for (key, value) in data.items():
            path = f'{location}.{key}' if location else str(key)

            if str(key).lower() in SECRET_KEYS:
                raise SecretInConfError(path)

            check_secrets(value, path)
    elif isinstance(data, list):
        for (index, value) in enumerate(data):
            check_secrets(value, f'{location}[{index}]')


def read(path):
    """Read the configuration file at `path` (format by suffix)."""
    path = pathlib.Path(path)

    try:
        loader = Loader.for_path(path)
    except LookupError:
        raise ConfTypeError(f'{path}: unsupported configuration format '
                            f'(expected {", ".join(member.suffix for member in Loader)})')

    try:
        data = loader(path)
    except FileNotFoundError:
        raise NoConfError(path)
    except loader.raises as exc:
        raise ConfSyntaxError(loader.name, exc, path) from exc

    if not isinstance(data, dict):
        raise ConfTypeError(f'{path}: expected a mapping at top level not '
                            f'{data.__class__.__name__}')

    return data


def load(path=None, **overrides):
    """Load, merge and validate run configuration.

    `overrides` are dotted setting names (with `__` for the dot) mapped
    to values, *e.g.* `pipeline__seed=7`; `None` values are ignored.

    """
    defaults = load_table_defaults()

    if path is None:
        user = {}
        base_dir = pathlib.Path.cwd()
    else:
        path = pathlib.Path(path)
        user = read(path)
        check_secrets(user, str(path))
        base_dir = path.absolute().parent

    data = merge(defaults, user)

    # relative paths in files are relative to the file
    data['pipeline']['scenes'] = [str(base_dir / scene) for scene in data['pipeline']['scenes']]
    for (section, key) in RELATIVE_PATHS:
        if value := data.get(section, {}).get(key):
            data[section][key] = str(base_dir / value)

    for (name, value) in overrides.items():
        if value is None:
            continue

        (section, key) = name.split('__', 1)
        data.setdefault(section, {})[key] = value

    conf = schema.build(task_names()).validate(data)

    gateway = conf['gateway']
    gateway.setdefault('reviewers', copy.deepcopy(gateway['judges']))
    gateway.setdefault('answerer', copy.deepcopy(gateway['generator']))

    return conf


def load_table_defaults():
    defaults = copy.deepcopy(_read_table('defaults'))
    defaults.pop('version', None)
    return defaults


def conf_hash(conf):
    """Content digest of the run-relevant configuration.

    Logging and output location do not affect run content and are
    excluded.

    """
    relevant = {key: value for (key, value) in conf.items() if key != 'log'}
    relevant['pipeline'] = {key: value for (key, value) in conf['pipeline'].items()
                            if key != 'out'}
    return digest_text(dump_canonical(relevant))


def log_sinks(conf, lib='cityqa'):
    """Translate the `log` setting into `LogSink` specifications.

    `log` may be a path, a mapping, or a list of mappings, each of which
    specifies either a `file` or a `directory` target.

    """
    log = conf.get('log', '/dev/stderr')

    if isinstance(log, str):
        key = 'directory' if os.path.isdir(log) else 'file'
        log = {key: log}

    if isinstance(log, dict):
        log = [log]

    sinks = []

    for entry in log:
        entry = dict(entry)
        level = entry.pop('level', 'INFO')
        file_ = entry.pop('file', None)
        directory = entry.pop('directory', None)

        if file_ and directory:
            raise ConfTypeError("log configuration may specify 'file' or 'directory' not both")

        if file_ == '/dev/stderr':
            target = sys.stderr
        elif file_ == '/dev/stdout':
            target = sys.stdout
        elif file_:
            target = file_
        elif directory:
            target = os.path.join(directory, f'{lib}.{{time}}.log')
        else:
            raise ConfTypeError("log configuration must specify either a 'file' "
                                "or 'directory' target")

        if file_ and file_.startswith('/dev/') and entry:
            raise ConfTypeError(f'log options {set(entry)} unsupported for {file_}')

        sinks.append(LogSink(target, level, entry))

    return sinks
