"""Configurable support for serialization formats."""
import collections.abc
import enum
import json
import pathlib
import typing

import numpy as np
import toml
import yaml

from cityqa.util.enum import CallableEnum, FileFormatEnum


class JSONEncoder(json.JSONEncoder):
    """JSON encoder supporting abstract collections, paths, enums and
    numpy scalars and arrays.

    """
    def default(self, obj):
        if isinstance(obj, enum.Enum):
            return obj.value

        if isinstance(obj, pathlib.PurePath):
            return str(obj)

        if isinstance(obj, np.generic):
            return obj.item()

        if isinstance(obj, np.ndarray):
            return obj.tolist()

        if isinstance(obj, collections.abc.Mapping):
            return dict(obj)

        if isinstance(obj, (collections.abc.Sequence, collections.abc.Set)):
            return list(obj)

        # let base class raise TypeError
        return super().default(obj)


#: Canonical encoding: sorted keys, no insignificant whitespace, UTF-8.
canonical_encoder = JSONEncoder(sort_keys=True, separators=(',', ':'), ensure_ascii=False)

pretty_encoder = JSONEncoder(sort_keys=True, indent=2, ensure_ascii=False)


def dump_canonical(obj) -> str:
    return canonical_encoder.encode(obj)


def dump_pretty(obj) -> str:
    return pretty_encoder.encode(obj) + '\n'


def dumps_jsonl(rows: typing.Iterable) -> str:
    return ''.join(dump_canonical(row) + '\n' for row in rows)


def write_jsonl(path: pathlib.Path, rows: typing.Iterable) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_jsonl(rows), encoding='utf-8')


def read_jsonl(path: pathlib.Path) -> typing.List[dict]:
    rows = []

    with open(path, encoding='utf-8') as fd:
        for (lineno, line) in enumerate(fd, 1):
            if not line.strip():
                continue

            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f'{path}:{lineno}: invalid JSON record: {exc}') from exc

    return rows


def write_json(path: pathlib.Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_pretty(obj), encoding='utf-8')


def read_json(path: pathlib.Path):
    return json.loads(pathlib.Path(path).read_text(encoding='utf-8'))


class tag:
    """configurable decorator to set given attribute to given value"""

    def __init__(self, name, value):
        self.name = name
        self.value = value

    def __call__(self, target):
        setattr(target, self.name, self.value)
        return target


def raises(*errors):
    return tag('raises', errors)


class Loader(FileFormatEnum, CallableEnum):
    """Configuration file loaders by format (suffix)."""

    @CallableEnum.member
    @raises(toml.decoder.TomlDecodeError)
    def toml(path):
        with open(path, encoding='utf-8') as fd:
            return toml.load(fd)

    @CallableEnum.member
    @raises(yaml.error.YAMLError)
    def yaml(path):
        with open(path, encoding='utf-8') as fd:
            conf = yaml.safe_load(fd)

        return {} if conf is None else conf

    @property
    def raises(self):
        return getattr(self.value, 'raises', ())

    @classmethod
    def loads_toml(cls, text):
        return toml.loads(text)
