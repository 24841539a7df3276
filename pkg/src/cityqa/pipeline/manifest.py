"""Run manifests: per-stage status, input keys and output digests."""
import datetime
import pathlib
import typing
from dataclasses import dataclass, field

from cityqa.util.enum import StrEnum
from cityqa.util.format import read_json, write_json
from cityqa.util.ident import digest_file


MANIFEST_NAME = 'manifest.json'


class StageStatus(StrEnum):

    planned = 'planned'
    completed = 'completed'
    skipped = 'skipped'
    failed = 'failed'


@dataclass
class StageRecord:
    """Outcome of a stage: `outputs` maps paths (relative to the output
    directory) to their SHA-256 digests.

    """
    status: StageStatus
    input_key: str = ''
    outputs: typing.Dict[str, str] = field(default_factory=dict)
    counts: typing.Dict[str, typing.Any] = field(default_factory=dict)
    error: typing.Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.status in (StageStatus.completed, StageStatus.skipped)

    def to_dict(self):
        return {
            'status': self.status.value,
            'input_key': self.input_key,
            'outputs': dict(sorted(self.outputs.items())),
            'counts': self.counts,
            'error': self.error,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            StageStatus.parse(data['status']),
            data.get('input_key', ''),
            dict(data.get('outputs', {})),
            dict(data.get('counts', {})),
            data.get('error'),
        )


def output_digests(out, paths) -> typing.Dict[str, str]:
    out = pathlib.Path(out)
    return {
        pathlib.Path(path).relative_to(out).as_posix(): digest_file(path)
        for path in sorted(paths)
    }


@dataclass
class RunManifest:

    run_id: str
    conf_hash: str
    fixture_hash: typing.Optional[str] = None
    mode: str = 'live'
    stages: typing.Dict[str, StageRecord] = field(default_factory=dict)
    counts: typing.Dict[str, typing.Any] = field(default_factory=dict)
    updated: str = ''

    def record(self, stage) -> typing.Optional[StageRecord]:
        return self.stages.get(stage)

    def completed(self, stage) -> bool:
        record = self.stages.get(stage)
        return record is not None and record.complete

    def verify(self, out, stage) -> bool:
        """Whether `stage`'s recorded outputs exist in `out` unchanged."""
        record = self.stages.get(stage)

        if record is None or not record.complete:
            return False

        out = pathlib.Path(out)

        for (name, digest) in record.outputs.items():
            path = out / name

            if not path.is_file() or digest_file(path) != digest:
                return False

        return True

    def to_dict(self):
        return {
            'run_id': self.run_id,
            'conf_hash': self.conf_hash,
            'fixture_hash': self.fixture_hash,
            'mode': self.mode,
            'stages': {name: record.to_dict() for (name, record) in self.stages.items()},
            'counts': self.counts,
            'updated': self.updated,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data['run_id'],
            data['conf_hash'],
            data.get('fixture_hash'),
            data.get('mode', 'live'),
            {name: StageRecord.from_dict(record)
             for (name, record) in data.get('stages', {}).items()},
            dict(data.get('counts', {})),
            data.get('updated', ''),
        )

    def save(self, out) -> pathlib.Path:
        self.updated = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec='seconds')
        path = pathlib.Path(out) / MANIFEST_NAME
        write_json(path, self.to_dict())
        return path


def load_manifest(out) -> typing.Optional[RunManifest]:
    path = pathlib.Path(out) / MANIFEST_NAME

    if not path.is_file():
        return None

    return RunManifest.from_dict(read_json(path))
