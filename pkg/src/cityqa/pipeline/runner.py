"""Sequential execution of pipeline stages with resumable manifests."""
import pathlib
import time
import typing

from descriptors import cachedproperty

from cityqa.conf import conf_hash
from cityqa.gateway import (
    Budget,
    BudgetExceeded,
    Gateway,
    MemoryCache,
    OpenAIChatTransport,
    RecordingTransport,
    ReplayTransport,
    fixture_digest,
    open_cache,
    record_fixture,
)
from cityqa.util.enum import StrEnum
from cityqa.util.format import dump_canonical
from cityqa.util.ident import digest_text
from cityqa.util.iteration import storeresult
from cityqa.util.log import null_logger

from . import steps
from .error import ConfigInvalid, StageFailed
from .manifest import RunManifest, StageRecord, StageStatus, load_manifest, output_digests
from .stage import plan, registry


class GatewayMode(StrEnum):

    live = 'live'
    replay = 'replay'
    record = 'record'


class GatewaySet:
    """The run's gateways (generator, reviewers, judges and answerer),
    constructed upon first use.

    In `replay` mode all gateways share one fixture-backed transport. In
    `record` mode each transport is wrapped to record its exchanges, which
    `save_fixture` writes out. Only `live` mode consults the persistent
    response cache.

    A `transport_factory` (of the gateway configuration entry) replaces
    the default HTTP transport.

    """
    def __init__(self, conf, mode=GatewayMode.live, *, fixture=None, transport_factory=None,
                 sleep=time.sleep, logger=null_logger):
        self.conf = conf
        self.mode = GatewayMode.parse(mode)
        self.fixture = fixture
        self.transport_factory = transport_factory
        self.sleep = sleep
        self.logger = logger
        self.recorders = []

        if self.mode is GatewayMode.replay and fixture is None:
            raise ConfigInvalid('replay mode requires a fixture path')

    @cachedproperty
    def cache(self):
        if self.mode is GatewayMode.live:
            return open_cache(self.conf['gateway']['cache'] or None)

        return MemoryCache()

    @cachedproperty
    def replay_transport(self):
        return ReplayTransport.from_path(self.fixture)

    def transport(self, entry):
        if self.mode is GatewayMode.replay:
            return self.replay_transport

        if self.transport_factory is None:
            transport = OpenAIChatTransport(entry['endpoint'], entry['api_key_env'],
                                            entry['timeout'])
        else:
            transport = self.transport_factory(entry)

        if self.mode is GatewayMode.record:
            transport = RecordingTransport(transport)
            self.recorders.append(transport)

        return transport

    def gateway(self, entry, role):
        return Gateway(
            self.transport(entry),
            model_id=entry['model'],
            cache=self.cache,
            budget=Budget(entry['max_calls'], entry['max_tokens']),
            in_flight=entry['in_flight'],
            sleep=self.sleep,
            logger=self.logger.set(gateway=role),
        )

    @cachedproperty
    def generator(self):
        return self.gateway(self.conf['gateway']['generator'], 'generator')

    @cachedproperty
    def reviewers(self):
        return [self.gateway(entry, 'reviewer') for entry in self.conf['gateway']['reviewers']]

    @cachedproperty
    def judges(self):
        return [self.gateway(entry, 'judge') for entry in self.conf['gateway']['judges']]

    @cachedproperty
    def answerer(self):
        return self.gateway(self.conf['gateway']['answerer'], 'answerer')

    def save_fixture(self, path):
        return record_fixture(self.recorders, path)


class StageContext(typing.NamedTuple):

    conf: dict
    out: pathlib.Path
    gateways: GatewaySet
    logger: typing.Any


class StageEvent(typing.NamedTuple):

    stage: str
    status: StageStatus
    record: typing.Optional[StageRecord] = None
    error: typing.Optional[BaseException] = None


class PipelineRunner:
    """Execute configured pipeline stages in dependency order.

    Invocation returns an iterator of `StageEvent`; upon exhaustion, its
    attribute `manifest` is set to the resulting `RunManifest`.

    A stage whose input key (a digest of its configuration, its
    dependencies' output digests and any external inputs) matches its
    manifest record, and whose recorded outputs are intact, is skipped.

    """
    def __init__(self, conf, *, out=None, replay=None, record=None, dry_run=False,
                 transport_factory=None, sleep=time.sleep, logger=null_logger):
        if replay is not None and record is not None:
            raise ConfigInvalid('replay and record modes are mutually exclusive')

        self.conf = conf
        self.out = pathlib.Path(out or conf['pipeline']['out'])
        self.replay = None if replay is None else pathlib.Path(replay)
        self.record = None if record is None else pathlib.Path(record)
        self.dry_run = dry_run
        self.logger = logger

        if self.replay is not None:
            mode = GatewayMode.replay
        elif self.record is not None:
            mode = GatewayMode.record
        else:
            mode = GatewayMode.live

        self.gateways = GatewaySet(conf, mode, fixture=self.replay,
                                   transport_factory=transport_factory,
                                   sleep=sleep, logger=logger)

    @property
    def mode(self):
        return self.gateways.mode

    @cachedproperty
    def conf_hash(self):
        return conf_hash(self.conf)

    @cachedproperty
    def fixture_hash(self):
        if self.replay is None:
            return None

        try:
            return fixture_digest(self.replay)
        except FileNotFoundError:
            raise ConfigInvalid(f'replay fixture not found: {self.replay}') from None

    @cachedproperty
    def manifest(self):
        manifest = load_manifest(self.out)

        if manifest is None:
            return RunManifest(f'run-{self.conf_hash[:12]}', self.conf_hash)

        manifest.conf_hash = self.conf_hash
        return manifest

    @cachedproperty
    def context(self):
        return StageContext(self.conf, self.out, self.gateways, self.logger)

    def section(self, dotted):
        value = self.conf

        for key in dotted.split('.'):
            value = value[key]

        return value

    def input_key(self, name):
        stage = registry[name]

        material = {
            'stage': name,
            'conf': {section: self.section(section) for section in stage.conf_sections},
            'depends': {dependency: self.manifest.stages[dependency].outputs
                        for dependency in stage.depends
                        if dependency in self.manifest.stages},
            'external': steps.external_inputs(self.conf, name),
        }

        if stage.uses_gateway:
            material['gateway'] = {'mode': self.mode.value, 'fixture': self.fixture_hash}

        return digest_text(dump_canonical(material))

    def intact(self, name):
        return self.manifest.completed(name) and self.manifest.verify(self.out, name)

    def requested(self, stages=None):
        return plan(stages or self.conf['pipeline']['stages'],
                    completed=[name for name in registry if self.intact(name)])

    @storeresult('manifest')
    def __call__(self, stages=None):
        manifest = self.manifest
        manifest.fixture_hash = self.fixture_hash
        manifest.mode = self.mode.value

        for name in self.requested(stages):
            logger = self.logger.set(stage=name)
            key = self.input_key(name)
            record = manifest.record(name)

            if record is not None and record.input_key == key and self.intact(name):
                logger.info('stage skipped: outputs current')
                yield StageEvent(name, StageStatus.skipped, record)
                continue

            if self.dry_run:
                yield StageEvent(name, StageStatus.planned)
                continue

            logger.info('stage started')
            started = time.monotonic()

            try:
                output = registry[name].func(self.context._replace(logger=logger))
            except Exception as exc:
                manifest.stages[name] = StageRecord(StageStatus.failed, key,
                                                    error=f'{exc.__class__.__name__}: {exc}')
                self.save()

                logger.error('stage failed', error=str(exc))
                yield StageEvent(name, StageStatus.failed, manifest.stages[name], exc)

                if isinstance(exc, (BudgetExceeded, ConfigInvalid)):
                    raise

                raise StageFailed(name, exc) from exc
            finally:
                if registry[name].uses_gateway and self.record is not None:
                    self.gateways.save_fixture(self.record)

            record = StageRecord(StageStatus.completed, key,
                                 output_digests(self.out, output.paths), dict(output.counts))
            manifest.stages[name] = record
            self.save()

            logger.info('stage completed', duration=round(time.monotonic() - started, 3),
                        **record.counts)
            yield StageEvent(name, StageStatus.completed, record)

        if not self.dry_run:
            self.save()

        return manifest

    def save(self):
        self.manifest.counts = steps.dataset_counts(self.out)
        return self.manifest.save(self.out)


def run_pipeline(conf, stages=None, **kwargs) -> RunManifest:
    """Run the pipeline to completion (see `PipelineRunner`)."""
    events = PipelineRunner(conf, **kwargs)(stages)

    for _event in events:
        pass

    return events.manifest
