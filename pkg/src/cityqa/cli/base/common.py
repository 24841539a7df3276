import contextlib
import enum
import pathlib

from descriptors import cachedproperty

import cityqa.conf
from cityqa.gateway import BudgetExceeded, FixtureCorrupt, FixtureMiss
from cityqa.pipeline import ConfigInvalid, PipelineRunner, StageFailed, StageMissing
from cityqa.scene import SceneFileMissing, SchemaViolation
from cityqa.util.log import StructLogger


#: default fixture written by --record (under the output directory)
FIXTURE_NAME = 'fixture.jsonl'


class ExitCode(enum.IntEnum):

    OK = 0
    Fatal = 1
    Config = 2
    Stage = 3
    Budget = 4


#: errors of run configuration or of its input files
CONFIG_ERRORS = (
    cityqa.conf.ConfError,
    ConfigInvalid,
    SceneFileMissing,
    SchemaViolation,
    FixtureCorrupt,
    FileNotFoundError,
)


class ExitOnError:
    """Context manager exiting the process upon expected errors with an
    appropriate message and exit code (see `ExitCode`).

    """
    def __init__(self, parser):
        self.parser = parser

    def exit(self, code, message):
        self.parser.exit(code, f'{self.parser.prog}: error: {message}\n')

    def __exit__(self, exc_type, exc_value, _traceback):
        if exc_type is None:
            return

        if issubclass(exc_type, BudgetExceeded):
            self.exit(ExitCode.Budget, exc_value)

        if issubclass(exc_type, StageFailed):
            if isinstance(exc_value.cause, BudgetExceeded):
                self.exit(ExitCode.Budget, exc_value)

            if isinstance(exc_value.cause, CONFIG_ERRORS):
                self.exit(ExitCode.Config, exc_value)

            if isinstance(exc_value.cause, FixtureMiss):
                self.exit(ExitCode.Stage, f'{exc_value} (fixture lacks this exchange: '
                                          'record it with --record)')

            self.exit(ExitCode.Stage, exc_value)

        if issubclass(exc_type, StageMissing):
            self.exit(ExitCode.Stage, exc_value)

        if issubclass(exc_type, CONFIG_ERRORS):
            self.exit(ExitCode.Config, exc_value)

    def __enter__(self):
        return self


class CommandInterface:

    @property
    def conf(self):
        if (root := self.root) is None:
            # this is the root command
            # retrieve and store conf here
            try:
                conf = self.__dict__['conf']
            except KeyError:
                conf = self.__dict__['conf'] = self.args.__conf__ or self.load_conf(self.args)

            return conf

        # defer to root
        return root.conf

    @staticmethod
    def load_conf(args):
        out = args.out

        if out is None and args.config is None:
            out = cityqa.conf.prefix.data

        return cityqa.conf.load(
            args.config,
            pipeline__out=out and str(out),
            pipeline__seed=args.seed,
            gateway__cache=str(cityqa.conf.prefix.cache) if args.cache else None,
        )

    @cachedproperty
    def logger(self):
        return StructLogger(cityqa.conf.log_sinks(self.conf), self.args.log_level)

    @property
    def safe_logger(self):
        """A logger constructed despite errors of log configuration (or
        `None` if not even that is possible).

        """
        try:
            return self.logger.safe()
        except Exception:
            return None

    @property
    def exit_on_error(self):
        return ExitOnError(self.parser)

    @property
    def exit_stack(self):
        """Context manager handling exceptions otherwise uncaught by
        the command.

        Expected errors exit with their exit code (see `ExitOnError`).
        All others are logged and exit with code 1, unless tracebacks
        are requested or no logger could be constructed.

        """
        stack = contextlib.ExitStack()

        if not self.args.traceback and (logger := self.safe_logger):
            log_catch = logger.bind(exc_info=True).catch(
                level='CRITICAL',
                onerror=self.onerror,
                message='fatal exception of type {record[exception].type.__name__}',
            )
            stack.enter_context(log_catch)

        stack.enter_context(self.exit_on_error)

        return stack

    def onerror(self, exc):
        error = str(exc)
        error_msg = error and f': {error}'
        error_name = exc.__class__.__name__

        self.parser.exit(ExitCode.Fatal, f'{self.parser.prog}: fatal: {error_name}{error_msg}\n')

    @property
    def record_path(self):
        if (record := self.args.record) is None:
            return None

        if record is True:
            return pathlib.Path(self.conf['pipeline']['out']) / FIXTURE_NAME

        return record

    def runner(self, conf=None):
        return PipelineRunner(
            self.conf if conf is None else conf,
            replay=self.args.replay,
            record=self.record_path,
            dry_run=self.args.dry_run,
            transport_factory=self.args.__transport_factory__,
            logger=self.logger,
        )
