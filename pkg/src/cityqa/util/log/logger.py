"""Structured logging upon loguru.

Every record is a flat mapping of fields, written as one line of terse
inline TOML (see `encoder`):

    time="2026-03-02 10:04:11.020" level="info" event="8f3c…" stage="qc" msg="stage completed"

"""
import collections
import os.path
import sys
import traceback
import typing
from functools import partial

import loguru
import wcwidth
from descriptors import cachedproperty

from cityqa.util.ident import event_id

from . import encoder


class LogSink(typing.NamedTuple):
    """A configured log destination.

    `target` is anything loguru accepts as a sink (path, stream or
    callable); `extra` are passed through to `logger.add` (*e.g.*
    `rotation`, `retention`, `compression`).

    """
    target: typing.Any
    level: str = 'INFO'
    extra: typing.Mapping = {}


def exception_site(exception) -> typing.Optional[traceback.FrameSummary]:
    """Innermost frame of a loguru record's exception (if any)."""
    if not exception or exception.traceback is None:
        return None

    stack = traceback.extract_tb(exception.traceback)
    return stack[-1] if stack else None


class StructLogger:
    """Logger of structured records.

    Logging methods accept an optional message (or mapping of fields)
    and keyword fields:

        logger.info('stage completed', stage='qc', kept=48)

    `set` returns a logger whose records carry the given fields in
    addition to those set before. Configured sinks are attached to
    loguru upon first use; loguru's default sink is removed once per
    logger (and shared by loggers derived from it).

    """
    #: leading fields of every record: (name, format string or key of record extra)
    header = (
        ('time', '{time:YYYY-MM-DD HH:mm:ss.SSS}'),
        ('level', 'level_lower'),
        ('event', 'event_id'),
    )

    def __init__(self, sinks, log_level=None):
        self.sinks = tuple(sinks)
        self.log_level = log_level

    @staticmethod
    def line_format(target, level, record):
        """loguru format of the lines written to `target`."""
        line = '{extra[serialized]}\n'

        if target is sys.stderr:
            if target.isatty():
                # icons may be one column wide or two
                width = wcwidth.wcswidth(record['level'].icon)
                line = '{level.icon}' + ' ' * (3 - min(max(width, 1), 2)) + line
            else:
                line = '<{extra[level_ordinal]}> ' + line

        if level.no <= loguru.logger.level('DEBUG').no:
            line += '{exception}'

        return line

    @classmethod
    def serialize(cls, record):
        """loguru patcher rendering the record's fields to
        `extra['serialized']`.

        """
        extra = record['extra']
        level = record['level']

        extra.update(
            level_lower=level.name.lower(),
            level_ordinal=level.no // 10,
            event_id=event_id(),
        )

        env = collections.ChainMap(record, extra)
        fields = {name: spec.format_map(env) if '{' in spec else env[spec]
                  for (name, spec) in cls.header}

        if site := exception_site(record['exception']):
            fields['exc_line'] = f'{os.path.basename(site.filename)}:{site.lineno}'
            fields['exc_frame'] = site.name

        fields.update(extra.get('struct_extra', {}))
        fields.update(extra.get('struct', {}))

        if message := record['message']:
            if 'msg' in fields:
                raise TypeError('log record specifies both message text and field "msg"')

            fields['msg'] = message

        extra['serialized'] = encoder.dump_structured_log_record(fields)

    # loguru

    @cachedproperty
    def loguru_logger(self):
        """loguru's logger, its default sink removed."""
        loguru.logger.remove()
        return loguru.logger

    @cachedproperty
    def _logger(self):
        """The configured and patched loguru logger."""
        for sink in self.sinks:
            self.add_sink(sink.target, self.log_level or sink.level, **sink.extra)

        return self._patched()

    def _patched(self):
        return self.loguru_logger.opt(depth=1).patch(self.serialize)

    def add_sink(self, target, level='INFO', format=None, **options):
        """Attach `target` to loguru, returning its handler id."""
        level = self.loguru_logger.level(level.upper())

        if format is None:
            format = partial(self.line_format, target, level)

        return self.loguru_logger.add(target, level=level.name, format=format, **options)

    def remove_sink(self, handler_id):
        self.loguru_logger.remove(handler_id)

    # derivation

    def derive(self, **attrs):
        """A logger of the same sinks sharing this one's loguru state."""
        logger = self.__class__(self.sinks, self.log_level)

        for name in ('loguru_logger', '_logger', '_fields'):
            if name in self.__dict__:
                logger.__dict__[name] = self.__dict__[name]

        logger.__dict__.update(attrs)
        return logger

    def safe(self, fallback_message='failed to construct logger as configured: '
                                    'logging to stderr'):
        """This logger or, should its sinks fail to attach, a logger
        writing to stderr.

        """
        try:
            self._logger
        except Exception:
            self.__dict__.pop('loguru_logger', None)

            self.add_sink(sys.stderr, self.log_level or 'DEBUG')

            logger = self.derive(_logger=self._patched())

            if fallback_message:
                logger.error(fallback_message)

            return logger

        return self

    def bind(self, **kwargs):
        return self.derive(_logger=self._logger.bind(**kwargs))

    def opt(self, **kwargs):
        return self.derive(_logger=self._logger.opt(**kwargs))

    def set(self, **fields):
        """A logger adding `fields` to every record.

        Unlike loguru's `bind`, fields accumulate over successive calls.

        """
        merged = {**self.__dict__.get('_fields', {}), **fields}
        return self.bind(struct_extra=merged).derive(_fields=merged)

    def catch(self, *args, **kwargs):
        return self._logger.catch(*args, **kwargs)

    # records

    @staticmethod
    def _struct(data, fields):
        if not data:
            return fields

        struct = {'msg': data} if isinstance(data, str) else dict(data)
        struct.update(fields)
        return struct

    def log(self, level, data=None, **fields):
        self._logger.log(level.upper(), '', struct=self._struct(data, fields))

    def debug(self, data=None, **fields):
        self._logger.debug('', struct=self._struct(data, fields))

    def info(self, data=None, **fields):
        self._logger.info('', struct=self._struct(data, fields))

    def warning(self, data=None, **fields):
        self._logger.warning('', struct=self._struct(data, fields))

    def error(self, data=None, **fields):
        self._logger.error('', struct=self._struct(data, fields))

    def exception(self, data=None, **fields):
        self._logger.exception('', struct=self._struct(data, fields))

    def critical(self, data=None, **fields):
        self._logger.critical('', struct=self._struct(data, fields))


class NullLogger:
    """Logger interface discarding all records.

    The default for library code, which never configures sinks itself.

    """
    def set(self, **fields):
        return self

    def bind(self, **kwargs):
        return self

    def opt(self, **kwargs):
        return self

    def _discard(self, *args, **kwargs):
        pass

    log = debug = info = warning = error = exception = critical = _discard


null_logger = NullLogger()
