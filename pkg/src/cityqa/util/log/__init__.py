from .logger import LogSink, NullLogger, StructLogger, null_logger  # noqa: F401
