from .base import ExitCode, Main  # noqa: F401

from .root import main            # noqa: F401
