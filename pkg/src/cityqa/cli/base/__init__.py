from .common import CommandInterface, ExitCode, ExitOnError  # noqa: F401
from .main import Main                                       # noqa: F401
