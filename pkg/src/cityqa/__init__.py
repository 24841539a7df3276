from .cli import main  # noqa: F401
