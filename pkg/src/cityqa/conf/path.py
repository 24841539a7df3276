"""Default filesystem locations.

Each is overridden by the environment variable `CITYQA_PREFIX_{NAME}`
(*e.g.* `CITYQA_PREFIX_CACHE`).

"""
import os
import sys
import typing
from pathlib import Path


class PrefixPaths(typing.NamedTuple):
    """Default cache and data directories of library `lib`.

    Within a virtual environment these lie under its `var/`; otherwise
    they follow the XDG base directory variables (and their defaults).

    """
    lib: str

    @property
    def isolated(self) -> bool:
        return sys.prefix != sys.base_prefix

    def _resolve(self, name, xdg_variable, home_default, venv_dir) -> Path:
        if override := os.getenv(f'{self.lib}_PREFIX_{name}'.upper()):
            return Path(override).absolute()

        if self.isolated:
            base = Path(sys.prefix) / 'var' / venv_dir
        else:
            base = Path(os.getenv(xdg_variable) or Path.home() / home_default)

        return base / self.lib

    @property
    def cache(self) -> Path:
        """persistent gateway response cache"""
        return self._resolve('cache', 'XDG_CACHE_HOME', '.cache', 'cache')

    @property
    def data(self) -> Path:
        """run outputs (when no configuration file is given)"""
        return self._resolve('data', 'XDG_DATA_HOME', '.local/share', 'lib')


prefix = PrefixPaths('cityqa')
