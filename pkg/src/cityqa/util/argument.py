"""Argparse types checking path arguments against the filesystem."""
import argparse
import os
import pathlib


class PathArgumentError(argparse.ArgumentTypeError):
    pass


def nearest_existing(path: pathlib.Path) -> pathlib.Path:
    """`path` itself or else its nearest existing ancestor."""
    for candidate in (path, *path.parents):
        if candidate.exists():
            return candidate

    return pathlib.Path('.')


class PathArgument:
    """Argparse type returning the given path as a `pathlib.Path`.

    An existing path must be of the class's `kind` and grant `mode`
    (`os.access` flags). A path which does not exist is accepted only
    if `create` is set and it could be created: its nearest existing
    ancestor must be a writable directory.

    """
    kind = 'path'

    def __init__(self, mode=os.R_OK, *, create=False):
        self.mode = mode
        self.create = create

    @staticmethod
    def is_kind(path):
        return True

    def __call__(self, value):
        path = pathlib.Path(value).expanduser()

        if path.exists():
            if not self.is_kind(path):
                raise PathArgumentError(f'not a {self.kind}: {path}')

            if not os.access(path, self.mode):
                raise PathArgumentError(f'permission denied: {path}')

            return path

        if not self.create:
            raise PathArgumentError(f'no such {self.kind}: {path}')

        ancestor = nearest_existing(path.parent)

        if not ancestor.is_dir() or not os.access(ancestor, os.W_OK | os.X_OK):
            raise PathArgumentError(f'cannot create {self.kind} under {ancestor}: {path}')

        return path


class FileArgument(PathArgument):

    kind = 'file'
    is_kind = staticmethod(pathlib.Path.is_file)


class DirectoryArgument(PathArgument):

    kind = 'directory'
    is_kind = staticmethod(pathlib.Path.is_dir)
