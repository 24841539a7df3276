from functools import partial

import argcmdr

import cityqa.cli.command
from cityqa.cli.base import Main


def extend_parser(parser, conf=None, transport_factory=None):
    parser.set_defaults(
        __conf__=conf,
        __transport_factory__=transport_factory,
    )


def entrypoint(root, argv=None, **settings):
    # auto-discover nested commands
    argcmdr.init_package(
        cityqa.cli.command.__path__,
        cityqa.cli.command.__name__,
    )

    argcmdr.main(root, argv=argv, extend_parser=partial(extend_parser, **settings))


main = partial(entrypoint, Main)
