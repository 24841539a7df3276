import os
import sys

import argcmdr

from cityqa.util.argument import DirectoryArgument, FileArgument

from .common import CommandInterface


class Main(CommandInterface, argcmdr.RootCommand):
    """build and evaluate city-scale spatial question-answering data"""

    @classmethod
    def _new_parser_(cls):
        parser = super()._new_parser_()

        # enforce program name when invoked via "python -m cityqa"
        if parser.prog == '__main__.py':
            command = os.path.basename(sys.executable)
            parser.prog = f'{command} -m cityqa'

        return parser

    def __init__(self, parser):
        parser.add_argument(
            '-c', '--config',
            metavar='path',
            type=FileArgument(),
            help='run configuration file (TOML or YAML)',
        )
        parser.add_argument(
            '-o', '--out',
            metavar='path',
            type=DirectoryArgument(os.R_OK | os.W_OK, create=True),
            help='output directory (default: from configuration)',
        )
        parser.add_argument(
            '--seed',
            metavar='int',
            type=int,
            help='override configured random seed',
        )

        mode = parser.add_mutually_exclusive_group()
        mode.add_argument(
            '--replay',
            metavar='fixture',
            type=FileArgument(),
            help='serve model completions from a recorded fixture (no network)',
        )
        mode.add_argument(
            '--record',
            metavar='fixture',
            nargs='?',
            const=True,
            type=FileArgument(os.R_OK | os.W_OK, create=True),
            help='record model completions to a fixture '
                 '(default: fixture.jsonl of the output directory)',
        )

        parser.add_argument(
            '--dry-run',
            action='store_true',
            help='validate configuration and list planned stages without executing',
        )
        parser.add_argument(
            '--cache',
            action='store_true',
            help='persist model completions under the cache prefix '
                 '(overridden by CITYQA_PREFIX_CACHE)',
        )
        parser.add_argument(
            '--log-level',
            choices=('debug', 'info', 'warning', 'error', 'critical'),
            metavar='name',
            help="override log targets' configured levels with one of: {%(choices)s}",
        )
