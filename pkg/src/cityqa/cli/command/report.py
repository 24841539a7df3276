import argcmdr

from cityqa import pipeline

from .. import Main
from ..base import CommandInterface


@Main.register
class Report(CommandInterface, argcmdr.Command):
    """print (and store) the report of an evaluated run"""

    def __call__(self):
        with self.exit_stack:
            print(pipeline.report(self.conf['pipeline']['out']), end='')
