"""Pipeline stage commands."""
import argcmdr
from plumbum import colors

from cityqa.pipeline import StageStatus
from cityqa.util.enum import StrEnum

from .. import Main
from ..base import CommandInterface


class StatusSymbol(StrEnum):

    completed = colors.bold & colors.success | '☑'  # noqa: E221
    failed    = colors.bold & colors.fatal   | '☒'  # noqa: E221
    skipped   = colors.bold & colors.info    | '☐'  # noqa: E221
    planned   = colors.bold & colors.dim     | '…'  # noqa: E221


class StageCommand(CommandInterface, argcmdr.Command):
    """Base command class of commands executing pipeline stages.

    Concrete classes specify the `stages` they request (or `None`, for
    the configured stages).

    """
    stages = None

    def __call__(self):
        with self.exit_stack:
            self.execute(self.stages)

    def execute(self, stages, conf=None):
        runner = self.runner(conf)
        events = runner(stages)

        for event in events:
            self.print_event(event)

        if self.args.dry_run:
            print(colors.dim | f'dry run: {runner.out}')
        else:
            print(colors.dim | f'manifest: {runner.out / "manifest.json"}')

        return events.manifest

    @staticmethod
    def print_event(event):
        symbol = StatusSymbol[event.status.value]
        counts = ''

        if event.status is StageStatus.completed and event.record.counts:
            counts = ' '.join(f'{key}={value}' for (key, value) in event.record.counts.items())

        print(symbol, colors.bold | event.stage, event.status.value, colors.dim | counts)


@Main.register
class Run(StageCommand):
    """execute all configured stages (resuming completed stages)"""


@Main.register
class Ingest(StageCommand):
    """validate and store the configured scene files"""

    stages = ('ingest',)


@Main.register
class Graph(StageCommand):
    """build scene graphs"""

    stages = ('graph',)


@Main.register
class Render(StageCommand):
    """render top-view images of scenes and objects"""

    stages = ('render',)


@Main.register
class Serialize(StageCommand):
    """write attribute texts of objects, relations and scenes"""

    stages = ('serialize',)


@Main.register
class Generate(StageCommand):
    """generate question-answer samples"""

    stages = ('generate',)


@Main.register
class Qc(StageCommand):
    """review generated samples by three evaluators"""

    stages = ('qc',)


@Main.register
class Evaluate(StageCommand):
    """score candidate answers against the dataset"""

    stages = ('evaluate',)
