
from cityqa.conf import merge, task_names

from .. import Main
from .stage import StageCommand


class EncodeDemo(StageCommand):
    """demonstrate the scene encoder upon a stored scene"""

    stages = ('encode-demo',)

    def __init__(self, parser):
        parser.add_argument(
            '--scene',
            metavar='id',
            help='scene to encode (default: from configuration or first scene)',
        )
        parser.add_argument(
            '--task',
            choices=task_names(),
            metavar='category',
            help='task category to route: {%(choices)s}',
        )
        parser.add_argument(
            '--select',
            metavar='id',
            nargs='+',
            type=int,
            help='target object ids (object and relationship tasks)',
        )

    def __call__(self, args):
        with self.exit_stack:
            overrides = {
                key: value for (key, value) in (
                    ('scene', args.scene),
                    ('task', args.task),
                    ('selection', args.select),
                ) if value is not None
            }

            if args.task is not None and args.select is None:
                overrides['selection'] = []

            self.execute(self.stages, merge(self.conf, {'encoder': overrides}))


EncodeDemo.__name__ = 'encode-demo'

Main.register(EncodeDemo)
