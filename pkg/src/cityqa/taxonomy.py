"""Task taxonomy: seven task categories grouped in three task levels."""
import functools

from cityqa import conf
from cityqa.util.enum import StrEnum


class TaskLevel(StrEnum):

    object = 'object'
    relationship = 'relationship'
    scene = 'scene'

    @property
    def categories(self):
        return tuple(category for category in TaskCategory if category.level is self)

    @property
    def takes_targets(self) -> bool:
        return self is not TaskLevel.scene


class TaskCategory(StrEnum):

    ObjectCaption = 'ObjectCaption'
    ObjectLocalization = 'ObjectLocalization'
    ObjectAnalysis = 'ObjectAnalysis'
    RelationshipComputation = 'RelationshipComputation'
    SceneCaption = 'SceneCaption'
    SceneAnalysis = 'SceneAnalysis'
    ScenePlanning = 'ScenePlanning'

    @property
    def _entry(self):
        return _tasks()[self.value]

    @property
    def level(self) -> TaskLevel:
        return TaskLevel(self._entry['level'])

    @property
    def display_name(self) -> str:
        return self._entry['title']

    @property
    def directive(self) -> str:
        return self._entry['directive']

    @property
    def reference_count(self) -> int:
        return self._entry['reference_count']


@functools.lru_cache(maxsize=None)
def _tasks():
    table = conf.load_table('tasks')

    if missing := {category.value for category in TaskCategory} - table.keys():
        raise conf.TemplateTableError(f'include/tasks.toml: missing categories: {sorted(missing)}')

    return table


def reference_proportions():
    """Category shares of the reference dataset, by category."""
    total = sum(category.reference_count for category in TaskCategory)
    return {category: category.reference_count / total for category in TaskCategory}
