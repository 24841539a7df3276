"""Stage registry and dependency planning."""
import typing

from cityqa.conf.schema import STAGES

from .error import ConfigInvalid


class Stage(typing.NamedTuple):

    name: str
    depends: typing.Tuple[str, ...]
    conf_sections: typing.Tuple[str, ...]
    func: typing.Callable
    uses_gateway: bool = False


registry: typing.Dict[str, Stage] = {}


def stage(name, depends=(), conf_sections=(), uses_gateway=False):
    """Register the decorated function as the implementation of stage
    `name`.

    """
    if name not in STAGES:
        raise ValueError(f'unknown stage: {name}')

    def decorator(func):
        registry[name] = Stage(name, tuple(depends), tuple(conf_sections), func, uses_gateway)
        return func

    return decorator


def ordered(names) -> typing.List[str]:
    """`names` in dependency order (ties in declaration order)."""
    return sorted(set(names), key=lambda name: (_depth(name), STAGES.index(name)))


def _depth(name):
    depends = registry[name].depends
    return 1 + max(map(_depth, depends)) if depends else 0


def plan(requested, completed=()) -> typing.List[str]:
    """Order the `requested` stages, checking that every dependency is
    either requested itself or already `completed`.

    """
    requested = set(requested)
    completed = set(completed)

    unknown = requested - set(registry)

    if unknown:
        raise ConfigInvalid(f'unknown stages: {", ".join(sorted(unknown))}')

    for name in requested:
        for dependency in registry[name].depends:
            if dependency not in requested and dependency not in completed:
                raise ConfigInvalid(f'stage {name} requires {dependency}, which is neither '
                                    f'requested nor complete')

    return ordered(requested)
