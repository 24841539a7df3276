import functools
import typing


class ResultIter:
    """Iterator over a generator's items which, upon exhaustion,
    stores the generator's return value as attribute `attr`.

    Until then the attribute is `None` and `done` is false.

    """
    def __init__(self, generator, attr='value'):
        self._generator = generator
        self._attr = attr
        self.done = False
        setattr(self, attr, None)

    def __iter__(self):
        return self

    def __next__(self):
        if self.done:
            raise StopIteration

        try:
            return next(self._generator)
        except StopIteration as stop:
            self.done = True
            setattr(self, self._attr, stop.value)
            raise

    def __repr__(self):
        return f'<{self.__class__.__name__} {self._attr}={getattr(self, self._attr)!r}>'


def storeresult(attr='value'):
    """Decorate a generator function such that its calls return a
    `ResultIter` storing its return value as `attr`.

    """
    def decorator(generator_func):
        @functools.wraps(generator_func)
        def wrapped(*args, **kwargs):
            return ResultIter(generator_func(*args, **kwargs), attr)

        return wrapped

    return decorator


def unique(iterable: typing.Iterable, key=None) -> typing.Iterator:
    """Yield items in order, skipping any whose key was already seen."""
    seen = set()

    for item in iterable:
        marker = item if key is None else key(item)

        if marker in seen:
            continue

        seen.add(marker)
        yield item
