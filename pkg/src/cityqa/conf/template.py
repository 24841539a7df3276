import functools

from jinja2 import StrictUndefined, sandbox


environ = sandbox.ImmutableSandboxedEnvironment(
    undefined=StrictUndefined,
    keep_trailing_newline=False,
    trim_blocks=True,
    lstrip_blocks=True,
)


@functools.lru_cache(maxsize=128)
def _compile(string):
    return environ.from_string(string)


def render_template(string, mapping=(), **context) -> str:
    template = _compile(string)
    return template.render(mapping, **context)
