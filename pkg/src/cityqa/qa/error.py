class QAError(Exception):
    pass


class MalformedOutput(ValueError, QAError):
    """Generator output violates the tag-delimited format."""

    def __init__(self, reason, position):
        super().__init__(reason, position)
        self.reason = reason
        self.position = position

    def __str__(self):
        return f'malformed output at offset {self.position}: {self.reason}'


class InvalidSample(ValueError, QAError):
    pass


class InvalidPersona(ValueError, QAError):
    pass


class UnknownPersona(LookupError, QAError):

    def __init__(self, name, known=()):
        super().__init__(name, known)
        self.name = name
        self.known = tuple(known)

    def __str__(self):
        return f'unknown persona {self.name!r} (choose from: {", ".join(self.known)})'


class EvaluatorCount(ValueError, QAError):
    pass
