class SpatialError(Exception):
    pass


class CoLocated(ValueError, SpatialError):
    """Reference and subject share a horizontal position: no bearing."""

    def __init__(self, reference, subject):
        super().__init__(reference, subject)
        self.reference = reference
        self.subject = subject

    def __str__(self):
        return f'points are horizontally co-located: {tuple(self.reference)}, {tuple(self.subject)}'


class InvalidCount(ValueError, SpatialError):
    pass
