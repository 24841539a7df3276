class EncoderError(Exception):
    pass


class EmptyQuery(ValueError, EncoderError):
    pass


class ShapeMismatch(ValueError, EncoderError):

    def __init__(self, name, expected, actual):
        super().__init__(name, expected, actual)
        self.name = name
        self.expected = tuple(expected)
        self.actual = tuple(actual)

    def __str__(self):
        expected = '×'.join('*' if size is None else str(size) for size in self.expected)
        actual = '×'.join(str(size) for size in self.actual)
        return f'{self.name}: expected shape {expected} not {actual}'


class IndexOutOfVocab(IndexError, EncoderError):

    def __init__(self, token_id, vocab_size):
        super().__init__(token_id, vocab_size)
        self.token_id = token_id
        self.vocab_size = vocab_size

    def __str__(self):
        return f'target token id {self.token_id} outside vocabulary of size {self.vocab_size}'


class SelectionRequired(ValueError, EncoderError):
    pass


class UnexpectedSelection(ValueError, EncoderError):
    pass


class RoleMismatch(ValueError, EncoderError):
    pass


class InvalidEncoderConfig(ValueError, EncoderError):
    pass


class MissingCrop(KeyError, EncoderError):

    def __init__(self, object_id):
        super().__init__(object_id)
        self.object_id = object_id

    def __str__(self):
        return f'no crop image supplied for selected object {self.object_id}'
