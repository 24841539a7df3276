class EvaluationError(Exception):
    pass


class EmptyText(ValueError, EvaluationError):
    pass


class JudgeOutputError(ValueError, EvaluationError):
    pass


class MissingField(JudgeOutputError):

    def __init__(self, field):
        super().__init__(field)
        self.field = field

    def __str__(self):
        return f'judge output lacks a numeric {self.field} field'


class OutOfRange(JudgeOutputError):

    def __init__(self, field, value):
        super().__init__(field, value)
        self.field = field
        self.value = value

    def __str__(self):
        return f'{self.field} score {self.value} outside [0, 10]'


class MissingJustification(JudgeOutputError):

    def __str__(self):
        return 'judge output lacks a justification'


class DegenerateVector(ValueError, EvaluationError):

    def __init__(self, evaluator):
        super().__init__(evaluator)
        self.evaluator = evaluator

    def __str__(self):
        return f'scores of evaluator {self.evaluator!r} have zero variance'
