class PipelineError(Exception):
    pass


class ConfigInvalid(ValueError, PipelineError):
    pass


class StageFailed(PipelineError):

    def __init__(self, stage, cause):
        super().__init__(stage, cause)
        self.stage = stage
        self.cause = cause

    def __str__(self):
        return f'stage {self.stage} failed: {self.cause.__class__.__name__}: {self.cause}'


class StageMissing(LookupError, PipelineError):

    def __init__(self, stage, out=None):
        super().__init__(stage, out)
        self.stage = stage
        self.out = out

    def __str__(self):
        where = f' in {self.out}' if self.out else ''
        return f'stage {self.stage} has not completed{where}'
