class GatewayError(Exception):
    pass


class InvalidRequest(ValueError, GatewayError):
    pass


class TransportError(GatewayError):
    """Upstream call failed and should not be retried."""

    def __init__(self, message, status=None):
        super().__init__(message, status)
        self.message = message
        self.status = status

    def __str__(self):
        return f'{self.message} (status {self.status})' if self.status else self.message


class TransientError(TransportError):
    """Upstream call failed but may succeed if retried."""


class TransportExhausted(GatewayError):

    def __init__(self, attempts, cause):
        super().__init__(attempts, cause)
        self.attempts = attempts
        self.cause = cause

    def __str__(self):
        return f'transport failed after {self.attempts} attempts: {self.cause}'


class FixtureMiss(LookupError, GatewayError):

    def __init__(self, request_key, model_id=None):
        super().__init__(request_key, model_id)
        self.request_key = request_key
        self.model_id = model_id

    def __str__(self):
        return f'no recorded response for request {self.request_key} (model {self.model_id})'


class FixtureCorrupt(ValueError, GatewayError):
    pass


class BudgetExceeded(GatewayError):

    def __init__(self, resource, limit, model_id=None):
        super().__init__(resource, limit, model_id)
        self.resource = resource
        self.limit = limit
        self.model_id = model_id

    def __str__(self):
        return f'{self.model_id or "gateway"}: {self.resource} budget of {self.limit} exhausted'


class MissingCredential(GatewayError):

    def __init__(self, variable):
        super().__init__(variable)
        self.variable = variable

    def __str__(self):
        return f'environment variable {self.variable} (API key) is not set'
