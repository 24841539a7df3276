class ConfError(Exception):
    pass


class ConfSyntaxError(ConfError):

    def __init__(self, format_, decode_err, path=None):
        super().__init__(format_, decode_err, path)
        self.format = format_
        self.decode_err = decode_err
        self.path = path

    def __str__(self):
        where = f'{self.path}: ' if self.path else ''
        return f'{where}could not decode {self.format.upper()}: {self.decode_err}'


class ConfTypeError(TypeError, ConfError):
    pass


class ConfValueError(ValueError, ConfError):
    pass


class NoConfError(LookupError, ConfError):

    def __init__(self, path):
        super().__init__(path)
        self.path = path

    def __str__(self):
        return f'missing configuration file: {self.path}'


class SecretInConfError(ConfValueError):
    """An API key (or other secret) was written into a configuration
    file rather than referenced by environment variable name.

    """
    def __init__(self, location):
        super().__init__(location)
        self.location = location

    def __str__(self):
        return (f'{self.location}: secrets must not appear in configuration files; '
                'name an environment variable with api_key_env instead')


class TemplateTableError(ConfValueError):
    pass
