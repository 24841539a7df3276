"""Rendering of structured log records as terse inline TOML.

Fields are written `key=value`, separated by single spaces; nested
mappings as `{key=value …}`.

"""
import enum
import pathlib

import numpy as np
import toml


class LogRecordEncoder(toml.TomlEncoder):

    #: types written as the TOML string of their str()
    stringify = (enum.Enum, pathlib.PurePath)

    def dump_value(self, value):
        if isinstance(value, self.stringify):
            value = str(value)
        elif isinstance(value, (np.generic, np.ndarray)):
            value = value.tolist()

        if isinstance(value, dict):
            return '{' + self.dump_fields(value) + '}'

        return super().dump_value(value)

    def dump_fields(self, fields) -> str:
        return ' '.join(f'{key}={self.dump_value(value)}' for (key, value) in fields.items())


log_record_encoder = LogRecordEncoder()


def dump_structured_log_record(fields) -> str:
    return log_record_encoder.dump_fields(fields)
