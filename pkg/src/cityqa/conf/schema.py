"""Validation and cleaning of run configuration."""
import math

import loguru
import schema
from schema import And, Optional, Or, Use

from .error import ConfValueError


class ConfSchema(schema.Schema):
    """Configuration validation and cleaning.

    Extends `schema.Schema` to report failures as `ConfValueError`.

    """
    def validate(self, data, **kwargs):
        try:
            return super().validate(data, **kwargs)
        except schema.SchemaError as exc:
            raise ConfValueError(exc.code) from exc


STAGES = ('ingest', 'graph', 'render', 'serialize', 'generate', 'qc', 'evaluate', 'encode-demo')

STREAMS = (
    'object.view',
    'object.shape',
    'object.landmark',
    'relationship.geometry',
    'relationship.landmark',
    'scene.view',
    'scene.landmark',
)


def _number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _integer(value):
    return isinstance(value, int) and not isinstance(value, bool)


def positive(name):
    return And(_number, lambda value: value > 0, Use(float),
               error=f'{name}: expected a positive number')


def non_negative(name):
    return And(_number, lambda value: value >= 0, Use(float),
               error=f'{name}: expected a non-negative number')


def count(name, minimum=0):
    return And(_integer, lambda value: value >= minimum,
               error=f'{name}: expected an integer >= {minimum}')


def text(name):
    return And(str, len, error=f'{name}: expected non-empty text')


def _log_level(value):
    try:
        loguru.logger.level(value.upper())
    except ValueError:
        return False
    else:
        return True


log_level = And(str, _log_level, error='log.level: unsupported log level')


log_sink = {
    Optional('file'): str,
    Optional('directory'): str,
    Optional('level'): log_level,
    Optional('rotation'): Or(str, int),
    Optional('retention'): Or(str, int),
    Optional('compression'): str,
}


def gateway_entry(name):
    return {
        'model': text(f'{name}.model'),
        'endpoint': text(f'{name}.endpoint'),
        'api_key_env': text(f'{name}.api_key_env'),
        Optional('in_flight', default=4): count(f'{name}.in_flight', 1),
        Optional('max_calls', default=100000): count(f'{name}.max_calls', 0),
        Optional('max_tokens', default=100000000): count(f'{name}.max_tokens', 0),
        Optional('timeout', default=60.0): positive(f'{name}.timeout'),
        Optional('temperature'): And(_number, lambda value: 0 <= value <= 2,
                                     error=f'{name}.temperature: expected a value in [0, 2]'),
    }


def build(task_names):
    """Construct the run configuration schema for the given task names."""
    return ConfSchema({
        'pipeline': {
            'scenes': [str],
            'stages': And([And(str, lambda stage: stage in STAGES)],
                          error=f'pipeline.stages: expected stages from {", ".join(STAGES)}'),
            'out': text('pipeline.out'),
            'seed': count('pipeline.seed'),
        },
        'scene': {
            'adjacency_radius': positive('scene.adjacency_radius'),
            'knn_k': count('scene.knn_k'),
        },
        'render': {
            'global_scale': positive('render.global_scale'),
            'crop_scale': positive('render.crop_scale'),
            'crop_margin': non_negative('render.crop_margin'),
            'overlay': bool,
            'labels': bool,
        },
        'serialize': {
            'max_relations': count('serialize.max_relations'),
        },
        'generate': {
            'n_pairs': count('generate.n_pairs', 1),
            'temperature': And(_number, lambda value: 0 <= value <= 2,
                               error='generate.temperature: expected a value in [0, 2]'),
            'max_output_tokens': count('generate.max_output_tokens', 1),
            'n_paraphrases': count('generate.n_paraphrases'),
            'personas': [text('generate.personas')],
            'tasks': {
                Optional(Or(*task_names, error='generate.tasks: unknown task category')):
                    count('generate.tasks'),
            },
        },
        'evaluate': {
            'predictions': str,
        },
        'gateway': {
            'cache': str,
            'generator': gateway_entry('gateway.generator'),
            'judges': And([gateway_entry('gateway.judges')], lambda judges: len(judges) == 3,
                          error='gateway.judges: exactly three judges are required'),
            Optional('reviewers'): And(
                [gateway_entry('gateway.reviewers')],
                lambda reviewers: len(reviewers) == 3,
                error='gateway.reviewers: exactly three reviewers are required',
            ),
            Optional('answerer'): gateway_entry('gateway.answerer'),
        },
        'encoder': {
            'd': count('encoder.d', 1),
            'D_llm': count('encoder.D_llm', 1),
            'l': count('encoder.l', 1),
            'C': count('encoder.C', 1),
            'K': count('encoder.K', 1),
            'seed': count('encoder.seed'),
            'disabled_streams': [And(str, lambda stream: stream in STREAMS,
                                     error=f'encoder.disabled_streams: expected streams from '
                                           f'{", ".join(STREAMS)}')],
            'scene': str,
            'task': Or(*task_names, error='encoder.task: unknown task category'),
            'selection': [count('encoder.selection')],
        },
        'log': Or(str, log_sink, [log_sink]),
    })
