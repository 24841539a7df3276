"""Blind judging of answers for logicality and reliability."""
import decimal
import math
import re
import typing
from dataclasses import dataclass

from cityqa import conf
from cityqa.gateway import CompletionRequest, TextPart
from cityqa.qa.prompt import prompt_templates

from .error import MissingField, MissingJustification, OutOfRange


SCORE_RANGE = (0.0, 10.0)


@dataclass(frozen=True)
class JudgeScore:

    evaluator: str
    logicality: float
    reliability: float
    justification: str

    def __post_init__(self):
        for field in ('logicality', 'reliability'):
            value = float(getattr(self, field))

            if not (math.isfinite(value) and SCORE_RANGE[0] <= value <= SCORE_RANGE[1]):
                raise OutOfRange(field, value)

            object.__setattr__(self, field, value)

        if not self.justification or not self.justification.strip():
            raise MissingJustification()

    def to_dict(self):
        return {'evaluator': self.evaluator,
                'logicality': self.logicality,
                'reliability': self.reliability,
                'justification': self.justification}

    @classmethod
    def from_dict(cls, data):
        return cls(data['evaluator'], data['logicality'], data['reliability'],
                   data['justification'])


def build_judge_prompt(answer, truth, evidence, *, model_id, max_output_tokens=512):
    """Judge request carrying the answer, the ground truth and the scene
    evidence, and nothing identifying the answer's source.

    """
    if not answer.strip() or not truth.strip():
        raise ValueError('judge prompt requires an answer and a ground truth')

    evidence = [str(item) for item in evidence]

    if not evidence:
        raise ValueError('judge prompt requires scene evidence')

    templates = prompt_templates()['judge']
    text = conf.render_template(
        templates['user'],
        answer=answer,
        truth=truth,
        evidence=evidence,
        scale_directive=templates['scale_directive'],
    )
    return CompletionRequest(model_id, templates['system'], (TextPart(text.strip()),),
                             0.0, max_output_tokens)


_NUMBER = r'[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?'

_FIELDS = {
    field: re.compile(rf'^[ \t*]*{field}[ \t*]*:[ \t*]*(?P<value>{_NUMBER})?',
                      re.IGNORECASE | re.MULTILINE)
    for field in ('Logicality', 'Reliability')
}

_FIELD_LINE = r'^[ \t*]*(?:Logicality|Reliability|Justification)[ \t*]*:'

_JUSTIFICATION = re.compile(
    rf'^[ \t*]*Justification[ \t*]*:[ \t*]*(?P<text>.*?)(?={_FIELD_LINE}|\Z)',
    re.IGNORECASE | re.MULTILINE | re.DOTALL,
)

_MARKUP = re.compile(r'</?[A-Za-z][\w-]*>')


class ParsedJudgement(typing.NamedTuple):

    logicality: float
    reliability: float
    justification: str


def parse_judge_output(raw) -> ParsedJudgement:
    """The first "Logicality:" and "Reliability:" scores and the
    justification following "Justification:".

    The justification runs to the next field line (or the end), with
    markup tags removed.

    """
    scores = []

    for (field, pattern) in _FIELDS.items():
        match = pattern.search(raw)

        if match is None or match['value'] is None:
            raise MissingField(field)

        value = float(match['value'])

        if not (math.isfinite(value) and SCORE_RANGE[0] <= value <= SCORE_RANGE[1]):
            raise OutOfRange(field, value)

        scores.append(value)

    match = _JUSTIFICATION.search(raw)
    justification = _MARKUP.sub('', match['text']).strip() if match else ''

    if not justification:
        raise MissingJustification()

    return ParsedJudgement(*scores, justification)


def format_judge_output(score) -> str:
    return (f'Logicality: {score.logicality!r}\n'
            f'Reliability: {score.reliability!r}\n'
            f'Justification: {score.justification}')


class MeanScores(typing.NamedTuple):

    logicality: float
    reliability: float


def aggregate_scores(scores) -> MeanScores:
    """Arithmetic means of logicality and reliability across evaluators."""
    scores = list(scores)

    if not scores:
        raise ValueError('aggregate_scores requires at least one score')

    return MeanScores(
        math.fsum(score.logicality for score in scores) / len(scores),
        math.fsum(score.reliability for score in scores) / len(scores),
    )


_HUNDREDTH = decimal.Decimal('0.01')


def display_score(value, places=_HUNDREDTH) -> str:
    """`value` rounded half up to two decimal places."""
    rounded = decimal.Decimal(repr(float(value))).quantize(places, decimal.ROUND_HALF_UP)
    return str(rounded + 0)
