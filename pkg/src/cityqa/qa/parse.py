"""Parsers of model outputs."""
import re
import typing

from .error import MalformedOutput
from .model import DefectClass


TAG_PATTERN = re.compile(r'<(?P<close>/?)(?P<name>Question|Answer)>')


def parse_tagged_qa(raw: str) -> typing.List[typing.Tuple[str, str]]:
    """Extract `<Question>…</Question><Answer>…</Answer>` pairs, in order.

    Prose may surround pairs, but only whitespace may separate a
    question from its answer. Inner text is stripped and must be
    non-empty.

    """
    pairs = []

    # states: outside, question, after_question, answer
    state = 'outside'
    opened_at = 0
    inner_start = 0
    question = None

    for match in TAG_PATTERN.finditer(raw):
        tag = ('/' if match['close'] else '') + match['name']
        position = match.start()

        if state == 'outside':
            if tag == 'Question':
                (state, opened_at, inner_start) = ('question', position, match.end())
            elif tag == 'Answer':
                raise MalformedOutput('answer precedes its question', position)
            else:
                raise MalformedOutput(f'closing </{match["name"]}> without opening tag',
                                      position)

        elif state == 'question':
            if tag != '/Question':
                raise MalformedOutput('<Question> opened without closing', opened_at)

            question = raw[inner_start:position].strip()

            if not question:
                raise MalformedOutput('empty question', opened_at)

            (state, opened_at) = ('after_question', position)

        elif state == 'after_question':
            if tag != 'Answer':
                raise MalformedOutput('question without answer', opened_at)

            if raw[opened_at:position].partition('>')[2].strip():
                raise MalformedOutput('answer must immediately follow its question', position)

            (state, opened_at, inner_start) = ('answer', position, match.end())

        else:
            if tag != '/Answer':
                raise MalformedOutput('<Answer> opened without closing', opened_at)

            answer = raw[inner_start:position].strip()

            if not answer:
                raise MalformedOutput('empty answer', opened_at)

            pairs.append((question, answer))
            state = 'outside'

    if state == 'question':
        raise MalformedOutput('<Question> opened without closing', opened_at)

    if state == 'after_question':
        raise MalformedOutput('question without answer', opened_at)

    if state == 'answer':
        raise MalformedOutput('<Answer> opened without closing', opened_at)

    if not pairs:
        raise MalformedOutput('no question-answer pairs found', 0)

    return pairs


_ENUMERATION = re.compile(r'^\s*(?:\(?\d+[.):]|[-*•])\s*')


def parse_paraphrases(raw: str) -> typing.List[str]:
    """One paraphrase per non-empty line, list markers removed."""
    lines = (_ENUMERATION.sub('', line).strip() for line in raw.splitlines())
    return [line.strip('"') for line in lines if line]


_DEFECT_LINE = re.compile(r'^\s*Defect\s*:\s*(?P<name>[A-Za-z]+)\s*(?:\|\s*(?P<rationale>.*))?$',
                          re.MULTILINE)


def parse_defects(raw: str) -> typing.Tuple[typing.List[typing.Tuple[DefectClass, str]],
                                             typing.List[str]]:
    """(recognized (class, rationale) pairs, unrecognized class names)"""
    found = []
    unknown = []

    for match in _DEFECT_LINE.finditer(raw):
        name = match['name']
        rationale = (match['rationale'] or '').strip()

        try:
            found.append((DefectClass(name), rationale))
        except ValueError:
            unknown.append(name)

    return (found, unknown)
