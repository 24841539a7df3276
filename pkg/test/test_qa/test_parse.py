import pytest

from cityqa.qa import (
    DefectClass,
    MalformedOutput,
    parse_defects,
    parse_paraphrases,
    parse_tagged_qa,
)

from test.fixture import golden


def test_pairs():
    raw = ('Sure! Here you go:\n'
           '<Question> Where is the parking lot? </Question>\n<Answer> Northeast. </Answer>\n'
           'and also <Question>How far?</Question><Answer>About 45.6 meters.</Answer> Done.')

    assert parse_tagged_qa(raw) == [
        ('Where is the parking lot?', 'Northeast.'),
        ('How far?', 'About 45.6 meters.'),
    ]


def test_multiline():
    raw = '<Question>What\nis it?</Question>\n\n<Answer>A tree\nby the road.</Answer>'

    assert parse_tagged_qa(raw) == [('What\nis it?', 'A tree\nby the road.')]


@pytest.mark.parametrize('raw, reason', [
    ('', 'no question-answer pairs found'),
    ('I cannot help with that.', 'no question-answer pairs found'),
    ('<Answer>a</Answer>', 'answer precedes its question'),
    ('</Question>', 'closing </Question> without opening tag'),
    ('<Question>q', '<Question> opened without closing'),
    ('<Question>q<Answer>a</Answer>', '<Question> opened without closing'),
    ('<Question>q</Question>', 'question without answer'),
    ('<Question>q</Question><Question>r</Question>', 'question without answer'),
    ('<Question>q</Question> and <Answer>a</Answer>',
     'answer must immediately follow its question'),
    ('<Question>  </Question><Answer>a</Answer>', 'empty question'),
    ('<Question>q</Question><Answer>\n</Answer>', 'empty answer'),
    ('<Question>q</Question><Answer>a', '<Answer> opened without closing'),
])
def test_malformed(raw, reason):
    with pytest.raises(MalformedOutput) as info:
        parse_tagged_qa(raw)

    assert info.value.reason == reason


@pytest.mark.parametrize('output', golden.load_table('malformed.toml', 'output'))
def test_malformed_corpus(output):
    with pytest.raises(MalformedOutput) as info:
        parse_tagged_qa(output['raw'])

    assert (info.value.reason, info.value.position) == (output['reason'], output['position'])


def test_malformed_corpus_size():
    assert len(golden.load_table('malformed.toml', 'output')) == 10


def test_malformed_position():
    raw = '<Question>q</Question><Answer>a</Answer>\n<Answer>b</Answer>'

    with pytest.raises(MalformedOutput) as info:
        parse_tagged_qa(raw)

    assert info.value.position == raw.index('<Answer>b')
    assert f'offset {info.value.position}' in str(info.value)


def test_paraphrases():
    raw = '1. Where is it?\n\n- "Where can it be found?"\n(3) Which way to it?\n* Locate it.\n'

    assert parse_paraphrases(raw) == [
        'Where is it?',
        'Where can it be found?',
        'Which way to it?',
        'Locate it.',
    ]


def test_defects():
    raw = ('Defect: PrivacyRisk | names a resident\n'
           'Defect: AmbiguousQuestion\n'
           '  Defect : Vague | unclear\n'
           'Some commentary.')

    (found, unknown) = parse_defects(raw)

    assert found == [
        (DefectClass.PrivacyRisk, 'names a resident'),
        (DefectClass.AmbiguousQuestion, ''),
    ]
    assert unknown == ['Vague']

    assert parse_defects('No defects') == ([], [])
