import pytest

from cityqa.evaluate import (
    JudgeScore,
    MissingField,
    MissingJustification,
    OutOfRange,
    aggregate_scores,
    build_judge_prompt,
    display_score,
    format_judge_output,
    parse_judge_output,
)


def scores(*values):
    return [JudgeScore(f'judge-{index}', value, value, 'fine')
            for (index, value) in enumerate(values)]


@pytest.mark.parametrize('values, expected', [
    ((8.14, 8.28, 7.85), '8.09'),
    ((7.06, 6.98, 6.81), '6.95'),
    ((7.61, 7.39, 7.95), '7.65'),
])
def test_aggregate(values, expected):
    means = aggregate_scores(scores(*values))

    assert display_score(means.logicality) == expected
    assert display_score(means.reliability) == expected


def test_aggregate_empty():
    with pytest.raises(ValueError):
        aggregate_scores([])


@pytest.mark.parametrize('value, expected', [
    (8.125, '8.13'),
    (8.135, '8.14'),
    (7.0, '7.00'),
    (0.004, '0.00'),
    (10, '10.00'),
])
def test_display(value, expected):
    assert display_score(value) == expected


def test_parse():
    parsed = parse_judge_output('Logicality: 8.5\nReliability: 7\nJustification: Coherent and\n'
                                'matches the ground truth.')

    assert parsed.logicality == 8.5
    assert parsed.reliability == 7.0
    assert parsed.justification == 'Coherent and\nmatches the ground truth.'


def test_parse_markup():
    raw = ('Here is my assessment.\n'
           '**Logicality**: 9\n'
           '**reliability:** 6.5\n'
           '**Justification:** The distance is right.')

    assert parse_judge_output(raw) == (9.0, 6.5, 'The distance is right.')


def test_parse_bounded():
    raw = ('Justification: The bearing is right,\nthe distance slightly off.\n'
           'Logicality: 8\n'
           'Reliability: 6.5\n')

    assert parse_judge_output(raw) == (
        8.0, 6.5, 'The bearing is right,\nthe distance slightly off.',
    )


def test_parse_tags():
    raw = ('Logicality: 9\n'
           'Justification: <b>Grounded</b> in the evidence.</Justification>\n'
           '**Reliability**: 7\n'
           'I hope this helps.')

    assert parse_judge_output(raw) == (9.0, 7.0, 'Grounded in the evidence.')


@pytest.mark.parametrize('raw, error', [
    ('Reliability: 7\nJustification: ok', MissingField),
    ('Logicality: high\nReliability: 7\nJustification: ok', MissingField),
    ('Logicality: 11\nReliability: 7\nJustification: ok', OutOfRange),
    ('Logicality: 8\nReliability: -1\nJustification: ok', OutOfRange),
    ('Logicality: 8\nReliability: 7', MissingJustification),
    ('Logicality: 8\nReliability: 7\nJustification:   ', MissingJustification),
    ('Logicality: 8\nReliability: 7\nJustification: </Justification>', MissingJustification),
    ('Justification:\nLogicality: 8\nReliability: 7', MissingJustification),
])
def test_parse_invalid(raw, error):
    with pytest.raises(error):
        parse_judge_output(raw)


def test_format():
    score = JudgeScore('judge-a', 8.5, 7.25, 'Grounded.')

    assert parse_judge_output(format_judge_output(score)) == (8.5, 7.25, 'Grounded.')


def test_score_invalid():
    with pytest.raises(OutOfRange):
        JudgeScore('judge-a', 10.5, 5, 'x')

    with pytest.raises(OutOfRange):
        JudgeScore('judge-a', float('nan'), 5, 'x')

    with pytest.raises(MissingJustification):
        JudgeScore('judge-a', 5, 5, ' ')


def test_prompt_blind():
    request = build_judge_prompt('Northeast, about 46 meters.', 'Northeast, 45.6 meters.',
                                 ['Parking Lot (parking lot, located at [54.1, 448.9, 0.5]m)'],
                                 model_id='judge-a')

    assert 'Answer: Northeast, about 46 meters.' in request.text
    assert 'Ground truth: Northeast, 45.6 meters.' in request.text
    assert '- Parking Lot (parking lot' in request.text
    assert '0 to 10' in request.text
    assert request.temperature == 0.0

    with pytest.raises(ValueError):
        build_judge_prompt('answer', 'truth', [], model_id='judge-a')

    with pytest.raises(ValueError):
        build_judge_prompt(' ', 'truth', ['evidence'], model_id='judge-a')
