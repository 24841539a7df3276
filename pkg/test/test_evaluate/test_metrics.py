import math

import pytest

from cityqa.evaluate import (
    METEOR_VARIANT,
    EmptyText,
    align,
    bleu4,
    count_chunks,
    lcs_length,
    meteor_lite,
    rouge_l,
    tokenize,
)

from test.fixture import golden


METRIC_CASES = golden.load_table('metrics.toml', 'case')


def test_tokenize():
    assert tokenize('The car, parked.') == ['the', 'car', ',', 'parked', '.']


def test_bleu_identity():
    text = 'The parking lot lies to the northeast of the News Center.'

    assert bleu4(text, [text]) == 1.0
    assert bleu4(text, text) == 1.0


def test_bleu_precision():
    # clipped precisions 6/7, 5/6, 4/5 and 3/4; no brevity penalty
    score = bleu4('the cat sat on the mat today', ['the cat sat on the mat'])

    assert score == pytest.approx((3 / 7) ** 0.25)


def test_bleu_brevity():
    score = bleu4('the cat sat on the mat', ['the cat sat on the mat today'])

    assert score == pytest.approx(math.exp(1 - 7 / 6))


def test_bleu_references():
    # the closest reference length sets the brevity penalty
    score = bleu4('the cat sat on the mat', ['the cat sat on the mat today', 'a cat sat on a mat'])

    assert score == pytest.approx(1.0)


def test_bleu_smoothed():
    # precisions 5/6, 3/5 and 1/4; no 4-gram matches of 3
    score = bleu4('the cat sat on the mat', ['the cat is on the mat'])

    assert score == pytest.approx((5 / 6 * 3 / 5 * 1 / 4 * 1e-9 / 3) ** 0.25)
    assert score == pytest.approx(2.54066e-3, rel=1e-4)


def test_bleu_short():
    score = bleu4('yes', ['yes'])

    assert 0 < score < 1e-6
    assert score == pytest.approx(1e-9 ** 0.75)


def test_bleu_disjoint():
    assert bleu4('alpha beta gamma delta', ['one two three four']) < 1e-8


def test_bleu_empty():
    with pytest.raises(EmptyText):
        bleu4('   ', ['reference'])

    with pytest.raises(EmptyText):
        bleu4('candidate', ['', ' '])


def test_lcs():
    assert lcs_length(list('ABCBDAB'), list('BDCABA')) == 4
    assert lcs_length([], ['a']) == 0


def test_rouge():
    text = 'the car is parked'

    assert rouge_l(text, text) == 1.0
    assert rouge_l('the car is red', 'the red car') == pytest.approx(4 / 7)
    assert rouge_l('the cat sat', 'the cat ran') == pytest.approx(2 / 3)
    assert rouge_l('alpha', 'beta') == 0.0

    with pytest.raises(EmptyText):
        rouge_l('text', '')


def test_meteor_single():
    assert meteor_lite('yes', 'yes') == 0.5


def test_meteor_identity():
    text = 'the car is parked'

    # a single chunk of m matches: 1 − 0.5 / m³
    assert meteor_lite(text, text) == pytest.approx(1 - 0.5 / 4 ** 3)


def test_meteor_stem():
    assert meteor_lite('parking cars', 'parked car') == pytest.approx(1 - 0.5 / 2 ** 3)


def test_meteor_fragmented():
    # 2 matches, in 2 chunks: F_mean (1 − 0.5)
    precision = 2 / 3
    recall = 2 / 2
    f_mean = 10 * precision * recall / (recall + 9 * precision)

    assert meteor_lite('car red the', 'the car') == pytest.approx(f_mean * 0.5)


def test_meteor_disjoint():
    assert meteor_lite('alpha', 'beta') == 0.0
    assert 'no synonym' in METEOR_VARIANT


def test_align():
    # the second token extends the first's match
    assert align(['a', 'b'], ['b', 'a', 'b']) == [(0, 1), (1, 2)]

    assert align(['the', 'cat', 'the', 'mat'], ['the', 'mat', 'the', 'cat']) == [
        (0, 0), (1, 3), (2, 2), (3, 1),
    ]


def test_chunks():
    assert count_chunks([]) == 0
    assert count_chunks([(0, 0), (1, 1), (3, 2)]) == 2
    assert count_chunks([(0, 1), (1, 2)]) == 1


@pytest.mark.parametrize('candidate, reference', [
    ('The parking lot lies northeast.', 'A parking lot is to the northeast of the center.'),
    ('Main Street runs south of the building.', 'The road passes south of the News Center.'),
    ('There is a car.', 'One car is parked within the lot.'),
])
def test_range(candidate, reference):
    for score in (bleu4(candidate, [reference]),
                  rouge_l(candidate, reference),
                  meteor_lite(candidate, reference)):
        assert 0.0 <= score <= 1.0


def expected_bleu(case):
    log_precision = 0.0

    for (matches, total) in zip(case['matches'], case['totals']):
        precision = matches / total if matches else 1e-9 / max(1, total)
        log_precision += math.log(precision) / 4

    (length, reference) = case['lengths']
    brevity = 1.0 if length > reference else math.exp(1 - reference / length)
    return min(1.0, brevity * math.exp(log_precision))


def expected_rouge(case):
    (length, reference) = case['lengths']

    if case['lcs'] == 0:
        return 0.0

    (precision, recall) = (case['lcs'] / length, case['lcs'] / reference)
    return 2 * precision * recall / (precision + recall)


def expected_meteor(case):
    (length, reference) = case['lengths']
    aligned = case['aligned']

    if aligned == 0:
        return 0.0

    (precision, recall) = (aligned / length, aligned / reference)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    return f_mean * (1 - 0.5 * (case['chunks'] / aligned) ** 3)


def test_metric_corpus_size():
    assert len(METRIC_CASES) == 20


@pytest.mark.parametrize('case', METRIC_CASES, ids=lambda case: case['candidate'])
def test_metric_corpus(case):
    (candidate, reference) = (case['candidate'], case['reference'])

    assert [len(tokenize(candidate)), len(tokenize(reference))] == case['lengths']
    assert lcs_length(tokenize(candidate), tokenize(reference)) == case['lcs']

    alignment = align(tokenize(candidate), tokenize(reference))
    assert (len(alignment), count_chunks(alignment)) == (case['aligned'], case['chunks'])

    assert bleu4(candidate, [reference]) == pytest.approx(expected_bleu(case), rel=1e-9)
    assert rouge_l(candidate, reference) == pytest.approx(expected_rouge(case), rel=1e-9)
    assert meteor_lite(candidate, reference) == pytest.approx(expected_meteor(case), rel=1e-9)
