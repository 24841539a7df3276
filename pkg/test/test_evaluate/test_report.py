import json
import threading

import numpy as np
import pytest

from cityqa.attribute import AttributeText
from cityqa.evaluate import (
    DegenerateVector,
    EvaluationReport,
    JudgeScore,
    evaluate_samples,
    evaluator_correlation,
    format_summary,
    read_predictions,
    summarize,
)
from cityqa.gateway import Budget, BudgetExceeded, CallableTransport, Gateway, ReplayTransport
from cityqa.qa import QASample, QCStatus


JUDGES = ('judge-a', 'judge-b', 'judge-c')

EVIDENCE = (AttributeText('object', 'Parking Lot (parking lot, located at [54.1, 448.9, 0.5]m)',
                          (1,)),)


def make_sample(index, task='ObjectCaption', status=QCStatus.kept):
    targets = () if task.startswith('Scene') else (1,)
    return QASample(f's{index:02d}', task, f'Where is the parking lot ({index})?',
                    'The parking lot lies to the northeast of the News Center.', 'campus',
                    targets, 'tourist', 'generator', status, evidence=EVIDENCE)


@pytest.fixture
def samples():
    return [make_sample(index, task)
            for (index, task) in enumerate(['ObjectCaption', 'SceneCaption'] * 3)]


@pytest.fixture
def judges(model):
    return [Gateway(model.transport(), model_id=model_id) for model_id in JUDGES]


def test_correlation_oracle():
    rng = np.random.default_rng(11)
    matrix = rng.uniform(0, 10, size=(3, 50))

    correlation = evaluator_correlation(matrix)

    centered = matrix - matrix.mean(axis=1, keepdims=True)
    for i in range(3):
        for j in range(3):
            expected = (centered[i] @ centered[j]) / np.sqrt((centered[i] @ centered[i]) *
                                                             (centered[j] @ centered[j]))
            assert correlation[i, j] == pytest.approx(expected, abs=1e-9)

    assert np.array_equal(correlation, correlation.T)
    assert np.diag(correlation).tolist() == [1.0, 1.0, 1.0]


def test_correlation_mapping():
    correlation = evaluator_correlation({'a': [1, 2, 3], 'b': [2, 4, 6], 'c': [3, 2, 1]})

    assert correlation == pytest.approx(np.array([[1, 1, -1], [1, 1, -1], [-1, -1, 1]]))


def test_correlation_invalid():
    with pytest.raises(DegenerateVector) as info:
        evaluator_correlation({'a': [1, 2, 3], 'flat': [5, 5, 5]})

    assert info.value.evaluator == 'flat'

    with pytest.raises(ValueError):
        evaluator_correlation([[1, 2, 3]])

    with pytest.raises(ValueError):
        evaluator_correlation([[1], [2]])


def test_evaluate_predictions(samples, judges, model):
    predictions = {sample.sample_id: 'Northeast of the News Center.' for sample in samples[:4]}

    reports = evaluate_samples(samples, judges, predictions=predictions)

    # samples without a prediction are skipped
    assert [report.sample_id for report in reports] == ['s00', 's01', 's02', 's03']

    for report in reports:
        assert [score.evaluator for score in report.judges] == list(JUDGES)
        assert 0 < report.rouge_l < 1
        assert report.mean_logicality == pytest.approx(
            np.mean([score.logicality for score in report.judges])
        )

    # judges see neither the generator nor the persona
    judge_texts = [request.text for request in model.requests]
    assert judge_texts
    assert not any('generator' in text or 'tourist' in text for text in judge_texts)


def test_evaluate_answerer(samples, judges, model):
    answerer = Gateway(model.transport(), model_id='answerer')

    reports = evaluate_samples(samples, judges, answerer=answerer, workers=2)

    assert len(reports) == 6
    assert all(report.rouge_l > 0 for report in reports)


def test_evaluate_kept_only(judges):
    samples = [make_sample(0), make_sample(1, status=QCStatus.rejected)]
    predictions = {'s00': 'Northeast.', 's01': 'Northeast.'}

    (report,) = evaluate_samples(samples, judges, predictions=predictions)

    assert report.sample_id == 's00'


def test_evaluate_abstain(samples, model, caplog_struct):
    model.scores['judge-b'] = (11.0, 5.0)
    judges = [Gateway(model.transport(), model_id=model_id) for model_id in JUDGES]

    reports = evaluate_samples(samples[:1], judges, predictions={'s00': 'Northeast.'},
                               logger=caplog_struct.logger)

    assert [score.evaluator for score in reports[0].judges] == ['judge-a', 'judge-c']
    assert caplog_struct.field_equals(1, msg='unparseable judgement', evaluator='judge-b')


def test_evaluate_unrecorded(samples, judges, caplog_struct):
    judges[0] = Gateway(ReplayTransport({}), model_id='judge-a')

    (report,) = evaluate_samples(samples[:1], judges, predictions={'s00': 'Northeast.'},
                                 logger=caplog_struct.logger)

    assert [score.evaluator for score in report.judges] == ['judge-b', 'judge-c']
    assert caplog_struct.field_equals(1, msg='judge abstains', evaluator='judge-a')


def test_evaluate_budget(samples, judges, model):
    judges[2] = Gateway(model.transport(), model_id='judge-c', budget=Budget(max_calls=0))

    with pytest.raises(BudgetExceeded):
        evaluate_samples(samples[:2], judges, predictions={'s00': 'Northeast.'})


def test_judges_concurrent(samples, model):
    # each judge answers only once all three are in flight
    barrier = threading.Barrier(len(JUDGES), timeout=5)

    def judging(request):
        barrier.wait()
        return model(request)

    judges = [Gateway(CallableTransport(judging), model_id=model_id) for model_id in JUDGES]

    (report,) = evaluate_samples(samples[:1], judges, predictions={'s00': 'Northeast.'},
                                 workers=3)

    assert [score.evaluator for score in report.judges] == list(JUDGES)
    assert not barrier.broken


def test_evaluate_requires_candidates(samples, judges):
    with pytest.raises(ValueError):
        evaluate_samples(samples, judges)


def test_report_dict():
    report = EvaluationReport.build('s00', 'ObjectCaption', 0.5, 0.6, 0.7, [
        JudgeScore('judge-b', 6, 8, 'ok'),
        JudgeScore('judge-a', 8, 6, 'ok'),
    ])

    assert [score.evaluator for score in report.judges] == ['judge-a', 'judge-b']
    assert (report.mean_logicality, report.mean_reliability) == (7.0, 7.0)
    assert EvaluationReport.from_dict(json.loads(json.dumps(report.to_dict()))) == report

    unjudged = EvaluationReport.build('s01', 'SceneCaption', 0.1, 0.2, 0.3, [])
    assert unjudged.mean_logicality is None


def test_summary(samples, judges):
    predictions = {sample.sample_id: f'Northeast of the News Center ({sample.sample_id}).'
                   for sample in samples}
    reports = evaluate_samples(samples, judges, predictions=predictions)

    summary = summarize(reports)

    assert summary['reports'] == 6
    assert summary['overall']['count'] == 6
    assert set(summary['tasks']) == {'ObjectCaption', 'SceneCaption'}
    assert summary['tasks']['ObjectCaption']['count'] == 3
    assert set(summary['levels']) == {'object', 'scene'}
    assert set(summary['evaluators']) == set(JUDGES)

    correlation = summary['correlation']
    assert correlation['evaluators'] == list(JUDGES)
    assert correlation['samples'] == 6
    assert np.array(correlation['logicality']).shape == (3, 3)

    text = format_summary(summary)
    assert text.splitlines()[0].split() == ['Task', 'N', 'B-4', 'ROU.', 'MET.', 'Log.', 'Rel.']
    assert any(line.startswith('Overall') for line in text.splitlines())
    assert 'meteor_lite' in text
    assert 'Correlation (logicality, 6 samples)' in text


def test_summary_empty():
    summary = summarize([])

    assert summary['overall']['bleu4'] is None
    assert summary['correlation'] is None
    assert 'Overall' in format_summary(summary)


def test_read_predictions(tmp_path):
    path = tmp_path / 'predictions.jsonl'
    path.write_text('{"sample_id": "s00", "answer": "North."}\n'
                    '{"sample_id": "s01", "answer": "South."}\n')

    assert read_predictions(path) == {'s00': 'North.', 's01': 'South.'}

    path.write_text('{"sample_id": "s00"}\n')

    with pytest.raises(ValueError):
        read_predictions(path)
