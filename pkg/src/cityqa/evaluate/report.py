"""Per-sample evaluation reports and their summaries."""
import collections
import collections.abc
import concurrent.futures
import math
import typing
from dataclasses import dataclass

import numpy as np

from cityqa import conf
from cityqa.gateway import (
    BudgetExceeded,
    CompletionRequest,
    GatewayError,
    MissingCredential,
    TextPart,
)
from cityqa.qa import QCStatus
from cityqa.qa.prompt import prompt_templates
from cityqa.taxonomy import TaskCategory, TaskLevel
from cityqa.util.format import read_jsonl
from cityqa.util.log import null_logger

from .error import DegenerateVector, JudgeOutputError
from .judge import (
    JudgeScore,
    aggregate_scores,
    build_judge_prompt,
    display_score,
    parse_judge_output,
)
from .metrics import METEOR_VARIANT, bleu4, meteor_lite, rouge_l


@dataclass(frozen=True)
class EvaluationReport:
    """Text metrics and judge scores of one candidate answer.

    Means are None where every judge abstained.

    """
    sample_id: str
    task: TaskCategory
    bleu4: float
    rouge_l: float
    meteor: float
    judges: typing.Tuple[JudgeScore, ...] = ()
    mean_logicality: typing.Optional[float] = None
    mean_reliability: typing.Optional[float] = None

    @classmethod
    def build(cls, sample_id, task, bleu, rouge, meteor, judges):
        judges = tuple(sorted(judges, key=lambda score: score.evaluator))
        means = aggregate_scores(judges) if judges else (None, None)
        return cls(sample_id, TaskCategory.parse(task), bleu, rouge, meteor, judges, *means)

    def to_dict(self):
        return {
            'sample_id': self.sample_id,
            'task': self.task.value,
            'bleu4': self.bleu4,
            'rouge_l': self.rouge_l,
            'meteor': self.meteor,
            'judges': [score.to_dict() for score in self.judges],
            'mean_logicality': self.mean_logicality,
            'mean_reliability': self.mean_reliability,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data['sample_id'],
            TaskCategory.parse(data['task']),
            data['bleu4'],
            data['rouge_l'],
            data['meteor'],
            tuple(JudgeScore.from_dict(score) for score in data.get('judges', ())),
            data.get('mean_logicality'),
            data.get('mean_reliability'),
        )


def evaluator_correlation(scores) -> np.ndarray:
    """Pairwise Pearson correlation of evaluators' score vectors.

    `scores` maps each evaluator to its scores over a common sample set
    (or is a sequence of such vectors).

    """
    if isinstance(scores, collections.abc.Mapping):
        (names, vectors) = (list(scores), list(scores.values()))
    else:
        vectors = list(scores)
        names = list(range(len(vectors)))

    matrix = np.array(vectors, dtype=np.float64)

    if matrix.ndim != 2 or matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise ValueError('correlation requires at least 2 evaluators over at least 2 samples')

    for (name, vector) in zip(names, matrix):
        if np.ptp(vector) == 0:
            raise DegenerateVector(name)

    correlation = np.corrcoef(matrix)
    correlation = (correlation + correlation.T) / 2
    np.fill_diagonal(correlation, 1.0)
    return np.clip(correlation, -1.0, 1.0)


def build_answer_prompt(question, evidence, *, model_id, max_output_tokens=512):
    templates = prompt_templates()['answer']
    text = conf.render_template(templates['user'], question=question,
                                evidence=[str(item) for item in evidence])
    return CompletionRequest(model_id, templates['system'], (TextPart(text.strip()),),
                             0.0, max_output_tokens)


def read_predictions(path) -> typing.Dict[str, str]:
    """Candidate answers by sample_id, from JSONL lines {sample_id, answer}."""
    predictions = {}

    for (lineno, row) in enumerate(read_jsonl(path), 1):
        try:
            predictions[row['sample_id']] = row['answer']
        except (KeyError, TypeError):
            raise ValueError(f'{path}: record {lineno} requires sample_id and answer') from None

    return predictions


def _judge(sample, answer, gateway, logger):
    request = build_judge_prompt(answer, sample.answer, sample.evidence, model_id=gateway.model_id)

    try:
        response = gateway.complete(request)
    except (BudgetExceeded, MissingCredential):
        raise
    except GatewayError as exc:
        logger.warning('judge abstains', evaluator=gateway.model_id, sample=sample.sample_id,
                       error=str(exc))
        return None

    if not response.ok:
        return None

    try:
        parsed = parse_judge_output(response.text)
    except JudgeOutputError as exc:
        logger.warning('unparseable judgement', evaluator=gateway.model_id,
                       sample=sample.sample_id, error=str(exc))
        return None

    return JudgeScore(gateway.model_id, *parsed)


def _candidate(sample, predictions, answerer, logger):
    if predictions is not None:
        return predictions.get(sample.sample_id)

    request = build_answer_prompt(sample.question, sample.evidence, model_id=answerer.model_id)

    try:
        response = answerer.complete(request)
    except (BudgetExceeded, MissingCredential):
        raise
    except GatewayError as exc:
        logger.warning('answerer failed', sample=sample.sample_id, error=str(exc))
        return None

    return response.text.strip() if response.ok else None


def evaluate_samples(samples, judges, *, predictions=None, answerer=None, workers=4,
                     logger=null_logger) -> typing.List[EvaluationReport]:
    """Score a candidate answer for every kept sample against the
    sample's answer (the ground truth).

    Candidates are taken from `predictions` (by sample_id) when given,
    otherwise requested of `answerer`. Samples without a candidate are
    skipped; judges failing to produce a valid score abstain. Judge
    calls run concurrently, across samples and across judges.

    """
    if predictions is None and answerer is None:
        raise ValueError('evaluation requires predictions or an answerer')

    kept = [sample for sample in samples if sample.qc_status is QCStatus.kept]

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        candidates = executor.map(lambda sample: _candidate(sample, predictions, answerer, logger),
                                  kept)

        scored = []

        for (sample, answer) in zip(kept, candidates):
            if not answer or not answer.strip():
                logger.info('no candidate answer: skipped', sample=sample.sample_id)
                continue

            futures = [executor.submit(_judge, sample, answer, gateway, logger)
                       for gateway in judges]
            scored.append((sample, answer, futures))

        reports = [
            EvaluationReport.build(
                sample.sample_id,
                sample.task,
                bleu4(answer, [sample.answer]),
                rouge_l(answer, sample.answer),
                meteor_lite(answer, sample.answer),
                [score for score in (future.result() for future in futures) if score is not None],
            )
            for (sample, answer, futures) in scored
        ]

    logger.info('evaluation complete', samples=len(kept), reports=len(reports))

    return sorted(reports, key=lambda report: report.sample_id)


METRICS = ('bleu4', 'rouge_l', 'meteor')

JUDGE_FIELDS = ('logicality', 'reliability')


def _mean(values):
    values = [value for value in values if value is not None]
    return math.fsum(values) / len(values) if values else None


def _group_means(reports):
    reports = list(reports)
    return {
        'count': len(reports),
        **{metric: _mean(getattr(report, metric) for report in reports) for metric in METRICS},
        'logicality': _mean(report.mean_logicality for report in reports),
        'reliability': _mean(report.mean_reliability for report in reports),
    }


def _correlations(reports):
    evaluators = sorted({score.evaluator for report in reports for score in report.judges})

    if len(evaluators) < 2:
        return None

    # samples scored by every evaluator
    common = [
        {score.evaluator: score for score in report.judges}
        for report in reports
        if {score.evaluator for score in report.judges} == set(evaluators)
    ]

    result = {'evaluators': evaluators, 'samples': len(common)}

    for field in JUDGE_FIELDS:
        vectors = {name: [getattr(scores[name], field) for scores in common]
                   for name in evaluators}

        try:
            result[field] = evaluator_correlation(vectors).tolist()
        except (ValueError, DegenerateVector):
            result[field] = None

    return result


def summarize(reports):
    """Means by task, by task level and by evaluator, with the
    inter-evaluator correlation of each judge score.

    """
    reports = list(reports)

    by_task = collections.defaultdict(list)
    by_level = collections.defaultdict(list)
    by_evaluator = collections.defaultdict(lambda: collections.defaultdict(list))

    for report in reports:
        by_task[report.task].append(report)
        by_level[report.task.level].append(report)

        for score in report.judges:
            by_evaluator[score.evaluator][report.task].append(score)

    return {
        'meteor_variant': METEOR_VARIANT,
        'reports': len(reports),
        'overall': _group_means(reports),
        'tasks': {task.value: _group_means(by_task[task])
                  for task in TaskCategory if task in by_task},
        'levels': {level.value: _group_means(by_level[level])
                   for level in TaskLevel if level in by_level},
        'evaluators': {
            evaluator: {
                task.value: {field: _mean(getattr(score, field) for score in scores)
                             for field in JUDGE_FIELDS}
                for (task, scores) in sorted(tasks.items())
            }
            for (evaluator, tasks) in sorted(by_evaluator.items())
        },
        'correlation': _correlations(reports),
    }


def _cell(value, scale=1):
    return '-' if value is None else display_score(value * scale)


def format_summary(summary) -> str:
    """Plain-text tables: text metrics (×100) and mean judge scores per
    task, then per-evaluator judge means and correlations.

    """
    header = f'{"Task":<24} {"N":>5} {"B-4":>7} {"ROU.":>7} {"MET.":>7} {"Log.":>6} {"Rel.":>6}'
    lines = [header, '-' * len(header)]

    rows = list(summary['tasks'].items()) + [('Overall', summary['overall'])]

    for (name, means) in rows:
        lines.append(
            f'{name:<24} {means["count"]:>5} '
            f'{_cell(means["bleu4"], 100):>7} {_cell(means["rouge_l"], 100):>7} '
            f'{_cell(means["meteor"], 100):>7} '
            f'{_cell(means["logicality"]):>6} {_cell(means["reliability"]):>6}'
        )

    lines.append(f'METEOR: {summary["meteor_variant"]}')

    for (evaluator, tasks) in summary['evaluators'].items():
        lines.append('')
        lines.append(f'Evaluator {evaluator}')

        for (task, means) in tasks.items():
            lines.append(f'  {task:<22} Log. {_cell(means["logicality"]):>6} '
                         f'Rel. {_cell(means["reliability"]):>6}')

    if correlation := summary['correlation']:
        for field in JUDGE_FIELDS:
            if correlation[field] is None:
                continue

            lines.append('')
            lines.append(f'Correlation ({field}, {correlation["samples"]} samples)')

            for (name, row) in zip(correlation['evaluators'], correlation[field]):
                cells = ' '.join(f'{value:>6.2f}' for value in row)
                lines.append(f'  {name:<22} {cells}')

    return '\n'.join(lines) + '\n'
