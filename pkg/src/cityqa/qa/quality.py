"""Multi-evaluator quality control of generated samples."""
import concurrent.futures
import math
import re
import typing

from cityqa.gateway import BudgetExceeded, GatewayError, MissingCredential
from cityqa.util.log import null_logger

from .error import EvaluatorCount
from .model import DefectClass, DefectReport, QCStatus
from .parse import parse_defects
from .prompt import build_quality_prompt


#: Evaluator name of findings raised without a gateway call.
LOCAL_EVALUATOR = 'local-lexical'

#: Evaluators consulted per sample.
N_EVALUATORS = 3

_RESIDUE = re.compile(r'</?(?:Question|Answer)\b|\{\{|\}\}')


def lexical_precheck(sample) -> typing.List[DefectReport]:
    """Flag raw tag or template residue in the question or answer."""
    reports = []

    for (name, text) in (('question', sample.question), ('answer', sample.answer)):
        if match := _RESIDUE.search(text):
            reports.append(DefectReport(LOCAL_EVALUATOR, DefectClass.TemplateArtifact,
                                        f'{name} contains {match.group()!r}'))

    return reports


def quality_check(sample, attributes, gateways, *, logger=null_logger) -> typing.List[DefectReport]:
    """Defects reported by the local pre-check and by each evaluator.

    An evaluator whose call fails abstains: it contributes no report.
    Exhausted budgets and missing credentials are not abstentions.

    """
    if len(gateways) != N_EVALUATORS:
        raise EvaluatorCount(f'quality control requires exactly {N_EVALUATORS} evaluators '
                             f'not {len(gateways)}')

    reports = lexical_precheck(sample)

    for gateway in gateways:
        request = build_quality_prompt(sample, attributes, model_id=gateway.model_id)

        try:
            response = gateway.complete(request)
        except (BudgetExceeded, MissingCredential):
            raise
        except GatewayError as exc:
            logger.warning('evaluator abstains', evaluator=gateway.model_id,
                           sample=sample.sample_id, error=str(exc))
            continue

        if not response.ok:
            continue

        (found, unknown) = parse_defects(response.text)

        if unknown:
            logger.info('unrecognized defect classes ignored', evaluator=gateway.model_id,
                        sample=sample.sample_id, classes=unknown)

        reports.extend(DefectReport(gateway.model_id, defect_class, rationale)
                       for (defect_class, rationale) in found)

    return reports


def aggregate_verdicts(defects, n_evaluators) -> QCStatus:
    """Reject on a majority of evaluators (at least ⌈n/2⌉ of
    `n_evaluators` distinct evaluators reporting any defect), or on any
    PrivacyRisk.

    Abstaining evaluators count toward `n_evaluators`. Local lexical
    findings are evidence only: the pre-check is not an evaluator.

    """
    if n_evaluators < 1:
        raise EvaluatorCount(f'n_evaluators must be at least 1 not {n_evaluators!r}')

    flagged = set()

    for report in defects:
        if report.defect_class is DefectClass.PrivacyRisk:
            return QCStatus.rejected

        if report.evaluator != LOCAL_EVALUATOR:
            flagged.add(report.evaluator)

    return QCStatus.rejected if len(flagged) >= math.ceil(n_evaluators / 2) else QCStatus.kept


def run_quality_control(samples, gateways, *, workers=4, logger=null_logger):
    """Apply `quality_check` and `aggregate_verdicts` to every sample.

    Evidence stored upon each sample serves as its attributes. Returns
    the samples (ordered by sample_id) with verdicts set.

    """
    samples = list(samples)

    def check(sample):
        reports = quality_check(sample, sample.evidence, gateways, logger=logger)
        return sample.with_verdict(aggregate_verdicts(reports, len(gateways)), reports)

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        checked = list(executor.map(check, samples))

    kept = sum(sample.qc_status is QCStatus.kept for sample in checked)
    logger.info('quality control complete', samples=len(checked), kept=kept,
                rejected=len(checked) - kept)

    return sorted(checked, key=lambda sample: sample.sample_id)
