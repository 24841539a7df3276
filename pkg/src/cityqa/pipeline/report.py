import pathlib

from cityqa.evaluate import format_summary
from cityqa.qa import category_report
from cityqa.util.format import read_json

from .error import StageMissing
from .manifest import load_manifest
from .steps import dataset_path, read_samples


REPORT_NAME = 'report.txt'


def format_categories(samples) -> str:
    header = f'{"Category":<24} {"N":>6} {"Share":>7} {"Ref.":>7}'
    lines = [header, '-' * len(header)]

    for (category, share) in category_report(samples).items():
        lines.append(f'{category.display_name:<24} {share.count:>6} '
                     f'{share.proportion:>7.1%} {share.reference:>7.1%}')

    lines.append(f'{"Total":<24} {len(samples):>6}')

    return '\n'.join(lines) + '\n'


def report(out) -> str:
    """Compose the run report of output directory `out` (writing it to
    `evaluation/report.txt`) from the dataset and evaluation summary.

    Raises `StageMissing` unless the evaluate stage has completed with
    its outputs intact.

    """
    out = pathlib.Path(out)
    manifest = load_manifest(out)

    if manifest is None or not manifest.verify(out, 'evaluate'):
        raise StageMissing('evaluate', out)

    samples = read_samples(dataset_path(out, 'dataset'))
    summary = read_json(out / 'evaluation' / 'summary.json')

    text = f'Run {manifest.run_id}\n\n{format_categories(samples)}\n{format_summary(summary)}'

    (out / 'evaluation' / REPORT_NAME).write_text(text, encoding='utf-8')

    return text
