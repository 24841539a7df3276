"""QA generation: prompts fanned out per scene, persona and task,
parsed, diversified and assigned content-derived sample ids.

"""
import collections
import concurrent.futures
import hashlib
import typing
from dataclasses import dataclass, field

import numpy as np

from cityqa.attribute import serialize_bundle
from cityqa.gateway import TransportError, TransportExhausted
from cityqa.spatial import knn_neighbors
from cityqa.taxonomy import TaskCategory, TaskLevel, reference_proportions
from cityqa.util.format import dump_canonical
from cityqa.util.ident import derive_seed
from cityqa.util.iteration import unique
from cityqa.util.log import null_logger

from .error import MalformedOutput
from .model import QASample
from .parse import parse_paraphrases, parse_tagged_qa
from .prompt import build_diversify_prompt, build_generation_prompt


def diversify(question, n, gateway, *, model_id=None, temperature=0.7) -> typing.List[str]:
    """Up to `n` paraphrases of `question`.

    Duplicates, and variants equal to the question itself, are dropped.

    """
    if n < 0:
        raise ValueError(f'n must be non-negative not {n!r}')

    if n == 0:
        return []

    request = build_diversify_prompt(question, n, model_id=model_id or gateway.model_id,
                                     temperature=temperature)
    response = gateway.complete(request)

    if not response.ok:
        return []

    original = question.strip()
    variants = []

    for variant in parse_paraphrases(response.text):
        if variant != original and variant not in variants:
            variants.append(variant)

    return variants[:n]


@dataclass(frozen=True)
class SceneContext:
    """A scene with its graph and rendered views (as PNG paths)."""

    scene: typing.Any
    graph: typing.Any
    global_image: typing.Optional[typing.Any] = None
    crop_images: typing.Mapping[int, typing.Any] = field(default_factory=dict)

    @property
    def scene_id(self):
        return self.scene.scene_id

    def images_for(self, level, targets):
        if level is TaskLevel.object:
            return [self.crop_images[target] for target in targets if target in self.crop_images]

        return [self.global_image] if self.global_image is not None else []


def sample_id(scene_id, task, persona, targets, question) -> str:
    material = dump_canonical([scene_id, str(task), persona, list(targets), question])
    return hashlib.sha256(material.encode('utf-8')).hexdigest()[:16]


def choose_targets(scene, level, rng) -> typing.Optional[typing.Tuple[int, ...]]:
    """Target object ids of a task of `level` (or None where the scene
    cannot support the task).

    """
    if level is TaskLevel.scene:
        return ()

    ids = scene.ids

    if not ids:
        return None

    target = ids[int(rng.integers(len(ids)))]

    if level is TaskLevel.object:
        return (target,)

    if len(ids) < 2:
        return None

    (neighbor,) = knn_neighbors(scene, target, 1)
    return (target, neighbor)


class GenerationStats(collections.Counter):
    """Counts of prompts, pairs, paraphrases, malformed outputs and
    failed calls.

    """
    def as_dict(self):
        keys = ('prompts', 'pairs', 'paraphrases', 'malformed', 'failed', 'skipped')
        return {key: self[key] for key in keys}


class GenerationResult(typing.NamedTuple):

    samples: typing.List[QASample]
    stats: GenerationStats


class _Job(typing.NamedTuple):

    context: SceneContext
    persona: typing.Any
    task: TaskCategory
    repetition: int


def _run_job(job, gateway, settings, logger):
    (context, persona, task, repetition) = job
    stats = GenerationStats()
    log = logger.set(scene=context.scene_id, task=task, persona=persona.name)

    rng = np.random.default_rng(
        derive_seed(settings['seed'], context.scene_id, task, persona.name, repetition)
    )
    targets = choose_targets(context.scene, task.level, rng)

    if targets is None:
        log.info('scene cannot support task: skipped', objects=len(context.scene))
        stats['skipped'] += 1
        return ([], stats)

    attributes = serialize_bundle(context.scene, context.graph, task.level, targets,
                                  settings['max_relations'])

    request = build_generation_prompt(
        task,
        persona,
        attributes,
        context.images_for(task.level, targets),
        settings['n_pairs'],
        model_id=gateway.model_id,
        temperature=settings['temperature'],
        max_output_tokens=settings['max_output_tokens'],
    )

    stats['prompts'] += 1

    try:
        response = gateway.complete(request)
    except (TransportError, TransportExhausted) as exc:
        log.error('generation failed', error=str(exc))
        stats['failed'] += 1
        return ([], stats)

    if not response.ok:
        stats['failed'] += 1
        return ([], stats)

    try:
        pairs = parse_tagged_qa(response.text)
    except MalformedOutput as exc:
        log.warning('malformed generator output', reason=exc.reason, position=exc.position,
                    request=request.request_key[:12])
        stats['malformed'] += 1
        return ([], stats)

    samples = []

    def make_sample(question, answer, source=None):
        return QASample(
            sample_id(context.scene_id, task, persona.name, targets, question),
            task,
            question,
            answer,
            context.scene_id,
            targets,
            persona.name,
            gateway.model_id,
            evidence=attributes,
            source=source,
        )

    for (question, answer) in pairs:
        original = make_sample(question, answer)
        samples.append(original)
        stats['pairs'] += 1

        try:
            paraphrases = diversify(question, settings['n_paraphrases'], gateway,
                                    temperature=settings['temperature'])
        except (TransportError, TransportExhausted) as exc:
            log.error('diversification failed', error=str(exc))
            stats['failed'] += 1
            continue

        for paraphrase in paraphrases:
            samples.append(make_sample(paraphrase, answer, original.sample_id))
            stats['paraphrases'] += 1

    return (samples, stats)


def generate_samples(contexts, gateway, *, personas, tasks, n_pairs=5, n_paraphrases=2,
                     temperature=0.7, max_output_tokens=1024, max_relations=20, seed=0,
                     logger=null_logger) -> GenerationResult:
    """Generate QA samples for every scene × persona × task repetition.

    `tasks` maps each TaskCategory to its number of prompts per scene
    and persona. Prompts are issued concurrently (up to the gateway's
    in-flight limit); the result is ordered by sample_id irrespective of
    completion order.

    Malformed outputs and failed calls are logged and counted;
    `BudgetExceeded` propagates.

    """
    settings = {
        'n_pairs': n_pairs,
        'n_paraphrases': n_paraphrases,
        'temperature': temperature,
        'max_output_tokens': max_output_tokens,
        'max_relations': max_relations,
        'seed': seed,
    }

    jobs = [
        _Job(context, persona, TaskCategory.parse(task), repetition)
        for context in contexts
        for persona in personas
        for (task, count) in tasks.items()
        for repetition in range(count)
    ]

    stats = GenerationStats()
    collected = []

    with concurrent.futures.ThreadPoolExecutor(max_workers=gateway.in_flight) as executor:
        futures = [executor.submit(_run_job, job, gateway, settings, logger) for job in jobs]

        try:
            for future in concurrent.futures.as_completed(futures):
                (samples, job_stats) = future.result()
                stats.update(job_stats)
                collected.extend(samples)
        except BaseException:
            for future in futures:
                future.cancel()

            raise

    # canonical order, independent of completion order
    collected.sort(key=lambda sample: (sample.sample_id, sample.answer, sample.source or ''))
    samples = list(unique(collected, key=lambda sample: sample.sample_id))

    logger.info('generation complete', samples=len(samples), **stats.as_dict())

    return GenerationResult(samples, stats)


class CategoryShare(typing.NamedTuple):

    count: int
    proportion: float
    reference: float


def category_report(samples) -> typing.Dict[TaskCategory, CategoryShare]:
    """Generated count and proportion of each category, beside the
    released dataset's reference proportion.

    Proportions are reported, not enforced.

    """
    counts = collections.Counter(sample.task for sample in samples)
    total = sum(counts.values())
    reference = reference_proportions()

    return {
        category: CategoryShare(counts[category],
                                counts[category] / total if total else 0.0,
                                reference[category])
        for category in TaskCategory
    }
