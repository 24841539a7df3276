import numpy as np
import pytest

from cityqa.gateway import CallableTransport, Gateway, TransportError
from cityqa.qa import (
    SceneContext,
    choose_targets,
    category_report,
    diversify,
    generate_samples,
    sample_id,
    select_personas,
)
from cityqa.scene import CityScene, build_scene_graph
from cityqa.taxonomy import TaskCategory, TaskLevel, reference_proportions

from test.fixture import box_object


@pytest.fixture
def contexts(campus, harbor):
    return [SceneContext(scene, build_scene_graph(scene, 50.0)) for scene in (campus, harbor)]


@pytest.fixture
def gateway(model):
    return Gateway(model.transport(), model_id='generator', in_flight=3)


def generate(contexts, gateway, **kwargs):
    settings = dict(personas=select_personas(['tourist', 'company staff']),
                    tasks={'ObjectCaption': 1, 'RelationshipComputation': 1, 'SceneCaption': 1},
                    n_pairs=2,
                    n_paraphrases=1,
                    seed=7)
    settings.update(kwargs)
    return generate_samples(contexts, gateway, **settings)


def test_generate(contexts, gateway):
    (samples, stats) = generate(contexts, gateway)

    # 2 scenes × 2 personas × 3 tasks, 2 pairs each, 1 paraphrase per pair
    assert stats.as_dict() == {'prompts': 12, 'pairs': 24, 'paraphrases': 24,
                               'malformed': 0, 'failed': 0, 'skipped': 0}
    assert len(samples) == 48

    assert [sample.sample_id for sample in samples] == sorted(sample.sample_id
                                                              for sample in samples)
    assert len({sample.sample_id for sample in samples}) == 48

    for sample in samples:
        assert sample.generator == 'generator'
        assert sample.evidence
        assert len(sample.target_ids) == {TaskLevel.object: 1,
                                          TaskLevel.relationship: 2,
                                          TaskLevel.scene: 0}[sample.task.level]


def test_paraphrase_provenance(contexts, gateway):
    (samples, _stats) = generate(contexts, gateway)
    by_id = {sample.sample_id: sample for sample in samples}

    paraphrases = [sample for sample in samples if sample.source]
    assert len(paraphrases) == 24

    for paraphrase in paraphrases:
        original = by_id[paraphrase.source]
        assert original.source is None
        assert paraphrase.answer == original.answer
        assert paraphrase.question.endswith(original.question)
        assert paraphrase.target_ids == original.target_ids


def test_generate_deterministic(contexts, model):
    one = generate(contexts, Gateway(model.transport(), model_id='generator', in_flight=1))
    other = generate(contexts, Gateway(model.transport(), model_id='generator', in_flight=4))

    assert one.samples == other.samples


def test_generate_malformed(contexts, caplog_struct):
    transport = CallableTransport(lambda request: 'I would rather not.')
    gateway = Gateway(transport, model_id='generator')

    (samples, stats) = generate(contexts, gateway, logger=caplog_struct.logger)

    assert samples == []
    assert stats['malformed'] == stats['prompts'] == 12
    assert caplog_struct.field_equals(12, msg='malformed generator output')


def test_generate_failed(contexts):
    def reject(request):
        raise TransportError('rejected', 400)

    (samples, stats) = generate(contexts, Gateway(CallableTransport(reject), model_id='generator'))

    assert samples == []
    assert stats['failed'] == 12


def test_generate_skipped(gateway):
    solo = CityScene('solo', (box_object(0, 'tree', (0.0, 0.0, 1.0)),))
    context = SceneContext(solo, build_scene_graph(solo, 50.0))

    (samples, stats) = generate([context], gateway, personas=select_personas(['tourist']),
                                n_paraphrases=0)

    assert stats['skipped'] == 1
    assert {sample.task for sample in samples} == {TaskCategory.ObjectCaption,
                                                   TaskCategory.SceneCaption}


def test_choose_targets(campus):
    rng = np.random.default_rng(0)

    assert choose_targets(campus, TaskLevel.scene, rng) == ()

    (target,) = choose_targets(campus, TaskLevel.object, rng)
    assert target in campus

    (target, neighbor) = choose_targets(campus, TaskLevel.relationship, rng)
    assert target != neighbor

    empty = CityScene('empty', ())
    assert choose_targets(empty, TaskLevel.object, rng) is None


def test_sample_id():
    first = sample_id('campus', TaskCategory.ObjectCaption, 'tourist', (3,), 'What is it?')

    assert len(first) == 16
    assert first == sample_id('campus', 'ObjectCaption', 'tourist', [3], 'What is it?')
    assert first != sample_id('campus', 'ObjectCaption', 'tourist', (3,), 'What is this?')


def test_diversify():
    reply = ('Where is the car?\n'
             '1. Where can the car be found?\n'
             '2. Where can the car be found?\n'
             '3. Car location?')
    gateway = Gateway(CallableTransport(lambda request: reply))

    assert diversify('Where is the car?', 3, gateway, model_id='generator') == [
        'Where can the car be found?',
        'Car location?',
    ]
    assert diversify('Where is the car?', 1, gateway, model_id='generator') == [
        'Where can the car be found?',
    ]
    assert diversify('Where is the car?', 0, gateway) == []

    with pytest.raises(ValueError):
        diversify('Where is the car?', -1, gateway)


def test_category_report(contexts, gateway):
    (samples, _stats) = generate(contexts, gateway)
    report = category_report(samples)
    reference = reference_proportions()

    assert report[TaskCategory.ObjectCaption].count == 16
    assert report[TaskCategory.ObjectAnalysis].count == 0
    assert sum(share.proportion for share in report.values()) == pytest.approx(1.0)
    assert all(share.reference == reference[category] for (category, share) in report.items())

    assert category_report([])[TaskCategory.SceneCaption].proportion == 0.0
