"""Stage implementations.

Each stage reads its inputs from the output directory (as written by
the stages it depends upon) and returns a `StageOutput`: the paths it
wrote and any counts worth recording in the manifest.

"""
import collections
import pathlib
import re
import typing

from cityqa.attribute import (
    nearest_pairs,
    serialize_containment,
    serialize_object,
    serialize_relation,
    serialize_scene,
)
from cityqa.bev import render_global_bev, render_object_crop, write_png
from cityqa.encoder import EncoderConfig, encode_demo
from cityqa.evaluate import evaluate_samples, format_summary, read_predictions, summarize
from cityqa.qa import (
    QASample,
    SceneContext,
    category_report,
    generate_samples,
    run_quality_control,
    select_personas,
)
from cityqa.scene import RelationKind, SceneGraph, build_scene_graph, load_scene, save_scene
from cityqa.spatial import CentroidIndex
from cityqa.taxonomy import TaskCategory
from cityqa.util.format import read_json, read_jsonl, write_json, write_jsonl
from cityqa.util.ident import digest_file

from .error import ConfigInvalid
from .stage import stage


class StageOutput(typing.NamedTuple):

    paths: typing.List[pathlib.Path]
    counts: typing.Dict[str, typing.Any] = {}


SCENE_ID = re.compile(r'[\w.-]+')

SCENE_SUFFIX = '.scene'


def scene_paths(out):
    return sorted((out / 'scenes').glob(f'*{SCENE_SUFFIX}'))


def load_scenes(out):
    return [load_scene(path) for path in scene_paths(out)]


def load_graph(out, scene_id):
    return SceneGraph.from_dict(read_json(out / 'graphs' / f'{scene_id}.json'))


def render_dir(out, scene_id):
    return out / 'render' / scene_id


def dataset_path(out, name):
    return out / 'dataset' / f'{name}.jsonl'


def read_samples(path):
    return [QASample.from_dict(row) for row in read_jsonl(path)]


def external_inputs(conf, name) -> typing.Dict[str, str]:
    """Digests of files outside the output directory read by stage `name`."""
    if name == 'ingest':
        return {path: digest_file(path) for path in conf['pipeline']['scenes']
                if pathlib.Path(path).is_file()}

    if name == 'evaluate' and (predictions := conf['evaluate']['predictions']):
        return {predictions: digest_file(predictions)}

    return {}


@stage('ingest', conf_sections=('pipeline.scenes',))
def ingest(ctx):
    """Validate the configured scene files and store them canonically."""
    if not ctx.conf['pipeline']['scenes']:
        raise ConfigInvalid('no scene files configured (pipeline.scenes)')

    scenes = {}

    for path in ctx.conf['pipeline']['scenes']:
        scene = load_scene(path)

        if not SCENE_ID.fullmatch(scene.scene_id):
            raise ConfigInvalid(f'{path}: scene id {scene.scene_id!r} is not a valid file name')

        if scene.scene_id in scenes:
            raise ConfigInvalid(f'{path}: duplicate scene id {scene.scene_id!r}')

        scenes[scene.scene_id] = scene
        ctx.logger.info('scene loaded', scene=scene.scene_id, objects=len(scene), path=path)

    directory = ctx.out / 'scenes'

    for stale in scene_paths(ctx.out):
        if stale.stem not in scenes:
            stale.unlink()

    paths = [save_scene(scene, directory / f'{scene_id}{SCENE_SUFFIX}')
             for (scene_id, scene) in sorted(scenes.items())]

    return StageOutput(paths, {'scenes': len(scenes),
                               'objects': sum(len(scene) for scene in scenes.values())})


@stage('graph', depends=('ingest',), conf_sections=('scene',))
def graph(ctx):
    """Scene graph of each scene, with the `knn_k` nearest neighbors of
    each object.

    """
    settings = ctx.conf['scene']
    paths = []
    counts = collections.Counter()

    for scene in load_scenes(ctx.out):
        scene_graph = build_scene_graph(scene, settings['adjacency_radius'])
        index = CentroidIndex(scene)
        neighbors = {str(obj.id): index.knn(obj.id, settings['knn_k']) for obj in scene}

        path = ctx.out / 'graphs' / f'{scene.scene_id}.json'
        write_json(path, {**scene_graph.to_dict(), 'neighbors': neighbors})
        paths.append(path)

        for kind in RelationKind:
            counts[kind.value] += len(scene_graph.edges_of(kind))

    return StageOutput(paths, dict(counts))


@stage('render', depends=('ingest',), conf_sections=('render',))
def render(ctx):
    """Global top view of each scene and a crop about each object."""
    settings = ctx.conf['render']
    options = {'overlay': settings['overlay'], 'labels': settings['labels']}
    paths = []

    for scene in load_scenes(ctx.out):
        if not len(scene):
            ctx.logger.warning('empty scene: nothing to render', scene=scene.scene_id)
            continue

        directory = render_dir(ctx.out, scene.scene_id)

        raster = render_global_bev(scene, settings['global_scale'], **options)
        paths.append(write_png(raster, directory / 'global.png'))

        for obj in scene:
            raster = render_object_crop(scene, obj.id, settings['crop_margin'],
                                        settings['crop_scale'], **options)
            paths.append(write_png(raster, directory / f'crop-{obj.id}.png'))

    # sidecars are outputs as well
    paths.extend([path.with_suffix('.json') for path in paths])

    return StageOutput(paths, {'images': len(paths) // 2})


@stage('serialize', depends=('graph',), conf_sections=('serialize',))
def serialize(ctx):
    """Attribute texts of every object, relation and scene."""
    max_relations = ctx.conf['serialize']['max_relations']
    paths = []
    count = 0

    for scene in load_scenes(ctx.out):
        scene_graph = load_graph(ctx.out, scene.scene_id)

        texts = [serialize_object(obj) for obj in scene]
        texts.extend(serialize_relation(scene.get(edge.source), scene.get(edge.target))
                     for edge in nearest_pairs(scene_graph, max_relations))
        texts.extend(serialize_containment(scene.get(edge.source), scene.get(edge.target))
                     for edge in scene_graph.edges_of(RelationKind.containment))

        if len(scene):
            texts.append(serialize_scene(scene, scene_graph, max_relations))

        path = ctx.out / 'attributes' / f'{scene.scene_id}.jsonl'
        write_jsonl(path, (text.to_dict() for text in texts))
        paths.append(path)
        count += len(texts)

    return StageOutput(paths, {'attributes': count})


def scene_contexts(out):
    for scene in load_scenes(out):
        if not len(scene):
            continue

        directory = render_dir(out, scene.scene_id)
        crops = {obj.id: directory / f'crop-{obj.id}.png' for obj in scene}

        yield SceneContext(scene, load_graph(out, scene.scene_id), directory / 'global.png',
                           {object_id: path for (object_id, path) in crops.items()
                            if path.is_file()})


@stage('generate', depends=('serialize', 'render'),
       conf_sections=('generate', 'serialize', 'gateway.generator', 'pipeline.seed'),
       uses_gateway=True)
def generate(ctx):
    settings = ctx.conf['generate']
    personas = select_personas(settings['personas'])

    result = generate_samples(
        list(scene_contexts(ctx.out)),
        ctx.gateways.generator,
        personas=personas,
        tasks={TaskCategory.parse(task): count for (task, count) in settings['tasks'].items()},
        n_pairs=settings['n_pairs'],
        n_paraphrases=settings['n_paraphrases'],
        temperature=settings['temperature'],
        max_output_tokens=settings['max_output_tokens'],
        max_relations=ctx.conf['serialize']['max_relations'],
        seed=ctx.conf['pipeline']['seed'],
        logger=ctx.logger,
    )

    path = dataset_path(ctx.out, 'generated')
    write_jsonl(path, (sample.to_dict() for sample in result.samples))

    return StageOutput([path], {'samples': len(result.samples), **result.stats.as_dict()})


@stage('qc', depends=('generate',), conf_sections=('gateway.reviewers',), uses_gateway=True)
def qc(ctx):
    samples = read_samples(dataset_path(ctx.out, 'generated'))
    reviewers = ctx.gateways.reviewers

    checked = run_quality_control(samples, reviewers,
                                  workers=min(gateway.in_flight for gateway in reviewers),
                                  logger=ctx.logger)

    path = dataset_path(ctx.out, 'dataset')
    write_jsonl(path, (sample.to_dict() for sample in checked))

    status = collections.Counter(sample.qc_status.value for sample in checked)
    return StageOutput([path], {'samples': len(checked), **dict(sorted(status.items()))})


@stage('evaluate', depends=('qc',),
       conf_sections=('evaluate', 'gateway.judges', 'gateway.answerer'), uses_gateway=True)
def evaluate(ctx):
    samples = read_samples(dataset_path(ctx.out, 'dataset'))

    if predictions_path := ctx.conf['evaluate']['predictions']:
        (predictions, answerer) = (read_predictions(predictions_path), None)
    else:
        (predictions, answerer) = (None, ctx.gateways.answerer)

    judges = ctx.gateways.judges

    reports = evaluate_samples(samples, judges, predictions=predictions, answerer=answerer,
                               workers=min(gateway.in_flight for gateway in judges),
                               logger=ctx.logger)
    summary = summarize(reports)

    directory = ctx.out / 'evaluation'
    reports_path = directory / 'reports.jsonl'
    summary_path = directory / 'summary.json'
    text_path = directory / 'summary.txt'

    write_jsonl(reports_path, (report.to_dict() for report in reports))
    write_json(summary_path, summary)
    text_path.write_text(format_summary(summary), encoding='utf-8')

    return StageOutput([reports_path, summary_path, text_path], {'reports': len(reports)})


def demo_selection(scene, task, selection):
    """The configured selection, or else the scene's first object for
    tasks requiring a target.

    """
    if selection or not task.level.takes_targets:
        return list(selection)

    return [scene.ids[0]]


@stage('encode-demo', depends=('ingest',), conf_sections=('encoder', 'render'))
def encode_demo_stage(ctx):
    """Encoder demonstration upon the configured scene (by default, the
    first non-empty scene by scene id).

    """
    settings = ctx.conf['encoder']
    scenes = [scene for scene in load_scenes(ctx.out) if len(scene)]

    if settings['scene']:
        scenes = [scene for scene in scenes if scene.scene_id == settings['scene']]

        if not scenes:
            raise ConfigInvalid(f'encoder.scene: no non-empty scene {settings["scene"]!r}')

    if not scenes:
        raise ConfigInvalid('encoder demonstration requires a non-empty scene')

    scene = scenes[0]
    task = TaskCategory.parse(settings['task'])

    report = encode_demo(
        scene,
        task,
        demo_selection(scene, task, settings['selection']),
        EncoderConfig.from_conf(settings),
        global_scale=ctx.conf['render']['global_scale'],
        crop_scale=ctx.conf['render']['crop_scale'],
        crop_margin=ctx.conf['render']['crop_margin'],
    )

    path = ctx.out / 'encoder' / 'demo.json'
    write_json(path, report)

    passed = all(check['passed'] for check in report['gradcheck'].values())
    return StageOutput([path], {'gradcheck_passed': passed})


def dataset_counts(out) -> typing.Dict[str, typing.Any]:
    """Sample counts by task category and QC status of the stored dataset."""
    for name in ('dataset', 'generated'):
        if (path := dataset_path(out, name)).is_file():
            samples = read_samples(path)
            break
    else:
        return {}

    shares = category_report(samples)

    return {
        'samples': len(samples),
        'tasks': {category.value: share.count for (category, share) in shares.items()},
        'qc_status': dict(sorted(collections.Counter(
            sample.qc_status.value for sample in samples
        ).items())),
    }
