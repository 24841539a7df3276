import numpy as np

from cityqa.bev import (
    DEFAULT_CROP_SCALE,
    DEFAULT_GLOBAL_SCALE,
    render_global_bev,
    render_object_crop,
)
from cityqa.taxonomy import TaskCategory

from .model import SceneEncoder
from .train import Component, gradcheck, toy_train

#: Maximum relative gradient error accepted, by component.
GRADCHECK_TOLERANCE = {
    Component.projector: 1e-7,
    Component.attention: 1e-4,
    Component.full: 1e-3,
}


def encode_demo(scene, task, selection, config, *, query=None,
                global_scale=DEFAULT_GLOBAL_SCALE, crop_scale=DEFAULT_CROP_SCALE,
                crop_margin=5.0, train_steps=50):
    """Encode `scene` for `task` about `selection` and report the branch
    activation, tensor shapes, attention weights, gradient checks and a
    toy training trajectory (as a JSON-able mapping).

    """
    task = TaskCategory.parse(task)
    encoder = SceneEncoder(config)

    global_view = render_global_bev(scene, global_scale)
    crops = {
        object_id: render_object_crop(scene, object_id, crop_margin, crop_scale).pixels
        for object_id in selection
    }

    embeddings = encoder.encode(
        scene,
        task,
        selection,
        query or task.display_name,
        global_pixels=global_view.pixels,
        crop_pixels=crops,
    )

    checks = {}

    for component in Component:
        error = gradcheck(component, config)
        checks[component.value] = {
            'max_relative_error': error,
            'tolerance': GRADCHECK_TOLERANCE[component],
            'passed': error <= GRADCHECK_TOLERANCE[component],
        }

    losses = toy_train(config, steps=train_steps)

    return {
        'scene_id': scene.scene_id,
        'config': {
            'd': config.d,
            'D_llm': config.D_llm,
            'l': config.l,
            'C': config.C,
            'K': config.K,
            'seed': config.seed,
            'disabled_streams': sorted(stream.value for stream in config.disabled_streams),
        },
        'activation': embeddings.plan.to_dict(),
        'shapes': embeddings.shapes(),
        'attention': [
            {
                'target': target,
                'neighbors': list(context.neighbor_ids),
                'weights': [float(weight) for weight in context.alpha],
                'sum': float(np.sum(context.alpha)),
            }
            for (target, context) in zip(embeddings.plan.targets, embeddings.contexts)
        ],
        'gradcheck': checks,
        'toy_train': {
            'steps': train_steps,
            'initial_loss': losses[0],
            'final_loss': losses[-1],
        },
    }
