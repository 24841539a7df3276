"""Coarse-to-fine scene encoding and instruction routing."""
import typing
from dataclasses import dataclass

import numpy as np

from cityqa.spatial import CentroidIndex, relative_position
from cityqa.taxonomy import TaskCategory, TaskLevel

from .config import Role, Stream
from .error import MissingCrop, SelectionRequired, ShapeMismatch, UnexpectedSelection
from .extract import Extractor, encode_text
from .layers import (
    PositionEncoder,
    Projector,
    attention_weights,
    check_shape,
    context_geometry,
)


class ObjectFeatureBundle(typing.NamedTuple):
    """f_v (C×d), f_s (1×d) and f_l (1×d, zero without a landmark)."""

    f_v: np.ndarray
    f_s: np.ndarray
    f_l: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.vstack([self.f_v, self.f_s, self.f_l])


class RelationshipContext(typing.NamedTuple):
    """Neighborhood of a target object.

    Rows beyond the scene's available neighbors (fewer than K) are zero
    in both `F_g` and `F_l`; `alpha` covers the available neighbors only.

    """
    neighbor_ids: typing.Tuple[int, ...]
    F_s: np.ndarray
    offsets: typing.Tuple[typing.Any, ...]
    F_l: np.ndarray
    alpha: np.ndarray
    F_g: np.ndarray


class SceneBundle(typing.NamedTuple):
    """F_v_sce (C×d) and F_l_sce (M×d, one row per landmarked object)."""

    F_v: np.ndarray
    F_l: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.vstack([self.F_v, self.F_l])


def encode_object(bundle, proj) -> np.ndarray:
    """E_o = Proj_o([f_v; f_s; f_l]): (C+2)×D_llm."""
    proj.expect(Role.object)

    f_v = check_shape('f_v', bundle.f_v, None, proj.d)
    check_shape('f_s', bundle.f_s, 1, proj.d)
    check_shape('f_l', bundle.f_l, 1, proj.d)

    if len(f_v) == 0:
        raise ShapeMismatch('f_v', (None, proj.d), f_v.shape)

    return proj(bundle.stacked())


def encode_relationship(F_g, F_l, proj) -> np.ndarray:
    """E_r = Proj_r([F_g; F_l]): 2K×D_llm, F_g rows above F_l rows."""
    proj.expect(Role.relationship)

    F_g = check_shape('F_g', F_g, None, proj.d)
    F_l = check_shape('F_l', F_l, len(F_g), proj.d)

    return proj(np.vstack([F_g, F_l]))


def encode_scene(bundle, proj) -> np.ndarray:
    """E_s = Proj_s([F_v_sce; F_l_sce]): (C+M)×D_llm."""
    proj.expect(Role.scene)

    check_shape('F_v', bundle.F_v, None, proj.d)
    check_shape('F_l', bundle.F_l, None, proj.d)

    return proj(bundle.stacked())


@dataclass(frozen=True)
class ActivationPlan:
    """Which embedding branches a task activates, and for which targets."""

    task: TaskCategory
    targets: typing.Tuple[int, ...]
    object_active: bool
    relationship_active: bool
    scene_active: bool = True

    @property
    def level(self) -> TaskLevel:
        return self.task.level

    def to_dict(self):
        return {
            'task': self.task.value,
            'level': self.level.value,
            'targets': list(self.targets),
            'E_o': 'active' if self.object_active else 'zero',
            'E_r': 'active' if self.relationship_active else 'zero',
            'E_s': 'active' if self.scene_active else 'zero',
        }


def route_instruction(task, selection=()) -> ActivationPlan:
    """Scene tasks zero the object and relationship branches; object and
    relationship tasks activate all three for the selected targets.

    """
    task = TaskCategory.parse(task)
    selection = tuple(int(target) for target in selection)

    if task.level is TaskLevel.scene:
        if selection:
            raise UnexpectedSelection(f'{task} takes no target selection')

        return ActivationPlan(task, (), False, False)

    if not selection:
        raise SelectionRequired(f'{task} requires at least one target object')

    return ActivationPlan(task, selection, True, True)


class Embeddings(typing.NamedTuple):
    """Encoder output: E_T (l×d), and E_o, E_r, E_s (×D_llm).

    With several targets, E_o and E_r stack one block per target.

    """
    E_T: np.ndarray
    E_o: np.ndarray
    E_r: np.ndarray
    E_s: np.ndarray
    plan: ActivationPlan
    contexts: typing.Tuple[RelationshipContext, ...] = ()

    def fused(self) -> np.ndarray:
        return np.vstack([self.E_o, self.E_r, self.E_s])

    def shapes(self):
        return {name: list(getattr(self, name).shape) for name in ('E_T', 'E_o', 'E_r', 'E_s')}


class SceneEncoder:
    """Feature extraction, projection and routing under one
    configuration and seed.

    Immutable after construction; `encode` may run concurrently.

    """
    def __init__(self, config):
        self.config = config
        self.extractor = Extractor(config)
        self.phi = PositionEncoder.initialize(config)
        self.projectors = {role: Projector.initialize(role, config) for role in Role}

    def _zeroed(self, stream, array):
        return array if self.config.enabled(stream) else np.zeros_like(array)

    def object_features(self, scene, object_id, crop_pixels) -> ObjectFeatureBundle:
        obj = scene.get(object_id)
        return ObjectFeatureBundle(
            self._zeroed(Stream.object_view, self.extractor.view(crop_pixels)),
            self._zeroed(Stream.object_shape, self.extractor.shape(obj)),
            self._zeroed(Stream.object_landmark, self.extractor.landmark(obj)),
        )

    def relationship_context(self, scene, object_id, index=None) -> RelationshipContext:
        """Attention over the (up to) K nearest neighbors of `object_id`."""
        (K, d) = (self.config.K, self.config.d)
        index = CentroidIndex(scene) if index is None else index

        target = scene.get(object_id)
        neighbors = [scene.get(neighbor) for neighbor in index.knn(object_id, K)]

        F_s = np.zeros((K, d))
        F_l = np.zeros((K, d))
        F_g = np.zeros((K, d))
        offsets = tuple(relative_position(target, neighbor) for neighbor in neighbors)

        for (row, neighbor) in enumerate(neighbors):
            F_s[row] = self.extractor.shape(neighbor)[0]
            F_l[row] = self.extractor.landmark(neighbor)[0]

        count = len(neighbors)

        if count:
            alpha = attention_weights(self.extractor.shape(target), F_s[:count], offsets,
                                      self.phi)
            F_g[:count] = context_geometry(alpha, F_s[:count])
        else:
            alpha = np.zeros(0)

        return RelationshipContext(
            tuple(neighbor.id for neighbor in neighbors),
            F_s,
            offsets,
            self._zeroed(Stream.relationship_landmark, F_l),
            alpha,
            self._zeroed(Stream.relationship_geometry, F_g),
        )

    def scene_features(self, scene, global_pixels) -> SceneBundle:
        landmarks = [self.extractor.landmark(obj)[0] for obj in scene.landmarked]
        F_l = np.array(landmarks).reshape(len(landmarks), self.config.d)
        return SceneBundle(
            self._zeroed(Stream.scene_view, self.extractor.view(global_pixels)),
            self._zeroed(Stream.scene_landmark, F_l),
        )

    def encode(self, scene, task, selection, query, *, global_pixels, crop_pixels=None):
        """Embeddings of `query` about `scene` under `task`'s routing.

        `crop_pixels` maps each selected object id to its crop image.

        """
        plan = route_instruction(task, selection)
        (C, K, D_llm) = (self.config.C, self.config.K, self.config.D_llm)

        E_T = encode_text(query, self.config)
        E_s = encode_scene(self.scene_features(scene, global_pixels),
                           self.projectors[Role.scene])

        if not plan.object_active:
            return Embeddings(E_T, np.zeros((C + 2, D_llm)), np.zeros((2 * K, D_llm)), E_s, plan)

        crop_pixels = crop_pixels or {}
        index = CentroidIndex(scene)

        object_blocks = []
        relationship_blocks = []
        contexts = []

        for target in plan.targets:
            if target not in crop_pixels:
                raise MissingCrop(target)

            bundle = self.object_features(scene, target, crop_pixels[target])
            object_blocks.append(encode_object(bundle, self.projectors[Role.object]))

            context = self.relationship_context(scene, target, index)
            contexts.append(context)
            relationship_blocks.append(
                encode_relationship(context.F_g, context.F_l, self.projectors[Role.relationship])
            )

        return Embeddings(E_T, np.vstack(object_blocks), np.vstack(relationship_blocks), E_s,
                          plan, tuple(contexts))
