"""Coarse-to-fine encoding of city scenes for a language model.

Object, relationship and scene features are projected to the language
model's embedding dimension and routed by task level. Feature
extractors are deterministic stand-ins, suitable for verifying shapes,
routing and gradients without pretrained weights.

"""
from .config import EncoderConfig, Role, Stream  # noqa: F401
from .demo import GRADCHECK_TOLERANCE, encode_demo  # noqa: F401
from .error import (  # noqa: F401
    EmptyQuery,
    EncoderError,
    IndexOutOfVocab,
    InvalidEncoderConfig,
    MissingCrop,
    RoleMismatch,
    SelectionRequired,
    ShapeMismatch,
    UnexpectedSelection,
)
from .extract import Extractor, encode_text, hash_embedding  # noqa: F401
from .layers import (  # noqa: F401
    PositionEncoder,
    Projector,
    attention_logits,
    attention_weights,
    context_geometry,
    nll_loss,
    nll_loss_grad,
)
from .model import (  # noqa: F401
    ActivationPlan,
    Embeddings,
    ObjectFeatureBundle,
    RelationshipContext,
    SceneBundle,
    SceneEncoder,
    encode_object,
    encode_relationship,
    encode_scene,
    route_instruction,
)
from .train import (  # noqa: F401
    ERROR_FLOOR,
    Component,
    ToyModel,
    gradcheck,
    numeric_gradient,
    relative_error,
    toy_train,
)
