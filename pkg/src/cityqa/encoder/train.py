"""Finite-difference gradient verification and a toy training loop."""
import typing

import numpy as np

from cityqa.util.enum import StrEnum
from cityqa.util.ident import derive_seed

from .config import Role
from .layers import (
    PositionEncoder,
    Projector,
    attention_weights,
    nll_loss,
    nll_loss_grad,
)


class Component(StrEnum):

    projector = 'projector'
    attention = 'attention'
    full = 'full'


#: Central-difference step.
STEP = 1e-5

#: Gradient magnitude below which errors are measured absolutely
#: (the softmax bias gradient is identically zero).
ERROR_FLOOR = 1.0


def relative_error(analytic, numeric, floor=ERROR_FLOOR) -> float:
    """Largest |a − n| / max(|a|, |n|, floor) over all entries.

    Below `floor` in magnitude the error is in effect absolute.

    """
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / scale)) if analytic.size else 0.0


def numeric_gradient(loss, params, step=STEP) -> typing.List[np.ndarray]:
    """Central differences of the scalar `loss()` in every entry of
    every array of `params` (perturbed in place and restored).

    """
    grads = []

    for param in params:
        grad = np.zeros_like(param)

        for position in np.ndindex(param.shape):
            original = param[position]

            param[position] = original + step
            upper = loss()

            param[position] = original - step
            lower = loss()

            param[position] = original
            grad[position] = (upper - lower) / (2 * step)

        grads.append(grad)

    return grads


def _fixture_rng(config, component):
    return np.random.default_rng(derive_seed('gradcheck', config.seed, component))


def _projector_check(config, rows=3):
    rng = _fixture_rng(config, Component.projector)
    proj = Projector.initialize(Role.object, config)
    (weight, bias) = (proj.weight.copy(), proj.bias.copy())

    features = rng.standard_normal((rows, config.d))
    upstream = rng.standard_normal((rows, config.D_llm))

    def loss():
        return float(np.sum(upstream * (features @ weight + bias)))

    analytic = proj.backward(features, upstream)
    numeric = numeric_gradient(loss, [weight, bias])

    return max(relative_error(a, n) for (a, n) in zip(analytic, numeric))


def _attention_check(config):
    rng = _fixture_rng(config, Component.attention)
    phi = PositionEncoder.initialize(config)
    (weight, bias) = (phi.weight.copy(), phi.bias.copy())
    K = config.K

    target = rng.standard_normal(config.d) / np.sqrt(config.d)
    F_s = rng.standard_normal((K, config.d)) / np.sqrt(config.d)
    offsets = rng.uniform(-20.0, 20.0, size=(K, 3))
    upstream = rng.standard_normal(K)

    def forward():
        return attention_weights(target, F_s, offsets, PositionEncoder(weight, bias))

    def loss():
        return float(upstream @ forward())

    # softmax backward: s = alpha ⊙ (u − alpha · u)
    alpha = forward()
    grad_logits = alpha * (upstream - alpha @ upstream)

    # logit_k = target · (F_s[k] + W Δp_k + c)
    grad_weight = np.outer(target, grad_logits @ offsets)
    grad_bias = target * grad_logits.sum()

    numeric = numeric_gradient(loss, [weight, bias])

    return max(relative_error(a, n) for (a, n) in zip((grad_weight, grad_bias), numeric))


class ToyModel:
    """Object and relationship projectors with a linear token readout
    over their fused embeddings.

    """
    def __init__(self, config, vocab_size, readout=None):
        self.config = config
        self.vocab_size = vocab_size
        self.object_proj = Projector.initialize(Role.object, config)
        self.relationship_proj = Projector.initialize(Role.relationship, config)
        self.readout = (np.zeros((config.D_llm, vocab_size)) if readout is None
                        else np.array(readout, dtype=np.float64))

        self.params = [
            self.object_proj.weight.copy(),
            self.object_proj.bias.copy(),
            self.relationship_proj.weight.copy(),
            self.relationship_proj.bias.copy(),
            self.readout,
        ]

    def forward(self, object_features, relationship_features):
        (W_o, b_o, W_r, b_r, R) = self.params
        fused = np.vstack([object_features @ W_o + b_o, relationship_features @ W_r + b_r])
        return (fused, fused @ R)

    def loss(self, object_features, relationship_features, targets):
        (_fused, logits) = self.forward(object_features, relationship_features)
        return nll_loss(logits, targets)

    def gradients(self, object_features, relationship_features, targets):
        (W_o, b_o, W_r, b_r, R) = self.params
        (fused, logits) = self.forward(object_features, relationship_features)

        grad_logits = nll_loss_grad(logits, targets)
        grad_fused = grad_logits @ R.T

        n_object = len(object_features)
        (grad_object, grad_relationship) = (grad_fused[:n_object], grad_fused[n_object:])

        return [
            object_features.T @ grad_object,
            grad_object.sum(axis=0),
            relationship_features.T @ grad_relationship,
            grad_relationship.sum(axis=0),
            fused.T @ grad_logits,
        ]


def toy_inputs(config, vocab_size=16):
    """Synthetic object and relationship feature stacks and token targets."""
    rng = np.random.default_rng(derive_seed('toy', config.seed))
    object_features = rng.standard_normal((config.C + 2, config.d)) / np.sqrt(config.d)
    relationship_features = rng.standard_normal((2 * config.K, config.d)) / np.sqrt(config.d)
    targets = rng.integers(vocab_size, size=config.C + 2 + 2 * config.K)
    return (object_features, relationship_features, targets)


def _full_check(config, vocab_size=8):
    rng = _fixture_rng(config, Component.full)
    inputs = toy_inputs(config, vocab_size)
    model = ToyModel(config, vocab_size,
                     rng.standard_normal((config.D_llm, vocab_size)) / np.sqrt(config.D_llm))

    analytic = model.gradients(*inputs)
    numeric = numeric_gradient(lambda: model.loss(*inputs), model.params)

    return max(relative_error(a, n) for (a, n) in zip(analytic, numeric))


def gradcheck(component, config) -> float:
    """Maximum relative error of `component`'s analytic gradient against
    central finite differences over all of its parameters.

    """
    component = Component.parse(component)

    if component is Component.projector:
        return _projector_check(config)

    if component is Component.attention:
        return _attention_check(config)

    return _full_check(config)


def toy_train(config, *, steps=50, learning_rate=0.5, vocab_size=16) -> typing.List[float]:
    """Gradient descent upon the token NLL of the toy model.

    The readout starts at zero, so the first loss is ln(vocab_size).
    Returns the loss before each step and after the last.

    """
    model = ToyModel(config, vocab_size)
    inputs = toy_inputs(config, vocab_size)

    losses = [model.loss(*inputs)]

    for _step in range(steps):
        for (param, grad) in zip(model.params, model.gradients(*inputs)):
            param -= learning_rate * grad

        losses.append(model.loss(*inputs))

    return losses
