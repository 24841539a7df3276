"""Projectors, position encoding, neighbor attention and the token
negative log-likelihood.

"""
import typing
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax

from cityqa.util.ident import derive_seed

from .config import Role
from .error import IndexOutOfVocab, RoleMismatch, ShapeMismatch


def check_shape(name, array, *expected) -> np.ndarray:
    """`array` as a finite float matrix of `expected` shape (None
    matching any size).

    """
    array = np.asarray(array, dtype=np.float64)

    if array.ndim != len(expected) or any(
        size is not None and size != actual for (size, actual) in zip(expected, array.shape)
    ):
        raise ShapeMismatch(name, expected, array.shape)

    if not np.isfinite(array).all():
        raise ValueError(f'{name}: non-finite entry')

    return array


@dataclass(frozen=True)
class Projector:
    """Affine map of d-dimensional feature rows to D_llm dimensions."""

    role: Role
    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        weight = check_shape('weight', self.weight, None, None)
        bias = check_shape('bias', self.bias, weight.shape[1])

        object.__setattr__(self, 'role', Role.parse(self.role))
        object.__setattr__(self, 'weight', weight)
        object.__setattr__(self, 'bias', bias)

    @classmethod
    def initialize(cls, role, config):
        role = Role.parse(role)
        rng = np.random.default_rng(derive_seed('projector', config.seed, role))
        weight = rng.standard_normal((config.d, config.D_llm)) / np.sqrt(config.d)
        bias = rng.standard_normal(config.D_llm) * 0.01
        return cls(role, weight, bias)

    @classmethod
    def identity(cls, role, d):
        return cls(role, np.eye(d), np.zeros(d))

    @property
    def d(self):
        return self.weight.shape[0]

    @property
    def D_llm(self):
        return self.weight.shape[1]

    def expect(self, role):
        if self.role is not Role.parse(role):
            raise RoleMismatch(f'expected {role} projector not {self.role}')

    def __call__(self, features) -> np.ndarray:
        features = check_shape('features', features, None, self.d)
        return features @ self.weight + self.bias

    def backward(self, features, grad_output):
        """(∂L/∂weight, ∂L/∂bias) given ∂L/∂output."""
        return (features.T @ grad_output, grad_output.sum(axis=0))


@dataclass(frozen=True)
class PositionEncoder:
    """phi: seeded affine map of a 3D offset to d dimensions."""

    weight: np.ndarray  # d×3
    bias: np.ndarray    # d

    @classmethod
    def initialize(cls, config):
        rng = np.random.default_rng(derive_seed('phi', config.seed))
        return cls(rng.standard_normal((config.d, 3)) / 100.0,
                   rng.standard_normal(config.d) * 0.01)

    @classmethod
    def zero(cls, d):
        return cls(np.zeros((d, 3)), np.zeros(d))

    def __call__(self, offsets) -> np.ndarray:
        offsets = check_shape('offsets', offsets, None, 3)
        return offsets @ self.weight.T + self.bias


def _offsets(offsets):
    return np.array([tuple(offset) for offset in offsets], dtype=np.float64).reshape(-1, 3)


def attention_logits(f_s_target, F_s, offsets, phi) -> np.ndarray:
    """logit_k = f_s_target · (F_s[k] + phi(Δp_k)), unscaled."""
    target = np.asarray(f_s_target, dtype=np.float64).reshape(-1)
    F_s = check_shape('F_s', F_s, None, target.shape[0])
    offsets = check_shape('offsets', _offsets(offsets), F_s.shape[0], 3)
    return (F_s + phi(offsets)) @ target


def attention_weights(f_s_target, F_s, offsets, phi) -> np.ndarray:
    """Softmax over the K neighbors' attention logits."""
    logits = attention_logits(f_s_target, F_s, offsets, phi)

    if logits.size == 0:
        raise ShapeMismatch('F_s', (None, None), (0,))

    # scipy subtracts the maximum logit
    return softmax(logits)


def context_geometry(alpha, F_s) -> np.ndarray:
    """F_g: row k of F_s scaled by alpha_k."""
    alpha = np.asarray(alpha, dtype=np.float64).reshape(-1)
    F_s = check_shape('F_s', F_s, alpha.shape[0], None)
    return alpha[:, np.newaxis] * F_s


def nll_loss(token_logits, targets) -> float:
    """Mean over positions of −log softmax(logits_i)[target_i]."""
    (logits, targets) = _check_logits(token_logits, targets)
    log_norm = logsumexp(logits, axis=1)
    chosen = logits[np.arange(len(targets)), targets]
    return float(np.mean(log_norm - chosen))


def nll_loss_grad(token_logits, targets) -> np.ndarray:
    """∂(nll_loss)/∂logits: (softmax − one-hot) / n."""
    (logits, targets) = _check_logits(token_logits, targets)
    grad = softmax(logits, axis=1)
    grad[np.arange(len(targets)), targets] -= 1.0
    return grad / len(targets)


def _check_logits(token_logits, targets) -> typing.Tuple[np.ndarray, np.ndarray]:
    logits = check_shape('token_logits', token_logits, None, None)
    targets = np.asarray(targets)

    if targets.ndim != 1 or len(targets) != logits.shape[0] or len(targets) == 0:
        raise ShapeMismatch('targets', (logits.shape[0] or None,), targets.shape)

    if not np.issubdtype(targets.dtype, np.integer):
        raise TypeError('target token ids must be integers')

    vocab_size = logits.shape[1]

    for token_id in targets:
        if not 0 <= token_id < vocab_size:
            raise IndexOutOfVocab(int(token_id), vocab_size)

    return (logits, targets.astype(np.intp))
