"""Small fully connected ReLU network with hand-written backpropagation.

Layout is row-major batches: ``h = relu(x @ W + b)`` for hidden layers and a
linear output layer.  Only the Bellman loss gradient is needed, which touches
one output unit per sample, so the output-layer gradient is kept sparse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from jamshield.errors import TrainingDivergenceError


@dataclass
class MlpParams:
    weights: list
    biases: list

    @property
    def sizes(self) -> list:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def copy_into(self, other: "MlpParams") -> None:
        for dst, src in zip(other.weights + other.biases, self.weights + self.biases):
            dst[...] = src

    def arrays(self) -> list:
        """Weights then biases, layer by layer: ``[W1, b1, W2, b2, ...]``."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def all_finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())


def init_mlp(sizes, rng: np.random.Generator) -> MlpParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and zero biases."""
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def _as_batch(s) -> np.ndarray:
    x = np.asarray(s, dtype=float)
    if x.ndim == 0:
        return x.reshape(1, 1)
    if x.ndim == 1:
        return x.reshape(-1, 1)
    return x


def mlp_forward(params: MlpParams, s) -> np.ndarray:
    """Action values for a state or a batch of states.

    A scalar state gives a 1-D array of length ``|A|``; a batch gives ``(B, |A|)``.
    """
    x = _as_batch(s)
    if not np.isfinite(x).all():
        raise ValueError("network input must be finite")
    h = x
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        h = h @ w + b
        if i < last:
            np.maximum(h, 0.0, out=h)
    if not np.isfinite(h).all():
        raise TrainingDivergenceError("non-finite network output")
    return h[0] if np.ndim(s) == 0 else h


@dataclass
class BellmanGradient:
    """Gradient of the mean-squared Bellman error.

    ``hidden_w``/``hidden_b`` are dense gradients for every layer but the
    last.  The output layer's gradient is nonzero only in the columns of the
    taken actions: sample ``i`` contributes ``out_rows[i]`` to column
    ``actions[i]`` of the weight matrix and ``out_bias[i]`` to its bias.
    """

    hidden_w: list
    hidden_b: list
    actions: np.ndarray
    out_rows: np.ndarray
    out_bias: np.ndarray

    def dense(self, params: MlpParams) -> MlpParams:
        w_out = np.zeros_like(params.weights[-1])
        b_out = np.zeros_like(params.biases[-1])
        np.add.at(w_out.T, self.actions, self.out_rows)
        np.add.at(b_out, self.actions, self.out_bias)
        return MlpParams(self.hidden_w + [w_out], self.hidden_b + [b_out])


def bellman_loss(params: MlpParams, states, actions, targets) -> float:
    q = mlp_forward(params, np.asarray(states, dtype=float).reshape(-1, 1))
    picked = q[np.arange(len(actions)), actions]
    return float(np.mean((np.asarray(targets) - picked) ** 2))


def bellman_loss_and_grad(params: MlpParams, states, actions, targets):
    """Loss ``mean((y - Q(s, a))**2)`` and its gradient with respect to ``params``."""
    x = np.asarray(states, dtype=float).reshape(-1, 1)
    actions = np.asarray(actions, dtype=np.intp)
    targets = np.asarray(targets, dtype=float)
    n = x.shape[0]

    pre, acts = [], [x]
    h = x
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0)
        acts.append(h)
    w_out, b_out = params.weights[-1], params.biases[-1]
    cols = w_out[:, actions]  # (hidden, n)
    picked = np.einsum("ij,ji->i", h, cols) + b_out[actions]
    err = targets - picked
    loss = float(np.mean(err * err))
    if not math.isfinite(loss):
        raise TrainingDivergenceError(f"non-finite Bellman loss {loss}")

    g = (-2.0 / n) * err  # dL/dQ(s_i, a_i)
    out_rows = h * g[:, None]
    delta = g[:, None] * cols.T  # dL/dh for the last hidden layer
    hidden_w, hidden_b = [], []
    for layer in range(len(pre) - 1, -1, -1):
        dz = delta * (pre[layer] > 0)
        hidden_w.append(acts[layer].T @ dz)
        hidden_b.append(dz.sum(axis=0))
        if layer:
            delta = dz @ params.weights[layer].T
    hidden_w.reverse()
    hidden_b.reverse()
    return loss, BellmanGradient(hidden_w, hidden_b, actions, out_rows, g.copy())


def sgd_step(params: MlpParams, grad: BellmanGradient, eta: float) -> None:
    """In-place ``theta -= eta * grad``."""
    if eta == 0:
        return
    for w, b, gw, gb in zip(params.weights, params.biases, grad.hidden_w, grad.hidden_b):
        w -= eta * gw
        b -= eta * gb
    # Sum duplicate action columns before scattering (faster than ufunc.at).
    order = np.argsort(grad.actions, kind="stable")
    acts = grad.actions[order]
    starts = np.flatnonzero(np.r_[True, acts[1:] != acts[:-1]])
    cols = acts[starts]
    params.weights[-1][:, cols] -= eta * np.add.reduceat(grad.out_rows[order], starts, axis=0).T
    params.biases[-1][cols] -= eta * np.add.reduceat(grad.out_bias[order], starts)
