"""ReLU multilayer perceptron and the GRU-SVM hybrid, with hand-written backprop.

The GRU keeps one combined weight matrix per gate acting on the
concatenation ``[h_prev, x_t]``::

    z  = sigmoid([h, x] @ w_z + b_z)
    r  = sigmoid([h, x] @ w_r + b_r)
    hc = tanh([r * h, x] @ w_h + b_h)
    h' = (1 - z) * h + z * hc

The final state feeds a linear layer whose two class scores are trained
with the squared-hinge SVM loss.
"""

from dataclasses import dataclass

import numpy as np

from ._base import MinibatchClassifier
from .dataset import one_hot
from .exceptions import ConfigurationError, DimensionError
from .linear_models import cross_entropy, softmax, svm_loss, svm_predict
from .numerics import DTYPE, InitScheme, as_matrix, init_weights, sigmoid


def relu(x):
    return np.maximum(np.asarray(x, dtype=DTYPE), 0.0)


def dropout(x, keep_prob, train, rng=None):
    """Inverted dropout. Returns ``(output, mask)``; ``mask`` is None when nothing is dropped."""
    if not 0.0 < keep_prob <= 1.0:
        raise ConfigurationError(f"keep_prob must lie in (0, 1], got {keep_prob}")
    x = np.asarray(x, dtype=DTYPE)
    if not train or keep_prob == 1.0:
        return x, None
    if rng is None:
        raise ConfigurationError("train-mode dropout needs an rng")
    mask = (rng.random(x.shape) < keep_prob) / keep_prob
    return x * mask, mask


# ---------------------------------------------------------------- MLP

def init_mlp(n_inputs, hidden_sizes, n_outputs, rng):
    sizes = [n_inputs, *hidden_sizes, n_outputs]
    params = {}
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:]), 1):
        params[f"w{i}"] = init_weights((fan_in, fan_out), InitScheme.SCALED_NORMAL, rng)
        params[f"b{i}"] = init_weights((1, fan_out), InitScheme.ZEROS)
    return params


def _n_layers(params):
    return sum(1 for k in params if k.startswith("w"))


def mlp_forward(x, params):
    """Affine+ReLU hidden layers followed by an affine output layer.

    Returns ``(logits, cache)``; the cache holds each layer's input and the
    hidden pre-activations for :func:`mlp_backward`.
    """
    a = as_matrix(x, "x")
    n = _n_layers(params)
    inputs, pre = [], []
    for i in range(1, n + 1):
        w = params[f"w{i}"]
        if a.shape[1] != w.shape[0]:
            raise DimensionError(f"layer {i} expects {w.shape[0]} inputs, got {a.shape[1]}")
        inputs.append(a)
        zi = a @ w + params[f"b{i}"]
        if i < n:
            pre.append(zi)
            a = np.maximum(zi, 0.0)
        else:
            a = zi
    return a, (inputs, pre)


def mlp_backward(d_logits, params, cache):
    inputs, pre = cache
    n = _n_layers(params)
    grads = {}
    delta = d_logits
    for i in range(n, 0, -1):
        grads[f"w{i}"] = inputs[i - 1].T @ delta
        grads[f"b{i}"] = delta.sum(axis=0, keepdims=True)
        if i > 1:
            delta = (delta @ params[f"w{i}"].T) * (pre[i - 2] > 0)
    return grads


# ---------------------------------------------------------------- GRU

@dataclass
class GateCache:
    h_prev: np.ndarray
    concat: np.ndarray
    z: np.ndarray
    r: np.ndarray
    concat_reset: np.ndarray
    h_cand: np.ndarray


def init_gru_svm(input_size, cell_size, n_classes, rng):
    fan_in = input_size + cell_size
    sn = InitScheme.SCALED_NORMAL
    return {
        "w_z": init_weights((fan_in, cell_size), sn, rng),
        "w_r": init_weights((fan_in, cell_size), sn, rng),
        "w_h": init_weights((fan_in, cell_size), sn, rng),
        "b_z": init_weights((1, cell_size), InitScheme.ZEROS),
        "b_r": init_weights((1, cell_size), InitScheme.ZEROS),
        "b_h": init_weights((1, cell_size), InitScheme.ZEROS),
        "svm_w": init_weights((cell_size, n_classes), sn, rng),
        "svm_b": init_weights((1, n_classes), InitScheme.ZEROS),
    }


def gru_cell_step(x_t, h_prev, params):
    """Advance the GRU by one time step. Returns ``(h_t, GateCache)``."""
    x_t = as_matrix(x_t, "x_t")
    h_prev = as_matrix(h_prev, "h_prev")
    cell = params["w_z"].shape[1]
    fan_in = params["w_z"].shape[0]
    if h_prev.shape[1] != cell or x_t.shape[0] != h_prev.shape[0]:
        raise DimensionError(f"h_prev must be batch x {cell}, got {h_prev.shape}")
    if h_prev.shape[1] + x_t.shape[1] != fan_in:
        raise DimensionError(f"x_t has {x_t.shape[1]} columns, gates expect {fan_in - cell}")
    concat = np.concatenate([h_prev, x_t], axis=1)
    z = sigmoid(concat @ params["w_z"] + params["b_z"])
    r = sigmoid(concat @ params["w_r"] + params["b_r"])
    concat_reset = np.concatenate([r * h_prev, x_t], axis=1)
    h_cand = np.tanh(concat_reset @ params["w_h"] + params["b_h"])
    h_t = (1.0 - z) * h_prev + z * h_cand
    return h_t, GateCache(h_prev, concat, z, r, concat_reset, h_cand)


def gru_cell_backward(d_h, cache, params, grads):
    """Backprop one step; accumulates weight gradients into ``grads`` and returns d(h_prev)."""
    c = cache
    cell = c.h_prev.shape[1]
    d_z = d_h * (c.h_cand - c.h_prev)
    d_hc = d_h * c.z
    d_hprev = d_h * (1.0 - c.z)

    d_ah = d_hc * (1.0 - c.h_cand * c.h_cand)
    grads["w_h"] += c.concat_reset.T @ d_ah
    grads["b_h"] += d_ah.sum(axis=0, keepdims=True)
    d_rh = d_ah @ params["w_h"][:cell].T
    d_r = d_rh * c.h_prev
    d_hprev += d_rh * c.r

    d_az = d_z * c.z * (1.0 - c.z)
    d_ar = d_r * c.r * (1.0 - c.r)
    grads["w_z"] += c.concat.T @ d_az
    grads["w_r"] += c.concat.T @ d_ar
    grads["b_z"] += d_az.sum(axis=0, keepdims=True)
    grads["b_r"] += d_ar.sum(axis=0, keepdims=True)
    d_hprev += d_az @ params["w_z"][:cell].T + d_ar @ params["w_r"][:cell].T
    return d_hprev


def to_sequence(x, seq_len):
    """Reshape ``(batch, seq_len * input_size)`` rows into time-major steps."""
    x = as_matrix(x, "x")
    if x.shape[1] % seq_len:
        raise DimensionError(f"{x.shape[1]} features cannot form {seq_len} equal time steps")
    return x.reshape(x.shape[0], seq_len, x.shape[1] // seq_len)


def gru_svm_forward(x, params, seq_len=30, train=False, keep_prob=1.0, rng=None):
    """Unroll the GRU over each sample's feature sequence from ``h0 = 0`` and score with the SVM layer.

    Returns ``(scores, cache)``. Numerically this is :func:`gru_cell_step`
    applied ``seq_len`` times, but the input projections of every step are
    computed up front and the update/reset gates share one matmul.
    """
    seq = to_sequence(x, seq_len)
    batch, _, n_in = seq.shape
    cell = params["w_z"].shape[1]
    if n_in + cell != params["w_z"].shape[0]:
        raise DimensionError(
            f"time steps carry {n_in} inputs, gates expect {params['w_z'].shape[0] - cell}"
        )
    w_zr_h = np.concatenate([params["w_z"][:cell], params["w_r"][:cell]], axis=1)
    w_zr_x = np.concatenate([params["w_z"][cell:], params["w_r"][cell:]], axis=1)
    b_zr = np.concatenate([params["b_z"], params["b_r"]], axis=1)
    w_h_h = params["w_h"][:cell]
    x_tm = np.ascontiguousarray(seq.transpose(1, 0, 2))  # (time, batch, inputs)
    x_flat = x_tm.reshape(seq_len * batch, n_in)
    xp_zr = (x_flat @ w_zr_x + b_zr).reshape(seq_len, batch, 2 * cell)
    xp_h = (x_flat @ params["w_h"][cell:] + params["b_h"]).reshape(seq_len, batch, cell)

    shape = (seq_len, batch, cell)
    hs = np.empty((seq_len + 1, batch, cell))  # hs[t] is the state entering step t
    zrs = np.empty((seq_len, batch, 2 * cell))
    rhs, hcs = np.empty(shape), np.empty(shape)
    hs[0] = 0.0
    for t in range(seq_len):
        h, zr, hc, h_new = hs[t], zrs[t], hcs[t], hs[t + 1]
        np.matmul(h, w_zr_h, out=zr)
        zr += xp_zr[t]
        sigmoid(zr, out=zr)
        np.multiply(zr[:, cell:], h, out=rhs[t])
        np.matmul(rhs[t], w_h_h, out=hc)
        hc += xp_h[t]
        np.tanh(hc, out=hc)
        np.subtract(hc, h, out=h_new)
        h_new *= zr[:, :cell]
        h_new += h
    h = hs[seq_len]
    h_drop, mask = dropout(h, keep_prob, train, rng)
    scores = h_drop @ params["svm_w"] + params["svm_b"]
    cache = {
        "x": x_tm, "h": hs[:seq_len], "zr": zrs, "rh": rhs, "hc": hcs,
        "w_zr_h": w_zr_h, "w_h_h": w_h_h, "h_drop": h_drop, "mask": mask,
    }
    return scores, cache


def gru_svm_backward(d_scores, params, cache):
    c = cache
    seq_len, batch, cell = c["h"].shape
    grads = {
        "svm_w": c["h_drop"].T @ d_scores,
        "svm_b": d_scores.sum(axis=0, keepdims=True),
    }
    d_h = d_scores @ params["svm_w"].T
    if c["mask"] is not None:
        d_h *= c["mask"]
    d_azr = np.empty((seq_len, batch, 2 * cell))
    d_ah = np.empty((seq_len, batch, cell))
    w_zr_h_t = c["w_zr_h"].T
    w_h_h_t = c["w_h_h"].T
    tmp = np.empty((batch, cell))
    for t in range(seq_len - 1, -1, -1):
        h, hc = c["h"][t], c["hc"][t]
        z, r = c["zr"][t, :, :cell], c["zr"][t, :, cell:]
        dz, dr = d_azr[t, :, :cell], d_azr[t, :, cell:]
        d_hc = d_h * z
        # direct path (1 - z) * d_h
        d_prev = d_h - d_hc
        np.multiply(hc, hc, out=tmp)
        np.subtract(1.0, tmp, out=tmp)
        np.multiply(d_hc, tmp, out=d_ah[t])
        d_rh = d_ah[t] @ w_h_h_t
        np.subtract(hc, h, out=dz)
        dz *= d_h
        np.subtract(1.0, z, out=tmp)
        tmp *= z
        dz *= tmp
        np.multiply(d_rh, h, out=dr)
        np.subtract(1.0, r, out=tmp)
        tmp *= r
        dr *= tmp
        d_rh *= r
        d_prev += d_rh
        d_prev += d_azr[t] @ w_zr_h_t
        d_h = d_prev

    # weight gradients summed over time in single matmuls
    flat = seq_len * batch
    h_all = c["h"].reshape(flat, cell)
    x_all = c["x"].reshape(flat, -1)
    dzr = d_azr.reshape(flat, 2 * cell)
    dah = d_ah.reshape(flat, cell)
    g_zr_h = h_all.T @ dzr
    g_zr_x = x_all.T @ dzr
    grads["w_z"] = np.concatenate([g_zr_h[:, :cell], g_zr_x[:, :cell]], axis=0)
    grads["w_r"] = np.concatenate([g_zr_h[:, cell:], g_zr_x[:, cell:]], axis=0)
    grads["w_h"] = np.concatenate([c["rh"].reshape(flat, cell).T @ dah, x_all.T @ dah], axis=0)
    b_zr = dzr.sum(axis=0, keepdims=True)
    grads["b_z"], grads["b_r"] = b_zr[:, :cell], b_zr[:, cell:]
    grads["b_h"] = dah.sum(axis=0, keepdims=True)
    return {k: grads[k] for k in params}


def gru_svm_loss(x, y, params, c=5.0, seq_len=30, train=False, keep_prob=1.0, rng=None,
                 variant="l2"):
    """SVM loss of the GRU-SVM on integer labels, with full parameter gradients."""
    scores, cache = gru_svm_forward(x, params, seq_len, train, keep_prob, rng)
    targets = 2.0 * one_hot(y, scores.shape[1]) - 1.0
    loss, d_scores, d_reg = svm_loss(targets, scores, params["svm_w"], c, variant)
    grads = gru_svm_backward(d_scores, params, cache)
    grads["svm_w"] += d_reg
    return loss, grads, scores


# ---------------------------------------------------------------- estimators

class MLPClassifier(MinibatchClassifier):
    """ReLU MLP with a two-way softmax output, trained with SGD on cross entropy."""

    _optimizer = "sgd"

    def __init__(self, hidden_sizes=(500, 500, 500), batch_size=128, steps=3000,
                 learning_rate=1e-2, random_state=None, trace_interval=100):
        self.hidden_sizes = hidden_sizes
        self.batch_size = batch_size
        self.steps = steps
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.trace_interval = trace_interval

    def _init_params(self, n_features, rng):
        if not self.hidden_sizes or min(self.hidden_sizes) < 1:
            raise ConfigurationError(f"invalid hidden_sizes {self.hidden_sizes!r}")
        return init_mlp(n_features, tuple(self.hidden_sizes), 2, rng)

    def _scores(self, params, X):
        return mlp_forward(X, params)[0]

    def _loss_and_grads(self, params, X, y, rng):
        logits, cache = mlp_forward(X, params)
        loss, d_logits = cross_entropy(one_hot(y, 2), softmax(logits))
        return loss, mlp_backward(d_logits, params, cache), np.argmax(logits, axis=1)

    def _predict_index(self, params, X):
        return np.argmax(self._scores(params, X), axis=1)

    def predict_proba(self, X):
        return softmax(self.decision_function(X))


class GRUSVMClassifier(MinibatchClassifier):
    """GRU over the feature sequence with an L2-SVM output layer, trained with Adam.

    ``seq_len`` splits each 30-feature row into equal time steps; the
    default feeds one feature per step. Dropout with ``keep_prob`` acts on
    the final hidden state during training only.
    """

    _optimizer = "adam"

    def __init__(self, cell_size=128, seq_len=30, keep_prob=0.5, c=5.0, variant="l2",
                 batch_size=128, steps=3000, learning_rate=1e-3, random_state=None,
                 trace_interval=100):
        self.cell_size = cell_size
        self.seq_len = seq_len
        self.keep_prob = keep_prob
        self.c = c
        self.variant = variant
        self.batch_size = batch_size
        self.steps = steps
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.trace_interval = trace_interval

    def _init_params(self, n_features, rng):
        if n_features % self.seq_len:
            raise ConfigurationError(
                f"{n_features} features cannot be split into {self.seq_len} time steps"
            )
        if not 0.0 < self.keep_prob <= 1.0:
            raise ConfigurationError(f"keep_prob must lie in (0, 1], got {self.keep_prob}")
        return init_gru_svm(n_features // self.seq_len, int(self.cell_size), 2, rng)

    def _scores(self, params, X):
        return gru_svm_forward(X, params, self.seq_len)[0]

    def _loss_and_grads(self, params, X, y, rng):
        loss, grads, scores = gru_svm_loss(
            X, y, params, self.c, self.seq_len, train=True, keep_prob=self.keep_prob, rng=rng,
            variant=self.variant,
        )
        return loss, grads, svm_predict(scores)

    def _predict_index(self, params, X):
        return svm_predict(self._scores(params, X))
