"""A small feedforward softmax classifier trained by minibatch SGD.

Forward and backward passes are written out explicitly in numpy (float64
throughout): rectifier hidden layers, a three-way softmax head, and the
blended easy/hard loss driving the score gradient. Training is fully
deterministic given the initial parameters and the shuffle generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import Dataset
from .losses import batch_combined_loss_grad, softmax

N_CLASSES = 3


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0
    hidden_sizes: tuple[int, ...] = (16,)

    def __post_init__(self) -> None:
        if not (self.learning_rate > 0):
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        hidden = tuple(int(h) for h in self.hidden_sizes)
        if any(h < 1 for h in hidden):
            raise ValueError(f"hidden layer sizes must be positive, got {self.hidden_sizes!r}")
        object.__setattr__(self, "hidden_sizes", hidden)


@dataclass
class ModelParams:
    """Per-layer weight matrices and bias vectors.

    ``weights[l]`` has shape (layer_sizes[l+1], layer_sizes[l]) and acts on
    column features from the left; the final layer is always 3 wide.
    """

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2:
            raise ValueError("layer_sizes needs at least an input and an output layer")
        if any(s < 1 for s in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        if sizes[-1] != N_CLASSES:
            raise ValueError(f"final layer must have width {N_CLASSES}, got {sizes[-1]}")
        n_layers = len(sizes) - 1
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise ValueError("weights/biases must hold one entry per layer")
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[l + 1], sizes[l]):
                raise ValueError(
                    f"layer {l} weights must have shape {(sizes[l + 1], sizes[l])}, got {w.shape}"
                )
            if b.shape != (sizes[l + 1],):
                raise ValueError(f"layer {l} biases must have shape ({sizes[l + 1]},), got {b.shape}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {l} parameters must be finite")
        self.layer_sizes = sizes

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    def copy(self) -> "ModelParams":
        return ModelParams(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )


def init(layer_sizes, seed: int) -> ModelParams:
    """Fresh parameters: weights ~ N(0, 1/fan_in), biases zero, seeded."""
    sizes = tuple(int(s) for s in layer_sizes)
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(rng.standard_normal((fan_out, fan_in)) / np.sqrt(fan_in))
        biases.append(np.zeros(fan_out))
    return ModelParams(sizes, weights, biases)


def _forward(params: ModelParams, x: np.ndarray):
    """Batch forward pass; returns final scores plus per-layer caches."""
    activations = [x]
    pre_acts = []
    h = x
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        z = h @ w.T + b
        pre_acts.append(z)
        h = np.maximum(z, 0.0)
        activations.append(h)
    scores = h @ params.weights[-1].T + params.biases[-1]
    return scores, pre_acts, activations


def scores_for(params: ModelParams, features: np.ndarray) -> np.ndarray:
    """Pre-softmax scores for a batch (n, d) or a single feature vector (d,)."""
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise ValueError(
            f"features must have dimension {params.input_dim}, got shape {np.asarray(features).shape}"
        )
    scores, _, _ = _forward(params, x)
    return scores[0] if single else scores


def predict_proba(params: ModelParams, features: np.ndarray) -> np.ndarray:
    """Class probabilities (softmax of the final scores) for one sample."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a single feature vector, got shape {x.shape}")
    return softmax(scores_for(params, x))


def predict_proba_batch(params: ModelParams, features: np.ndarray) -> np.ndarray:
    """Class probabilities, one row per sample."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a (n, d) feature matrix, got shape {x.shape}")
    return softmax(scores_for(params, x))


def _backward(params: ModelParams, score_grad: np.ndarray, pre_acts, activations):
    """Gradients of the batch loss w.r.t. every weight and bias.

    ``score_grad`` is d(loss)/d(scores) for the whole batch, already scaled
    by 1/batch_size.
    """
    weight_grads = [None] * len(params.weights)
    bias_grads = [None] * len(params.biases)
    delta = score_grad
    for l in range(len(params.weights) - 1, -1, -1):
        weight_grads[l] = delta.T @ activations[l]
        bias_grads[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ params.weights[l]) * (pre_acts[l - 1] > 0.0)
    return weight_grads, bias_grads


def train_epoch(
    params: ModelParams,
    train_set: Dataset,
    lam: float,
    config: TrainConfig,
    rng: np.random.Generator,
) -> tuple[ModelParams, float]:
    """One shuffled pass of minibatch SGD at curriculum weight ``lam``.

    Updates ``params`` in place and returns it with the mean per-sample
    blended loss over the epoch.
    """
    n = len(train_set)
    if n == 0:
        raise ValueError("training set is empty")
    order = rng.permutation(n)
    total_loss = 0.0
    for start in range(0, n, config.batch_size):
        batch = order[start : start + config.batch_size]
        x = train_set.features[batch]
        y = train_set.labels[batch]
        scores, pre_acts, activations = _forward(params, x)
        losses, grads = batch_combined_loss_grad(scores, y, lam)
        total_loss += float(losses.sum())
        weight_grads, bias_grads = _backward(params, grads / len(batch), pre_acts, activations)
        for w, b, dw, db in zip(params.weights, params.biases, weight_grads, bias_grads):
            w -= config.learning_rate * dw
            b -= config.learning_rate * db
    return params, total_loss / n


def accuracy_on(params: ModelParams, dataset: Dataset) -> float:
    """Fraction of samples whose argmax class matches the label."""
    probs = predict_proba_batch(params, dataset.features)
    return float(np.mean(np.argmax(probs, axis=1) == dataset.labels))


def mean_recall(pred_labels: np.ndarray, true_labels: np.ndarray) -> float:
    """Mean per-class recall over the classes present in ``true_labels``."""
    recalls = []
    for c in np.unique(true_labels):
        mask = true_labels == c
        recalls.append(float(np.mean(pred_labels[mask] == c)))
    return float(np.mean(recalls))


@dataclass
class TrainResult:
    """Outcome of a full training run with best-epoch selection."""

    params: ModelParams
    best_epoch: int
    best_val_score: float
    epoch_losses: list[float] = field(default_factory=list)
    val_scores: list[float] = field(default_factory=list)


def train(
    params: ModelParams,
    train_set: Dataset,
    val_set: Dataset,
    lambdas,
    config: TrainConfig,
    rng: np.random.Generator,
) -> TrainResult:
    """Train for ``config.epochs`` epochs with per-epoch curriculum weights.

    ``lambdas[e]`` is the weight applied to every batch of epoch ``e``.
    After each epoch the validation balanced accuracy (mean per-class
    recall) is computed; the parameters with the best score are kept, ties
    going to the earlier epoch. ``params`` itself ends up in the
    final-epoch state; the returned snapshot is an independent copy.
    """
    lambdas = list(lambdas)
    if len(lambdas) != config.epochs:
        raise ValueError(
            f"need one curriculum weight per epoch ({config.epochs}), got {len(lambdas)}"
        )
    if len(val_set) == 0:
        raise ValueError("validation set is empty")

    best_params = params.copy()
    best_score = -np.inf
    best_epoch = -1
    epoch_losses: list[float] = []
    val_scores: list[float] = []
    for epoch, lam in enumerate(lambdas):
        _, mean_loss = train_epoch(params, train_set, lam, config, rng)
        probs = predict_proba_batch(params, val_set.features)
        score = mean_recall(np.argmax(probs, axis=1), val_set.labels)
        epoch_losses.append(mean_loss)
        val_scores.append(score)
        if score > best_score:
            best_score = score
            best_epoch = epoch
            best_params = params.copy()
    return TrainResult(
        params=best_params,
        best_epoch=best_epoch,
        best_val_score=float(best_score),
        epoch_losses=epoch_losses,
        val_scores=val_scores,
    )


def save_params(params: ModelParams, path: str | Path) -> None:
    """Write parameters as text: sizes header, then per layer the weight
    matrix rows (row-major) followed by the bias vector, full precision."""
    path = Path(path)
    lines = [" ".join(str(s) for s in params.layer_sizes)]
    for w, b in zip(params.weights, params.biases):
        for row in w:
            lines.append(" ".join(repr(float(v)) for v in row))
        lines.append(" ".join(repr(float(v)) for v in b))
    path.write_text("\n".join(lines) + "\n")


def load_params(path: str | Path) -> ModelParams:
    """Read parameters written by ``save_params``; exact round trip."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty parameter file")
    try:
        sizes = tuple(int(s) for s in lines[0].split())
    except ValueError:
        raise ValueError(f"{path}: malformed size header {lines[0]!r}") from None
    weights, biases = [], []
    pos = 1
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        rows = []
        for _ in range(fan_out):
            if pos >= len(lines):
                raise ValueError(f"{path}: truncated parameter file")
            rows.append([float(v) for v in lines[pos].split()])
            pos += 1
        if pos >= len(lines):
            raise ValueError(f"{path}: truncated parameter file")
        bias = [float(v) for v in lines[pos].split()]
        pos += 1
        w = np.array(rows, dtype=np.float64)
        b = np.array(bias, dtype=np.float64)
        if w.shape != (fan_out, fan_in) or b.shape != (fan_out,):
            raise ValueError(f"{path}: layer shape mismatch against header")
        weights.append(w)
        biases.append(b)
    if pos != len(lines):
        raise ValueError(f"{path}: trailing data after parameters")
    return ModelParams(sizes, weights, biases)
