"""Desk-scale training with the uncertainty-weighted loss.

Small classifiers (linear and one-hidden-layer) stand in for heavyweight
backbones: the loss and the schedules are architecture-agnostic, and at this
scale every contract can be verified on a laptop.  Two scheduling mechanisms
are independent and both implemented:

  * a confidence warm-up restricting the first ``warmup_epochs`` epochs to
    extreme-confidence samples (|u| = 3) to stabilize early updates;
  * an optimizer learning-rate ramp (linear for ``lr_warmup_epochs``) followed
    by cosine decay.

Optimization uses adaptive moments with decoupled weight decay.  Everything
is driven by one seeded generator per run: same config, same trajectory,
bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DataError, NumericError
from .smoothing import SCORE_LEVELS, SmoothingParams, smoothing_rate

ARCHITECTURES = ("linear", "mlp_1hidden")
LOSS_MODES = ("gls", "ce")

PROB_FLOOR = 1e-12  # clamp applied to probabilities before log, trainer-only


@dataclass(frozen=True)
class TrainExample:
    features: np.ndarray
    y: int
    u: int


@dataclass
class TrainConfig:
    epochs: int = 30
    warmup_epochs: int = 0
    learning_rate: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    weight_decay: float = 0.0
    batch_size: int = 32
    seed: int = 42
    smoothing_params: SmoothingParams = field(default_factory=SmoothingParams)
    lr_warmup_epochs: int = 5
    architecture: str = "linear"
    hidden_width: int = 16
    loss: str = "gls"

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if not 0 <= self.warmup_epochs <= self.epochs:
            raise ConfigError(
                f"warmup_epochs must be in [0, epochs], got {self.warmup_epochs}"
            )
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        for name in ("beta1", "beta2"):
            b = getattr(self, name)
            if not 0 <= b < 1:
                raise ConfigError(f"{name} must be in [0, 1), got {b}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be >= 0, got {self.weight_decay}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"architecture must be one of {ARCHITECTURES}")
        if self.loss not in LOSS_MODES:
            raise ConfigError(f"loss must be one of {LOSS_MODES}")
        if self.architecture == "mlp_1hidden" and self.hidden_width < 1:
            raise ConfigError(f"hidden_width must be >= 1, got {self.hidden_width}")


@dataclass
class EpochMetrics:
    """Per-epoch record: mean loss over the samples the epoch trained on, and
    ranking quality (AUC of the class-1 probability against the flip-resolved
    effective labels) over the full dataset."""

    epoch: int
    mean_loss: float
    auc: float
    samples_used: int


@dataclass
class Model:
    architecture: str
    weights: dict[str, np.ndarray]
    hidden_width: int | None = None

    @property
    def feature_dim(self) -> int:
        key = "W" if self.architecture == "linear" else "W1"
        return self.weights[key].shape[0]


def init_model(feature_dim: int, config: TrainConfig, rng: np.random.Generator) -> Model:
    """Symmetric uniform init scaled by fan-in; biases start at zero."""
    if config.architecture == "linear":
        weights = {
            "W": rng.uniform(-1.0, 1.0, size=(feature_dim, 2)) / math.sqrt(feature_dim),
            "b": np.zeros(2),
        }
        return Model("linear", weights)
    h = config.hidden_width
    weights = {
        "W1": rng.uniform(-1.0, 1.0, size=(feature_dim, h)) / math.sqrt(feature_dim),
        "b1": np.zeros(h),
        "W2": rng.uniform(-1.0, 1.0, size=(h, 2)) / math.sqrt(h),
        "b2": np.zeros(2),
    }
    return Model("mlp_1hidden", weights, hidden_width=h)


def _forward(model: Model, X: np.ndarray):
    """Logits plus the hidden activations needed for backprop."""
    if model.architecture == "linear":
        return X @ model.weights["W"] + model.weights["b"], None
    hidden = np.tanh(X @ model.weights["W1"] + model.weights["b1"])
    return hidden @ model.weights["W2"] + model.weights["b2"], hidden


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def predict_proba(model: Model, X) -> np.ndarray:
    """Class probabilities for a batch of feature rows, shape (n, 2)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.feature_dim:
        raise ValueError(
            f"feature matrix must have shape (n, {model.feature_dim}), got {X.shape}"
        )
    logits, _ = _forward(model, X)
    return _softmax(logits)


def predict(model: Model, features) -> np.ndarray:
    """Probability pair for a single feature vector."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.feature_dim:
        raise ValueError(
            f"feature vector must have shape ({model.feature_dim},), got {x.shape}"
        )
    return predict_proba(model, x[None, :])[0]


def _as_arrays(dataset: list[TrainExample]):
    if not dataset:
        raise ConfigError("dataset is empty")
    X = np.stack([np.asarray(ex.features, dtype=np.float64) for ex in dataset])
    if X.ndim != 2:
        raise DataError("examples must have one-dimensional feature vectors")
    if not np.all(np.isfinite(X)):
        raise DataError("features contain non-finite values")
    y = np.array([ex.y for ex in dataset], dtype=np.int64)
    u = np.array([ex.u for ex in dataset], dtype=np.int64)
    if not np.all((y == 0) | (y == 1)):
        raise DataError("labels must be 0 or 1")
    if not np.all((u >= -3) & (u <= 3)):
        raise DataError("uncertainty scores must lie in {-3..3}")
    return X, y, u


def effective_labels(y: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized flip: y when u >= 0, 1-y when u < 0."""
    return np.where(u >= 0, y, 1 - y)


def batch_loss(P, y_eff, r) -> np.ndarray:
    """Per-example uncertainty-weighted loss for a batch of probabilities."""
    P = np.clip(np.asarray(P, dtype=np.float64), PROB_FLOOR, 1.0 - PROB_FLOOR)
    y_eff = np.asarray(y_eff, dtype=np.int64)
    r = np.asarray(r, dtype=np.float64)
    log_p = np.log(P)
    ce = -log_p[np.arange(len(y_eff)), y_eff]
    uniform = -0.5 * log_p.sum(axis=1)
    return (1.0 - r) * ce + r * uniform


def batch_targets(y_eff, r) -> np.ndarray:
    """Row-wise smoothed targets, shape (n, 2)."""
    y_eff = np.asarray(y_eff, dtype=np.int64)
    r = np.asarray(r, dtype=np.float64)
    T = np.repeat((r / 2.0)[:, None], 2, axis=1)
    T[np.arange(len(y_eff)), y_eff] += 1.0 - r
    return T


def _lr_at(epoch: int, config: TrainConfig) -> float:
    """Linear ramp for lr_warmup_epochs, then cosine decay toward zero."""
    ramp = min(config.lr_warmup_epochs, config.epochs)
    if epoch <= ramp:
        return config.learning_rate * epoch / ramp
    span = max(config.epochs - ramp, 1)
    progress = (epoch - ramp - 1) / span
    return config.learning_rate * 0.5 * (1.0 + math.cos(math.pi * progress))


def train(dataset: list[TrainExample], config: TrainConfig) -> tuple[Model, list[EpochMetrics]]:
    """Train a model on (features, y, u) triples.

    Epochs 1..warmup_epochs see only the |u| = 3 examples; afterwards every
    sample re-enters the loss.  Per-example smoothing rates come from the
    configured score-to-rate conversion ("gls" mode) or are forced to zero on
    the observed labels ("ce" mode).  Fully determined by config.seed.
    """
    X, y, u = _as_arrays(dataset)
    n = len(X)

    if config.loss == "gls":
        rate_of = {lvl: smoothing_rate(lvl, config.smoothing_params) for lvl in SCORE_LEVELS}
        r = np.array([rate_of[int(ui)] for ui in u])
        y_train = effective_labels(y, u)
    else:
        r = np.zeros(n)
        y_train = y.copy()
    y_metric = effective_labels(y, u)

    extreme = np.flatnonzero(np.abs(u) == 3)
    if config.warmup_epochs > 0 and len(extreme) == 0:
        raise ConfigError(
            "warmup_epochs > 0 requires at least one extreme-confidence (|u|=3) example"
        )

    rng = np.random.default_rng(config.seed)
    model = init_model(X.shape[1], config, rng)
    opt_m = {k: np.zeros_like(w) for k, w in model.weights.items()}
    opt_v = {k: np.zeros_like(w) for k, w in model.weights.items()}
    step = 0
    eps = 1e-8

    history: list[EpochMetrics] = []
    for epoch in range(1, config.epochs + 1):
        active = extreme if epoch <= config.warmup_epochs else np.arange(n)
        order = active[rng.permutation(len(active))]
        lr = _lr_at(epoch, config)

        total_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            Xb, yb, rb = X[batch], y_train[batch], r[batch]
            logits, hidden = _forward(model, Xb)
            P = _softmax(logits)
            losses = batch_loss(P, yb, rb)
            if not np.all(np.isfinite(losses)):
                raise NumericError(
                    f"non-finite loss at epoch {epoch}, batch starting {start}"
                )
            total_loss += float(losses.sum())

            G = (P - batch_targets(yb, rb)) / len(batch)
            if model.architecture == "linear":
                grads = {"W": Xb.T @ G, "b": G.sum(axis=0)}
            else:
                dH = (G @ model.weights["W2"].T) * (1.0 - hidden**2)
                grads = {
                    "W1": Xb.T @ dH,
                    "b1": dH.sum(axis=0),
                    "W2": hidden.T @ G,
                    "b2": G.sum(axis=0),
                }

            step += 1
            for key, g in grads.items():
                opt_m[key] = config.beta1 * opt_m[key] + (1 - config.beta1) * g
                opt_v[key] = config.beta2 * opt_v[key] + (1 - config.beta2) * g**2
                m_hat = opt_m[key] / (1 - config.beta1**step)
                v_hat = opt_v[key] / (1 - config.beta2**step)
                model.weights[key] -= lr * (
                    m_hat / (np.sqrt(v_hat) + eps) + config.weight_decay * model.weights[key]
                )

        scores = predict_proba(model, X)[:, 1]
        try:
            epoch_auc = auc(scores, y_metric)
        except NumericError:
            epoch_auc = float("nan")
        history.append(
            EpochMetrics(
                epoch=epoch,
                mean_loss=total_loss / len(order),
                auc=epoch_auc,
                samples_used=len(order),
            )
        )
    return model, history


def auc(scores, labels) -> float:
    """Area under the ROC curve via rank statistics.

    Equal to the probability that a random positive outscores a random
    negative, ties counted half (the Mann-Whitney U formulation with
    midranks).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be equal-length 1-d sequences")
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos + n_neg != len(labels):
        raise ValueError("labels must be 0 or 1")
    if n_pos == 0 or n_neg == 0:
        raise NumericError("AUC undefined: both classes must be present")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    first_rank = np.cumsum(counts) - counts + 1
    midranks = first_rank + (counts - 1) / 2.0
    rank_sum_pos = float(midranks[inverse][labels == 1].sum())
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate(model: Model, dataset: list[TrainExample]) -> float:
    """Held-out AUC of the class-1 probability against effective labels."""
    X, y, u = _as_arrays(dataset)
    return auc(predict_proba(model, X)[:, 1], effective_labels(y, u))


@dataclass
class SyntheticDataset:
    """Noisy two-cluster data with the clean labels kept aside for scoring."""

    examples: list[TrainExample]
    true_labels: np.ndarray


def synthetic_noisy_generator(
    n: int, d: int, noise_profile: dict[int, float], seed: int
) -> SyntheticDataset:
    """Two Gaussian class clusters with confidence-dependent label flips.

    Each example gets a confidence magnitude drawn uniformly from the profile
    keys; its observed label flips away from the truth with that level's
    probability (lower confidence, more flips).  Observed labels and scores go
    into the examples; the clean labels ride along for evaluation only.
    """
    if n <= 0:
        raise ConfigError(f"n must be positive, got {n}")
    if d < 2:
        raise ConfigError(f"d must be >= 2, got {d}")
    if not noise_profile:
        raise ConfigError("noise_profile must not be empty")
    for level, p in noise_profile.items():
        if level not in (0, 1, 2, 3):
            raise ConfigError(f"profile keys are confidence magnitudes 0..3, got {level}")
        if not 0.0 <= p <= 0.5:
            raise ConfigError(f"flip probability must be in [0, 0.5], got {p}")

    rng = np.random.default_rng(seed)
    true = rng.integers(0, 2, size=n)
    direction = np.ones(d) / math.sqrt(d)
    X = rng.standard_normal((n, d)) + np.where(true[:, None] == 1, 1.0, -1.0) * direction

    levels = np.array(sorted(noise_profile), dtype=np.int64)
    magnitude = levels[rng.integers(0, len(levels), size=n)]
    flip_p = np.array([noise_profile[int(m)] for m in magnitude])
    flipped = rng.random(n) < flip_p
    observed = np.where(flipped, 1 - true, true)

    examples = [
        TrainExample(features=X[i], y=int(observed[i]), u=int(magnitude[i]))
        for i in range(n)
    ]
    return SyntheticDataset(examples=examples, true_labels=true)


@dataclass(frozen=True)
class SweepCell:
    k: Fraction
    warmup_epochs: int
    auc: float


def cell_seed(base_seed: int, index: int) -> int:
    return base_seed + 1 + index


def sweep(
    dataset: list[TrainExample],
    base_config: TrainConfig,
    k_values: list,
    warmup_values: list[int],
    eval_dataset: list[TrainExample] | None = None,
) -> list[SweepCell]:
    """Grid of held-out AUCs over rate slopes and warm-up durations.

    Each cell trains from scratch with a seed derived from its grid index.
    Without an explicit eval split, a deterministic 75/25 split of the input
    (seeded by base_config.seed) is used.
    """
    if not k_values or not warmup_values:
        raise ConfigError("sweep grid must have at least one k and one warm-up value")
    if eval_dataset is None:
        rng = np.random.default_rng(base_config.seed)
        perm = rng.permutation(len(dataset))
        cut = max(1, int(0.75 * len(dataset)))
        train_split = [dataset[i] for i in perm[:cut]]
        eval_dataset = [dataset[i] for i in perm[cut:]]
    else:
        train_split = dataset

    cells = []
    for index, (k, w) in enumerate((k, w) for k in k_values for w in warmup_values):
        params = SmoothingParams(k=Fraction(k), r0=base_config.smoothing_params.r0)
        config = replace(
            base_config,
            smoothing_params=params,
            warmup_epochs=w,
            seed=cell_seed(base_config.seed, index),
        )
        model, _ = train(train_split, config)
        cells.append(SweepCell(k=Fraction(k), warmup_epochs=w, auc=evaluate(model, eval_dataset)))
    return cells


# ---------------------------------------------------------------------------
# File formats: training examples (JSON lines) and model checkpoints (JSON).


def write_examples(path, examples: list[TrainExample]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ex in examples:
            features = np.asarray(ex.features, dtype=np.float64).tolist()
            fh.write(json.dumps({"features": features, "y": int(ex.y), "u": int(ex.u)}) + "\n")


def read_examples(path) -> list[TrainExample]:
    examples = []
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: invalid record ({exc.msg})")
            missing = [k for k in ("features", "y", "u") if k not in rec]
            if missing:
                raise DataError(f"line {lineno}: missing field(s) {', '.join(missing)}")
            features = np.asarray(rec["features"], dtype=np.float64)
            if features.ndim != 1:
                raise DataError(f"line {lineno}: features must be a flat vector")
            if dim is None:
                dim = features.shape[0]
            elif features.shape[0] != dim:
                raise DataError(
                    f"line {lineno}: feature dimension {features.shape[0]} != {dim}"
                )
            if rec["y"] not in (0, 1):
                raise DataError(f"line {lineno}: y must be 0 or 1")
            if rec["u"] not in SCORE_LEVELS:
                raise DataError(f"line {lineno}: u outside {{-3..3}}")
            examples.append(TrainExample(features=features, y=rec["y"], u=rec["u"]))
    if not examples:
        raise DataError(f"no examples in {path}")
    return examples


def save_model(model: Model, path) -> None:
    payload = {
        "architecture": model.architecture,
        "hidden_width": model.hidden_width,
        "weights": {k: w.tolist() for k, w in model.weights.items()},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("architecture") not in ARCHITECTURES:
        raise DataError(f"unknown architecture in model file: {payload.get('architecture')!r}")
    weights = {k: np.asarray(w, dtype=np.float64) for k, w in payload["weights"].items()}
    return Model(payload["architecture"], weights, hidden_width=payload.get("hidden_width"))
