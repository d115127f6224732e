"""Skip-gram training: full-softmax gradients and a from-scratch Adam loop.

For one pair (b, f*) with p = softmax of beer b's flavor logits:
    d/d flavor_row[m] = (p[m] - [m == f*]) * beer_row[b]
    d/d beer_row[b]   = sum_m p[m] * flavor_row[m] - flavor_row[f*]
Batch gradients are the pair sums divided by the batch size.  The softmax
is exact over the whole flavor vocabulary; no sampling approximation.
"""

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DataError, TrainingError
from .ingest import Dataset
from .model import BeerVocab, EmbeddingModel, FlavorVocab, corpus_nll


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 5
    learning_rate: float = 0.001
    batch_size: int = 128
    max_epochs: int = 300
    seed: int = 42
    shuffle: bool = True
    log_every: int = 1


@dataclass
class Gradients:
    """Gradient of the mean NLL, shaped like the two embedding matrices."""

    beer: np.ndarray
    flavor: np.ndarray


@dataclass
class AdamState:
    """First/second moment accumulators and the shared step counter."""

    m_beer: np.ndarray
    v_beer: np.ndarray
    m_flavor: np.ndarray
    v_flavor: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_model(cls, model: EmbeddingModel) -> "AdamState":
        return cls(
            m_beer=np.zeros_like(model.beer_matrix),
            v_beer=np.zeros_like(model.beer_matrix),
            m_flavor=np.zeros_like(model.flavor_matrix),
            v_flavor=np.zeros_like(model.flavor_matrix),
        )


@dataclass
class TrainReport:
    """Per-epoch mean NLL series plus the final model."""

    nll_per_epoch: list[float]
    model: EmbeddingModel
    epochs_run: int
    wall_time_s: float


def init_model(beer_vocab: BeerVocab, flavor_vocab: FlavorVocab, config: TrainConfig) -> EmbeddingModel:
    """Fresh model with entries i.i.d. uniform on (-0.5/k, 0.5/k), seeded.

    A zero initialization would be a stationary point (uniform softmax,
    zero gradient everywhere), so the scale must be nonzero.
    """
    if len(beer_vocab) == 0 or len(flavor_vocab) == 0:
        raise DataError("cannot initialize a model over an empty vocabulary")
    rng = np.random.default_rng(config.seed)
    bound = 0.5 / config.dim
    beer = rng.uniform(-bound, bound, size=(len(beer_vocab), config.dim))
    flavor = rng.uniform(-bound, bound, size=(len(flavor_vocab), config.dim))
    return EmbeddingModel(beer, flavor, beer_vocab, flavor_vocab)


def batch_gradient(model: EmbeddingModel, batch) -> Gradients:
    """Exact full-softmax gradient of the mean NLL over one batch of pairs."""
    pairs = np.asarray(batch, dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        raise DataError("batch_gradient requires a non-empty batch")
    beers, flavors = pairs[:, 0], pairs[:, 1]

    beer_rows = model.beer_matrix[beers]                      # (P, k)
    logits = beer_rows @ model.flavor_matrix.T                # (P, |F|)
    shifted = logits - logits.max(axis=1, keepdims=True)
    probs = np.exp(shifted)
    probs /= probs.sum(axis=1, keepdims=True)

    grad_flavor = probs.T @ beer_rows                         # sum_p p[m] * b
    np.subtract.at(grad_flavor, flavors, beer_rows)           # minus b at f*

    per_pair_beer = probs @ model.flavor_matrix               # sum_m p[m] * f_m
    per_pair_beer -= model.flavor_matrix[flavors]
    grad_beer = np.zeros_like(model.beer_matrix)
    np.add.at(grad_beer, beers, per_pair_beer)

    n = float(len(pairs))
    return Gradients(beer=grad_beer / n, flavor=grad_flavor / n)


def adam_step(
    model: EmbeddingModel,
    grad: Gradients,
    state: AdamState,
    lr: float,
) -> tuple[EmbeddingModel, AdamState]:
    """One bias-corrected Adam update, applied in place to both matrices."""
    if not (np.isfinite(grad.beer).all() and np.isfinite(grad.flavor).all()):
        raise TrainingError(
            f"non-finite gradient at step {state.t + 1}; aborting "
            f"(beer finite={np.isfinite(grad.beer).all()}, "
            f"flavor finite={np.isfinite(grad.flavor).all()})"
        )
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    for matrix, g, m, v in (
        (model.beer_matrix, grad.beer, state.m_beer, state.v_beer),
        (model.flavor_matrix, grad.flavor, state.m_flavor, state.v_flavor),
    ):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * np.square(g)
        matrix -= lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return model, state


def train(
    dataset: Dataset,
    config: TrainConfig,
    progress: Callable[[int, float], None] | None = None,
) -> TrainReport:
    """Run the full training loop: shuffle, batch, gradient, Adam.

    Each epoch records the pair-weighted mean of batch NLLs, each evaluated
    on the model state just before its update.  Deterministic for a fixed
    (seed, data, config).  progress, when given, receives (epoch, nll)
    every log_every epochs.
    """
    pairs = dataset.pairs
    if len(pairs) == 0:
        raise DataError("dataset has no training pairs")

    start = time.perf_counter()
    model = init_model(dataset.beer_vocab, dataset.flavor_vocab, config)
    state = AdamState.for_model(model)
    shuffle_rng = np.random.default_rng(config.seed)

    nll_per_epoch: list[float] = []
    for epoch in range(config.max_epochs):
        order = shuffle_rng.permutation(len(pairs)) if config.shuffle else np.arange(len(pairs))
        epoch_nll = 0.0
        for lo in range(0, len(order), config.batch_size):
            batch = pairs[order[lo : lo + config.batch_size]]
            epoch_nll += corpus_nll(model, batch) * len(batch)
            grad = batch_gradient(model, batch)
            adam_step(model, grad, state, config.learning_rate)
        nll_per_epoch.append(epoch_nll / len(pairs))
        if progress is not None and config.log_every > 0 and (epoch + 1) % config.log_every == 0:
            progress(epoch + 1, nll_per_epoch[-1])

    return TrainReport(
        nll_per_epoch=nll_per_epoch,
        model=model,
        epochs_run=len(nll_per_epoch),
        wall_time_s=time.perf_counter() - start,
    )
