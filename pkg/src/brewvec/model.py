"""Embedding parameterization and the scoring / likelihood math.

A model is two dense matrices: one row per beer and one row per flavor tag,
sharing a common dimension k.  The probability of seeing flavor f in a
check-in of beer b is softmax over the dot products of b's row with every
flavor row; the training objective elsewhere is the mean negative log of
that probability over all (beer, flavor) pairs.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ValidationError

# rows of logits evaluated at once when scoring large pair lists
_NLL_CHUNK = 4096


class Vocab:
    """An ordered list of unique ids with dense ordinals in [0, len)."""

    def __init__(self, items: list[str] | tuple[str, ...]):
        items = list(items)
        index: dict[str, int] = {}
        for i, item in enumerate(items):
            if item in index:
                raise ValidationError(f"duplicate vocabulary entry: {item!r}")
            index[item] = i
        self.items = items
        self.index = index

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item: str) -> bool:
        return item in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocab) and self.items == other.items

    def ordinal(self, item: str) -> int:
        return self.index[item]


class BeerVocab(Vocab):
    """Vocabulary of beer ids (conventionally "brewery/name" strings)."""

    @property
    def beers(self) -> list[str]:
        return self.items


class FlavorVocab(Vocab):
    """Vocabulary of flavor-tag strings."""

    @property
    def tags(self) -> list[str]:
        return self.items


@dataclass(frozen=True)
class CheckIn:
    """One user observation of a beer: its id, flavor tags, optional rating."""

    beer_id: str
    flavors: tuple[str, ...]
    rating: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "flavors", tuple(self.flavors))
        if len(self.flavors) == 0:
            raise ValidationError(f"check-in of {self.beer_id!r} has no flavors")
        if self.rating is not None and not 0.0 <= self.rating <= 5.0:
            raise ValidationError(
                f"rating {self.rating} for {self.beer_id!r} outside [0, 5]"
            )


@dataclass
class EmbeddingModel:
    """Learned beer and flavor matrices with their vocabularies.

    beer_matrix is |B| x k, flavor_matrix is |F| x k, both float64.
    """

    beer_matrix: np.ndarray
    flavor_matrix: np.ndarray
    beer_vocab: BeerVocab = field(repr=False)
    flavor_vocab: FlavorVocab = field(repr=False)

    def __post_init__(self):
        self.beer_matrix = np.ascontiguousarray(self.beer_matrix, dtype=np.float64)
        self.flavor_matrix = np.ascontiguousarray(self.flavor_matrix, dtype=np.float64)
        if self.beer_matrix.ndim != 2 or self.flavor_matrix.ndim != 2:
            raise ValidationError("embedding matrices must be 2-dimensional")
        if self.beer_matrix.shape[0] != len(self.beer_vocab):
            raise ValidationError(
                f"beer matrix has {self.beer_matrix.shape[0]} rows "
                f"but vocabulary has {len(self.beer_vocab)} beers"
            )
        if self.flavor_matrix.shape[0] != len(self.flavor_vocab):
            raise ValidationError(
                f"flavor matrix has {self.flavor_matrix.shape[0]} rows "
                f"but vocabulary has {len(self.flavor_vocab)} tags"
            )
        if self.beer_matrix.shape[1] != self.flavor_matrix.shape[1]:
            raise ValidationError("beer and flavor matrices disagree on dimension k")
        if not (np.isfinite(self.beer_matrix).all() and np.isfinite(self.flavor_matrix).all()):
            raise ValidationError("embedding matrices contain non-finite entries")

    @property
    def k(self) -> int:
        return self.beer_matrix.shape[1]


def _check_ordinal(ordinal: int, size: int, kind: str) -> None:
    if not 0 <= ordinal < size:
        raise IndexError(f"{kind} ordinal {ordinal} out of range [0, {size})")


def score(model: EmbeddingModel, beer: int, flavor: int) -> float:
    """Dot product of a beer row and a flavor row."""
    _check_ordinal(beer, len(model.beer_vocab), "beer")
    _check_ordinal(flavor, len(model.flavor_vocab), "flavor")
    return float(model.beer_matrix[beer] @ model.flavor_matrix[flavor])


def _softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction so large logits cannot overflow."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def flavor_distribution(model: EmbeddingModel, beer: int) -> np.ndarray:
    """Probability over all flavor tags for one beer: softmax of its logits."""
    _check_ordinal(beer, len(model.beer_vocab), "beer")
    logits = model.flavor_matrix @ model.beer_matrix[beer]
    return _softmax(logits)


def corpus_nll(model: EmbeddingModel, corpus) -> float:
    """Mean negative log probability over a list of (beer, flavor) ordinal pairs.

    Always >= 0 since every softmax probability is <= 1.  Pairs are scored
    in chunks so arbitrarily large corpora stay within memory.
    """
    pairs = np.asarray(corpus, dtype=np.int64)
    if pairs.size == 0:
        raise DataError("corpus_nll requires a non-empty corpus")
    pairs = pairs.reshape(-1, 2)
    total = 0.0
    for start in range(0, len(pairs), _NLL_CHUNK):
        chunk = pairs[start : start + _NLL_CHUNK]
        logits = model.beer_matrix[chunk[:, 0]] @ model.flavor_matrix.T
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_z = np.log(np.exp(shifted).sum(axis=1))
        log_p = shifted[np.arange(len(chunk)), chunk[:, 1]] - log_z
        total -= log_p.sum()
    return float(total / len(pairs))
