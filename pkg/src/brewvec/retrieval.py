"""Dot-product ranking over the learned matrices.

Every operation is an exhaustive scan: score all candidates, sort
descending, break ties by ascending id, truncate.  Raw dot product is the
default metric everywhere; cosine is available as an opt-in.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotFoundError, ValidationError
from .model import EmbeddingModel

WEIGHT_SUM_TOL = 1e-9
DESCRIBE_DEFAULT_N = 3


@dataclass
class RankedResult:
    """Ordered (item id, score) pairs plus a description of the query."""

    entries: list[tuple[str, float]]
    query_echo: str

    @property
    def ids(self) -> list[str]:
        return [item for item, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.entries]


@dataclass(frozen=True)
class FlavorWeight:
    tag: str
    weight: float


def _unit_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)


def rank_by_dot(
    ids: Sequence[str],
    vectors: np.ndarray,
    query: np.ndarray,
    n: int,
    query_echo: str = "",
    metric: str = "dot",
) -> RankedResult:
    """Rank candidate vectors against a query vector, best first."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if len(ids) == 0:
        raise ValidationError("empty candidate set")
    vectors = np.asarray(vectors, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != len(ids) or vectors.shape[1] != query.shape[0]:
        raise ValidationError(
            f"candidate shape {vectors.shape} incompatible with "
            f"{len(ids)} ids and query dimension {query.shape[0]}"
        )
    if metric == "dot":
        scores = vectors @ query
    elif metric == "cosine":
        qn = np.linalg.norm(query)
        vn = np.linalg.norm(vectors, axis=1)
        denom = vn * qn
        scores = np.divide(vectors @ query, denom, out=np.zeros(len(ids)), where=denom > 0)
    else:
        raise ValidationError(f"unknown metric {metric!r}")
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    top = order[:n]
    return RankedResult([(ids[i], float(scores[i])) for i in top], query_echo)


def _beer_ordinal(model: EmbeddingModel, beer_id: str) -> int:
    try:
        return model.beer_vocab.index[beer_id]
    except KeyError:
        raise NotFoundError(f"unknown beer {beer_id!r}") from None


def _flavor_ordinal(model: EmbeddingModel, tag: str) -> int:
    try:
        return model.flavor_vocab.index[tag]
    except KeyError:
        raise NotFoundError(f"unknown flavor {tag!r}") from None


def _rank_beers(
    model: EmbeddingModel,
    query: np.ndarray,
    n: int,
    exclude: set[str],
    query_echo: str,
    metric: str,
) -> RankedResult:
    ids = []
    rows = []
    for i, beer_id in enumerate(model.beer_vocab.beers):
        if beer_id not in exclude:
            ids.append(beer_id)
            rows.append(i)
    return rank_by_dot(ids, model.beer_matrix[rows], query, n, query_echo, metric)


def similar_beers(model: EmbeddingModel, beer_id: str, n: int, metric: str = "dot") -> RankedResult:
    """Beers closest to the query beer; the query never appears in results."""
    b = _beer_ordinal(model, beer_id)
    return _rank_beers(
        model, model.beer_matrix[b], n, {beer_id},
        f"similar_beers({beer_id!r}, n={n})", metric,
    )


def recommend_from_favorites(
    model: EmbeddingModel,
    favorite_ids: Sequence[str],
    n: int,
    aggregate: str = "mean",
    metric: str = "dot",
) -> RankedResult:
    """Rank non-favorite beers by aggregated similarity to the favorites."""
    if not favorite_ids:
        raise ValidationError("favorites list is empty")
    if aggregate not in ("mean", "max"):
        raise ValidationError(f"aggregate must be 'mean' or 'max', got {aggregate!r}")
    fav_rows = np.stack([model.beer_matrix[_beer_ordinal(model, f)] for f in favorite_ids])

    exclude = set(favorite_ids)
    ids = []
    rows = []
    for i, beer_id in enumerate(model.beer_vocab.beers):
        if beer_id not in exclude:
            ids.append(beer_id)
            rows.append(i)
    if not ids:
        raise ValidationError("every beer is a favorite; nothing to recommend")
    candidates = model.beer_matrix[rows]
    if metric == "cosine":
        sims = _unit_rows(candidates) @ _unit_rows(fav_rows).T
    elif metric == "dot":
        sims = candidates @ fav_rows.T
    else:
        raise ValidationError(f"unknown metric {metric!r}")
    scores = sims.mean(axis=1) if aggregate == "mean" else sims.max(axis=1)
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))[:n]
    echo = f"recommend_from_favorites({list(favorite_ids)!r}, n={n}, aggregate={aggregate!r})"
    return RankedResult([(ids[i], float(scores[i])) for i in order], echo)


def profile_search(
    model: EmbeddingModel,
    profile: Sequence[FlavorWeight | tuple[str, float]],
    n: int,
    metric: str = "dot",
) -> RankedResult:
    """Rank all beers against a weighted combination of flavor vectors."""
    if not profile:
        raise ValidationError("flavor profile is empty")
    weights = [fw if isinstance(fw, FlavorWeight) else FlavorWeight(*fw) for fw in profile]
    total = sum(fw.weight for fw in weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError(f"flavor weights must sum to 1, got sum {total}")
    query = np.zeros(model.k)
    for fw in weights:
        query += fw.weight * model.flavor_matrix[_flavor_ordinal(model, fw.tag)]
    echo = "profile_search({%s}, n=%d)" % (
        ", ".join(f"{fw.tag!r}: {fw.weight}" for fw in weights), n)
    return _rank_beers(model, query, n, set(), echo, metric)


def describe_beer(
    model: EmbeddingModel,
    beer_id: str,
    n: int = DESCRIBE_DEFAULT_N,
    metric: str = "dot",
) -> RankedResult:
    """The beer's most prevalent flavors: flavor rows ranked against its row."""
    b = _beer_ordinal(model, beer_id)
    return rank_by_dot(
        model.flavor_vocab.tags, model.flavor_matrix, model.beer_matrix[b], n,
        f"describe_beer({beer_id!r}, n={n})", metric,
    )


def flavor_arithmetic(
    model: EmbeddingModel,
    base_beer: str,
    minus_tags: Sequence[str],
    plus_tags: Sequence[str],
    n: int,
    metric: str = "dot",
) -> RankedResult:
    """Rank beers against base - sum(minus flavors) + sum(plus flavors)."""
    b = _beer_ordinal(model, base_beer)
    query = model.beer_matrix[b].copy()
    for tag in minus_tags:
        query -= model.flavor_matrix[_flavor_ordinal(model, tag)]
    for tag in plus_tags:
        query += model.flavor_matrix[_flavor_ordinal(model, tag)]
    echo = (
        f"flavor_arithmetic({base_beer!r}, minus={list(minus_tags)!r}, "
        f"plus={list(plus_tags)!r}, n={n})"
    )
    return _rank_beers(model, query, n, {base_beer}, echo, metric)
