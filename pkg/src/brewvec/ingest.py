"""Check-in parsing, dataset assembly, count matrix, synthetic corpora.

Check-in files are UTF-8 with one JSON object per line: required keys
beer_id (string) and flavors (array of strings), optional rating (number
in [0, 5]), optional style and brewery (ignored here but tolerated).
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DataError, ParseError, ValidationError
from .model import BeerVocab, CheckIn, FlavorVocab

log = logging.getLogger(__name__)


@dataclass
class Dataset:
    """Vocabularies, retained check-ins, flattened training pairs, aggregates.

    pairs is a (P, 2) int64 array of (beer ordinal, flavor ordinal), one row
    per tag occurrence; duplicate tags inside a check-in stay duplicated.
    """

    beer_vocab: BeerVocab
    flavor_vocab: FlavorVocab
    checkins: list[CheckIn]
    pairs: np.ndarray
    mean_rating: dict[str, float]
    checkin_count: dict[str, int]


@dataclass
class CountMatrix:
    """Per-beer counts of check-ins containing each tag (set membership)."""

    counts: np.ndarray
    beer_vocab: BeerVocab
    flavor_vocab: FlavorVocab


@dataclass(frozen=True)
class SyntheticSpec:
    """Shape of a generated corpus with known cluster ground truth."""

    n_clusters: int
    beers_per_cluster: int
    flavors_per_cluster: int
    checkins_per_beer: int
    tags_per_checkin: int
    noise_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("n_clusters", "beers_per_cluster", "flavors_per_cluster",
                     "checkins_per_beer", "tags_per_checkin"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")
        if not 0.0 <= self.noise_rate < 1.0:
            raise ValidationError(f"noise_rate {self.noise_rate} outside [0, 1)")
        if self.tags_per_checkin > self.flavors_per_cluster:
            raise ValidationError(
                f"tags_per_checkin ({self.tags_per_checkin}) exceeds "
                f"flavors_per_cluster ({self.flavors_per_cluster})"
            )


def parse_checkins(lines: Iterable[str]) -> list[CheckIn]:
    """Parse line-delimited JSON check-ins, keeping file order.

    Records with an empty flavor list are dropped; one warning reporting the
    drop count is logged at the end.  Malformed lines raise ParseError with
    the 1-based line number; an out-of-range rating raises ValidationError.
    """
    checkins: list[CheckIn] = []
    dropped = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise ParseError(lineno, "record is not a JSON object")
        beer_id = record.get("beer_id")
        flavors = record.get("flavors")
        if not isinstance(beer_id, str) or not beer_id:
            raise ParseError(lineno, "missing or invalid beer_id")
        if not isinstance(flavors, list) or not all(isinstance(f, str) for f in flavors):
            raise ParseError(lineno, "missing or invalid flavors array")
        rating = record.get("rating")
        if rating is not None and not isinstance(rating, (int, float)):
            raise ParseError(lineno, "rating is not a number")
        if rating is not None and not 0.0 <= rating <= 5.0:
            raise ValidationError(f"line {lineno}: rating {rating} outside [0, 5]")
        if len(flavors) == 0:
            dropped += 1
            continue
        checkins.append(CheckIn(beer_id, tuple(flavors), None if rating is None else float(rating)))
    if dropped:
        log.warning("dropped %d check-ins with empty flavor lists", dropped)
    return checkins


def load_checkins(path: str | Path) -> list[CheckIn]:
    """Read a check-in file from disk."""
    with open(path, encoding="utf-8") as handle:
        return parse_checkins(handle)


def build_dataset(
    checkins: list[CheckIn],
    min_checkins: int = 1,
    allowed_flavors: set[str] | None = None,
) -> Dataset:
    """Assemble vocabularies, training pairs, and per-beer aggregates.

    Beers seen in fewer than min_checkins check-ins are removed along with
    their check-ins; vocabularies are ordered by first appearance in the
    retained sequence.  When allowed_flavors is given, tags outside it are
    dropped (with a counted warning) and check-ins left empty disappear.
    """
    if not checkins:
        raise DataError("cannot build a dataset from zero check-ins")

    if allowed_flavors is not None:
        filtered = []
        unknown = 0
        for ci in checkins:
            kept = tuple(f for f in ci.flavors if f in allowed_flavors)
            unknown += len(ci.flavors) - len(kept)
            if kept:
                filtered.append(CheckIn(ci.beer_id, kept, ci.rating))
        if unknown:
            log.warning("dropped %d tags outside the fixed flavor vocabulary", unknown)
        checkins = filtered
        if not checkins:
            raise DataError("no check-ins remain after flavor-vocabulary filtering")

    counts: dict[str, int] = {}
    for ci in checkins:
        counts[ci.beer_id] = counts.get(ci.beer_id, 0) + 1
    retained = [ci for ci in checkins if counts[ci.beer_id] >= min_checkins]
    if not retained:
        raise DataError(
            f"no beer has at least {min_checkins} check-ins; nothing to train on"
        )

    beer_ids: list[str] = []
    tags: list[str] = []
    seen_beers: set[str] = set()
    seen_tags: set[str] = set()
    for ci in retained:
        if ci.beer_id not in seen_beers:
            seen_beers.add(ci.beer_id)
            beer_ids.append(ci.beer_id)
        for tag in ci.flavors:
            if tag not in seen_tags:
                seen_tags.add(tag)
                tags.append(tag)
    beer_vocab = BeerVocab(beer_ids)
    flavor_vocab = FlavorVocab(tags)

    pair_rows = []
    rating_sums: dict[str, float] = {}
    rating_counts: dict[str, int] = {}
    checkin_count = {b: 0 for b in beer_ids}
    for ci in retained:
        b = beer_vocab.index[ci.beer_id]
        checkin_count[ci.beer_id] += 1
        for tag in ci.flavors:
            pair_rows.append((b, flavor_vocab.index[tag]))
        if ci.rating is not None:
            rating_sums[ci.beer_id] = rating_sums.get(ci.beer_id, 0.0) + ci.rating
            rating_counts[ci.beer_id] = rating_counts.get(ci.beer_id, 0) + 1
    mean_rating = {b: rating_sums[b] / rating_counts[b] for b in rating_sums}
    pairs = np.array(pair_rows, dtype=np.int64).reshape(-1, 2)

    return Dataset(beer_vocab, flavor_vocab, retained, pairs, mean_rating, checkin_count)


def build_count_matrix(dataset: Dataset) -> CountMatrix:
    """Count, per beer, how many check-ins contain each tag.

    Membership semantics: a tag duplicated inside one check-in contributes 1.
    """
    counts = np.zeros((len(dataset.beer_vocab), len(dataset.flavor_vocab)), dtype=np.int64)
    for ci in dataset.checkins:
        b = dataset.beer_vocab.index[ci.beer_id]
        for tag in set(ci.flavors):
            counts[b, dataset.flavor_vocab.index[tag]] += 1
    return CountMatrix(counts, dataset.beer_vocab, dataset.flavor_vocab)


def _quantize_rating(value: float) -> float:
    """Snap to the quarter-point grid check-in apps use, clipped to [0, 5]."""
    return min(5.0, max(0.0, round(value * 4.0) / 4.0))


def generate_synthetic(spec: SyntheticSpec) -> tuple[Dataset, dict[str, set[str]]]:
    """Generate a clustered corpus with known per-beer flavor pools.

    Each cluster owns a disjoint pool of flavors_per_cluster tags; every
    check-in of a beer draws tags_per_checkin distinct tags from its
    cluster's pool, then each drawn tag is independently replaced by a
    uniform out-of-cluster tag with probability noise_rate.  Deterministic
    for a fixed seed.  Returns the dataset and the beer -> pool map.
    """
    rng = np.random.default_rng(spec.seed)
    pools = [
        [f"flavor_{c:02d}_{j:02d}" for j in range(spec.flavors_per_cluster)]
        for c in range(spec.n_clusters)
    ]
    all_tags = [tag for pool in pools for tag in pool]

    checkins: list[CheckIn] = []
    ground_truth: dict[str, set[str]] = {}
    for c, pool in enumerate(pools):
        out_of_cluster = [t for t in all_tags if t not in pool]
        for b in range(spec.beers_per_cluster):
            beer_id = f"brewery{c:02d}/beer{b:02d}"
            ground_truth[beer_id] = set(pool)
            base_quality = rng.uniform(2.5, 4.75)
            for _ in range(spec.checkins_per_beer):
                drawn = list(rng.choice(pool, size=spec.tags_per_checkin, replace=False))
                if spec.noise_rate > 0.0 and out_of_cluster:
                    for i in range(len(drawn)):
                        if rng.random() < spec.noise_rate:
                            drawn[i] = out_of_cluster[rng.integers(len(out_of_cluster))]
                rating = _quantize_rating(base_quality + rng.normal(0.0, 0.3))
                checkins.append(CheckIn(beer_id, tuple(drawn), rating))

    return build_dataset(checkins, min_checkins=1), ground_truth


def write_checkins(checkins: list[CheckIn], path: str | Path) -> None:
    """Write check-ins in the line-delimited JSON interchange format."""
    with open(path, "w", encoding="utf-8") as handle:
        for ci in checkins:
            record: dict = {"beer_id": ci.beer_id, "flavors": list(ci.flavors)}
            if ci.rating is not None:
                record["rating"] = ci.rating
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
