"""Single-file model container: JSON header plus packed float payload.

Layout, byte exact:
    bytes 0..3    magic "B2V1"
    bytes 4..7    header length, little-endian uint32
    header        UTF-8 JSON: version, k, beer_count, flavor_count,
                  beer_ids, flavor_tags, mean_ratings, checkin_counts
    payload       beer matrix then flavor matrix, row-major,
                  little-endian float32

Matrices live as float64 in memory and float32 on disk, so a round trip
is exact only to single precision (relative error <= 6e-8).
"""

import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError
from .ingest import Dataset
from .model import BeerVocab, EmbeddingModel, FlavorVocab

MAGIC = b"B2V1"
VERSION = 1


@dataclass
class Aggregates:
    """Per-beer check-in statistics persisted alongside the matrices."""

    mean_ratings: dict[str, float] = field(default_factory=dict)
    checkin_counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_dataset(cls, dataset: Dataset) -> "Aggregates":
        return cls(dict(dataset.mean_rating), dict(dataset.checkin_count))


def save_model(model: EmbeddingModel, aggregates: Aggregates, path: str | Path) -> None:
    """Write the container atomically (temp file in place, then rename)."""
    beer_ids = model.beer_vocab.beers
    header = {
        "version": VERSION,
        "k": model.k,
        "beer_count": len(model.beer_vocab),
        "flavor_count": len(model.flavor_vocab),
        "beer_ids": beer_ids,
        "flavor_tags": model.flavor_vocab.tags,
        "mean_ratings": {
            b: aggregates.mean_ratings[b] for b in beer_ids if b in aggregates.mean_ratings
        },
        "checkin_counts": {
            b: aggregates.checkin_counts[b] for b in beer_ids if b in aggregates.checkin_counts
        },
    }
    header_bytes = json.dumps(header, ensure_ascii=True, separators=(",", ":")).encode("utf-8")
    payload = (
        model.beer_matrix.astype("<f4").tobytes()
        + model.flavor_matrix.astype("<f4").tobytes()
    )

    path = Path(path)
    tmp_fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(tmp_fd, "wb") as handle:
            handle.write(MAGIC)
            handle.write(struct.pack("<I", len(header_bytes)))
            handle.write(header_bytes)
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def load_model(path: str | Path) -> tuple[EmbeddingModel, Aggregates]:
    """Read and validate a container; every model invariant is re-checked."""
    with open(path, "rb") as handle:
        blob = handle.read()

    if len(blob) < 8 or blob[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic (expected {MAGIC!r})")
    (header_len,) = struct.unpack("<I", blob[4:8])
    if len(blob) < 8 + header_len:
        raise FormatError(f"{path}: truncated header")
    try:
        header = json.loads(blob[8 : 8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: unreadable header ({exc})") from exc
    if header.get("version") != VERSION:
        raise FormatError(f"{path}: unsupported version {header.get('version')!r}")

    k = header["k"]
    beer_count = header["beer_count"]
    flavor_count = header["flavor_count"]
    beer_ids = header["beer_ids"]
    flavor_tags = header["flavor_tags"]
    if len(beer_ids) != beer_count or len(flavor_tags) != flavor_count:
        raise FormatError(
            f"{path}: vocabulary lengths do not match declared counts "
            f"({len(beer_ids)} vs {beer_count}, {len(flavor_tags)} vs {flavor_count})"
        )

    expected = 4 * k * (beer_count + flavor_count)
    actual = len(blob) - 8 - header_len
    if actual != expected:
        raise FormatError(
            f"{path}: payload length mismatch, expected {expected} bytes, got {actual}"
        )
    floats = np.frombuffer(blob, dtype="<f4", offset=8 + header_len)
    beer_matrix = floats[: beer_count * k].reshape(beer_count, k).astype(np.float64)
    flavor_matrix = floats[beer_count * k :].reshape(flavor_count, k).astype(np.float64)

    model = EmbeddingModel(beer_matrix, flavor_matrix, BeerVocab(beer_ids), FlavorVocab(flavor_tags))
    aggregates = Aggregates(
        {b: float(r) for b, r in header.get("mean_ratings", {}).items()},
        {b: int(c) for b, c in header.get("checkin_counts", {}).items()},
    )
    return model, aggregates
