"""Flavor embeddings for beers, learned from check-in tag data.

Train a skip-gram-style model over (beer, flavor) pairs, then query it:
similar beers, weighted flavor profiles, per-beer flavor descriptions,
flavor arithmetic, and a PCA count-matrix baseline for comparison.
"""

from .errors import (
    BrewvecError,
    DataError,
    FormatError,
    NotFoundError,
    ParseError,
    TrainingError,
    ValidationError,
)
from .ingest import (
    CheckIn,
    CountMatrix,
    Dataset,
    SyntheticSpec,
    build_count_matrix,
    build_dataset,
    generate_synthetic,
    load_checkins,
    parse_checkins,
    write_checkins,
)
from .model import (
    BeerVocab,
    EmbeddingModel,
    FlavorVocab,
    Vocab,
    corpus_nll,
    flavor_distribution,
    score,
)
from .pca import PcaModel, fit_pca, jacobi_eigh, pca_beer_vectors, project_flavors_2d, transform
from .retrieval import (
    FlavorWeight,
    RankedResult,
    describe_beer,
    flavor_arithmetic,
    profile_search,
    rank_by_dot,
    recommend_from_favorites,
    similar_beers,
)
from .store import Aggregates, load_model, save_model
from .training import AdamState, Gradients, TrainConfig, TrainReport, adam_step, batch_gradient, init_model, train

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "Aggregates",
    "BeerVocab",
    "BrewvecError",
    "CheckIn",
    "CountMatrix",
    "DataError",
    "Dataset",
    "EmbeddingModel",
    "FlavorVocab",
    "FlavorWeight",
    "FormatError",
    "Gradients",
    "NotFoundError",
    "ParseError",
    "PcaModel",
    "RankedResult",
    "SyntheticSpec",
    "TrainConfig",
    "TrainReport",
    "TrainingError",
    "ValidationError",
    "Vocab",
    "adam_step",
    "batch_gradient",
    "build_count_matrix",
    "build_dataset",
    "corpus_nll",
    "describe_beer",
    "flavor_distribution",
    "fit_pca",
    "flavor_arithmetic",
    "generate_synthetic",
    "init_model",
    "jacobi_eigh",
    "load_checkins",
    "load_model",
    "parse_checkins",
    "pca_beer_vectors",
    "profile_search",
    "project_flavors_2d",
    "rank_by_dot",
    "recommend_from_favorites",
    "save_model",
    "score",
    "similar_beers",
    "train",
    "transform",
    "write_checkins",
]
