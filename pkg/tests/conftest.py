import numpy as np
import pytest

from brewvec.ingest import SyntheticSpec, generate_synthetic
from brewvec.model import BeerVocab, EmbeddingModel, FlavorVocab
from brewvec.training import TrainConfig, train

# Clustered corpus + full training run shared by the efficacy/baseline checks.
CLUSTERED_SPEC = SyntheticSpec(
    n_clusters=3,
    beers_per_cluster=10,
    flavors_per_cluster=5,
    checkins_per_beer=50,
    tags_per_checkin=3,
    noise_rate=0.1,
    seed=7,
)


def make_model(beers, flavors, beer_rows, flavor_rows) -> EmbeddingModel:
    return EmbeddingModel(
        beer_matrix=np.asarray(beer_rows, dtype=np.float64),
        flavor_matrix=np.asarray(flavor_rows, dtype=np.float64),
        beer_vocab=BeerVocab(beers),
        flavor_vocab=FlavorVocab(flavors),
    )


def random_model(rng, n_beers, n_flavors, dim, scale=0.5) -> EmbeddingModel:
    return make_model(
        [f"beer{i}" for i in range(n_beers)],
        [f"tag{i}" for i in range(n_flavors)],
        rng.normal(scale=scale, size=(n_beers, dim)),
        rng.normal(scale=scale, size=(n_flavors, dim)),
    )


@pytest.fixture(scope="session")
def clustered_corpus():
    dataset, truth = generate_synthetic(CLUSTERED_SPEC)
    return dataset, truth


@pytest.fixture(scope="session")
def trained_clustered(clustered_corpus):
    dataset, truth = clustered_corpus
    report = train(dataset, TrainConfig(dim=5, learning_rate=0.001,
                                        batch_size=128, max_epochs=300, seed=42))
    return dataset, truth, report
