import numpy as np
import pytest

from brewvec.errors import DataError, ValidationError
from brewvec.ingest import CheckIn, SyntheticSpec, build_count_matrix, build_dataset, generate_synthetic
from brewvec.pca import fit_pca, jacobi_eigh, pca_beer_vectors, project_flavors_2d, transform
from brewvec.training import TrainConfig, train

from conftest import random_model


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2.0


def assert_eigh_matches(matrix, atol=1e-6):
    """Compare jacobi_eigh against numpy's dense eigensolver, up to sign."""
    vals, vecs = jacobi_eigh(matrix)
    ref_vals, ref_vecs = np.linalg.eigh(matrix)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    assert vals == pytest.approx(ref_vals, abs=atol)
    for j in range(matrix.shape[0]):
        v, u = vecs[:, j], ref_vecs[:, j]
        if np.dot(v, u) < 0:
            v = -v
        assert v == pytest.approx(u, abs=atol)
    # residual check is oracle-independent: A v = λ v
    assert matrix @ vecs == pytest.approx(vecs * vals, abs=1e-8)


class TestJacobiEigh:
    def test_oracle_up_to_20x20(self):
        rng = np.random.default_rng(42)
        for n in [1, 2, 3, 5, 8, 13, 20]:
            assert_eigh_matches(random_symmetric(rng, n))

    def test_diagonal_matrix(self):
        a = np.diag([3.0, -1.0, 2.0])
        vals, vecs = jacobi_eigh(a)
        assert np.sort(vals) == pytest.approx([-1.0, 2.0, 3.0], abs=1e-12)
        for val, col in zip(vals, vecs.T):
            assert a @ col == pytest.approx(val * col, abs=1e-12)

    def test_zero_matrix(self):
        vals, vecs = jacobi_eigh(np.zeros((4, 4)))
        assert vals == pytest.approx(np.zeros(4), abs=0.0)
        assert vecs == pytest.approx(np.eye(4), abs=0.0)

    def test_scaled_spectra(self):
        rng = np.random.default_rng(7)
        a = random_symmetric(rng, 6)
        vals_a, _ = jacobi_eigh(a)
        vals_b, _ = jacobi_eigh(10.0 * a)
        assert np.sort(vals_b) == pytest.approx(10.0 * np.sort(vals_a), abs=1e-9)


class TestFitPca:
    def test_hand_example(self):
        model = fit_pca(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]]), c=1)
        assert model.components == pytest.approx(np.array([[1.0, 0.0]]), abs=1e-10)
        assert model.explained_variance == pytest.approx([1.0], abs=1e-10)

    def test_full_basis_reconstruction(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(9, 4))
        model = fit_pca(data, c=4)
        centered = data - model.means
        lifted = (centered @ model.components.T) @ model.components
        assert lifted == pytest.approx(centered, abs=1e-8)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(5)
        data = rng.normal(size=(8, 6))
        model = fit_pca(data, c=3)
        cov = np.cov(data, rowvar=False, ddof=1)
        ref_vals, ref_vecs = np.linalg.eigh(cov)
        ref_vals, ref_vecs = ref_vals[::-1], ref_vecs[:, ::-1]
        assert model.explained_variance == pytest.approx(ref_vals[:3], abs=1e-8)
        for j in range(3):
            v, u = model.components[j], ref_vecs[:, j]
            if np.dot(v, u) < 0:
                u = -u
            assert v == pytest.approx(u, abs=1e-6)

    def test_orthonormal_components(self):
        rng = np.random.default_rng(6)
        model = fit_pca(rng.normal(size=(12, 7)), c=5)
        gram = model.components @ model.components.T
        assert gram == pytest.approx(np.eye(5), abs=1e-8)

    def test_variance_non_increasing(self):
        rng = np.random.default_rng(8)
        model = fit_pca(rng.normal(size=(15, 6)), c=6 - 1)
        ev = model.explained_variance
        assert all(a >= b - 1e-12 for a, b in zip(ev, ev[1:]))

    def test_sign_convention(self):
        rng = np.random.default_rng(9)
        model = fit_pca(rng.normal(size=(10, 5)), c=3)
        for row in model.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_zero_variance_degenerate_path(self):
        model = fit_pca(np.ones((4, 3)), c=2)
        assert model.explained_variance == pytest.approx([0.0, 0.0], abs=0.0)
        for row in model.components:
            # canonical basis vectors
            assert sorted(np.abs(row)) == pytest.approx([0.0, 0.0, 1.0], abs=0.0)

    def test_c_out_of_range(self):
        data = np.random.default_rng(1).normal(size=(5, 3))
        with pytest.raises(DataError):
            fit_pca(data, c=0)
        with pytest.raises(DataError):
            fit_pca(data, c=4)  # > d
        with pytest.raises(DataError):
            fit_pca(np.zeros((3, 8)), c=3)  # > n-1

    def test_too_few_rows(self):
        with pytest.raises(DataError):
            fit_pca(np.zeros((1, 3)), c=1)


class TestTransform:
    def test_centering(self):
        rng = np.random.default_rng(10)
        data = rng.normal(loc=5.0, size=(20, 4))
        model = fit_pca(data, c=3)
        scores = transform(model, data)
        assert scores.mean(axis=0) == pytest.approx(np.zeros(3), abs=1e-10)

    def test_hand_scores(self):
        data = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]])
        model = fit_pca(data, c=1)
        scores = transform(model, data)
        assert scores.ravel() == pytest.approx([1.0, -1.0, 0.0], abs=1e-10)

    def test_score_variances_equal_explained(self):
        rng = np.random.default_rng(11)
        data = rng.normal(size=(30, 5))
        model = fit_pca(data, c=4)
        scores = transform(model, data)
        variances = scores.var(axis=0, ddof=1)
        assert variances == pytest.approx(model.explained_variance, abs=1e-8)

    def test_dimension_mismatch(self):
        model = fit_pca(np.random.default_rng(0).normal(size=(5, 3)), c=2)
        with pytest.raises(ValidationError):
            transform(model, np.zeros((2, 4)))


class TestPcaBeerVectors:
    def test_shape_and_duplicate_rows(self):
        ds, _ = generate_synthetic(SyntheticSpec(2, 5, 4, 20, 2, 0.1, seed=3))
        counts = build_count_matrix(ds)
        vectors = pca_beer_vectors(counts, c=5)
        assert vectors.shape == (10, 5)

    def test_identical_count_rows_map_identically(self):
        # Two beers whose check-ins are indistinguishable get the same vector.
        checkins = []
        for beer in ("A", "B"):
            checkins += [CheckIn(beer, ("x", "y")), CheckIn(beer, ("x",))]
        for i, beer in enumerate(("C", "D", "E", "F", "G")):
            checkins += [CheckIn(beer, ("x", "z")) for _ in range(i + 1)]
        ds = build_dataset(checkins)
        vectors = pca_beer_vectors(build_count_matrix(ds), c=2)
        a = ds.beer_vocab.ordinal("A")
        b = ds.beer_vocab.ordinal("B")
        assert vectors[a] == pytest.approx(vectors[b], abs=1e-12)

    def test_too_few_beers(self):
        ds = build_dataset([CheckIn("A", ("x",)), CheckIn("B", ("y",))])
        with pytest.raises(DataError):
            pca_beer_vectors(build_count_matrix(ds), c=5)


class TestProjectFlavors2d:
    def test_shape(self):
        rng = np.random.default_rng(14)
        model = random_model(rng, 4, 9, 5)
        coords = project_flavors_2d(model)
        assert coords.shape == (9, 2)

    def test_rotation_preserves_pairwise_distances(self):
        rng = np.random.default_rng(15)
        model = random_model(rng, 4, 10, 5)
        rotation, _ = np.linalg.qr(rng.normal(size=(5, 5)))
        rotated = random_model(rng, 4, 10, 5)
        rotated.flavor_matrix = model.flavor_matrix @ rotation
        d0 = _pairwise(project_flavors_2d(model))
        d1 = _pairwise(project_flavors_2d(rotated))
        assert d1 == pytest.approx(d0, abs=1e-8)

    def test_trained_clusters_separate(self):
        ds, truth = generate_synthetic(SyntheticSpec(2, 4, 4, 30, 2, 0.0, seed=6))
        report = train(ds, TrainConfig(dim=5, learning_rate=0.01,
                                       batch_size=32, max_epochs=150, seed=42))
        coords = project_flavors_2d(report.model)
        pools = sorted({frozenset(p) for p in truth.values()}, key=sorted)
        cluster_of = [next(i for i, p in enumerate(pools) if t in p)
                      for t in ds.flavor_vocab.tags]
        within, between = [], []
        for i in range(len(coords)):
            for j in range(i + 1, len(coords)):
                d = float(np.linalg.norm(coords[i] - coords[j]))
                (within if cluster_of[i] == cluster_of[j] else between).append(d)
        assert np.mean(within) < np.mean(between)

    def test_needs_two_dims(self):
        rng = np.random.default_rng(16)
        model = random_model(rng, 3, 6, 1)
        with pytest.raises(DataError):
            project_flavors_2d(model)


def _pairwise(points):
    n = len(points)
    return np.array([np.linalg.norm(points[i] - points[j])
                     for i in range(n) for j in range(i + 1, n)])
