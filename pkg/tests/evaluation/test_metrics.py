"""Tests for generation metrics."""
import numpy as np
import pytest

from app.core.errors import ContractViolationError
from app.corpus.generators import gen_box
from app.evaluation.metrics import (
    chamfer_distance,
    compute_cov_mmd_jsd,
    coverage_and_mmd,
    evaluate_sets,
    jensen_shannon_divergence,
    novel_unique,
    occupancy_histogram,
    pairwise_chamfer,
    solid_hash,
)

from tests.fixtures import box_graph, cylinder_graph, random_cloud


class TestChamfer:
    """Tests for chamfer distances."""

    def test_single_points(self):
        """Test two points one unit apart cost one in each direction."""
        assert chamfer_distance(np.array([[0.0, 0.0, 0.0]]), np.array([[1.0, 0.0, 0.0]])) == pytest.approx(2.0)

    def test_identical_sets(self):
        """Test a set has zero distance to itself."""
        cloud = random_cloud(50, seed=0)
        assert chamfer_distance(cloud, cloud) == 0.0

    def test_symmetric(self):
        """Test swapping the arguments does not change the value."""
        a, b = random_cloud(40, seed=1), random_cloud(60, seed=2)
        assert chamfer_distance(a, b) == pytest.approx(chamfer_distance(b, a))

    def test_matches_brute_force(self):
        """Test nearest-neighbour queries agree with the full distance matrix."""
        a, b = random_cloud(70, seed=3), random_cloud(45, seed=4)
        squared = ((a[:, np.newaxis, :] - b[np.newaxis, :, :]) ** 2).sum(axis=-1)
        expected = squared.min(axis=1).mean() + squared.min(axis=0).mean()
        assert chamfer_distance(a, b) == pytest.approx(expected, rel=1e-12)

    def test_empty_set_rejected(self):
        """Test an empty point set is rejected."""
        with pytest.raises(ContractViolationError):
            chamfer_distance(np.zeros((0, 3)), np.zeros((3, 3)))

    def test_dimension_mismatch(self):
        """Test sets of different dimensionality are rejected."""
        with pytest.raises(ContractViolationError):
            chamfer_distance(np.zeros((3, 3)), np.zeros((3, 2)))

    def test_pairwise_workers_agree(self):
        """Test the threaded matrix equals the serial one."""
        gen = [random_cloud(30, seed=s) for s in range(3)]
        ref = [random_cloud(30, seed=s) for s in range(3, 5)]
        serial = pairwise_chamfer(gen, ref)
        threaded = pairwise_chamfer(gen, ref, workers=3)
        assert serial.shape == (3, 2)
        assert np.array_equal(serial, threaded)


class TestCoverageAndMmd:
    """Tests for COV and MMD on a distance matrix."""

    def test_one_reference_uncovered(self):
        """Test both generated sets matching the same reference."""
        cov, mmd = coverage_and_mmd(np.array([[1.0, 5.0], [2.0, 3.0]]))
        assert cov == pytest.approx(50.0)
        assert mmd == pytest.approx(2.0)

    def test_ties_cover_every_minimum(self):
        """Test tied row minima cover all tied references."""
        cov, _ = coverage_and_mmd(np.array([[1.0, 1.0]]))
        assert cov == pytest.approx(100.0)

    def test_identical_collections(self):
        """Test a collection compared with itself is fully covered at zero cost."""
        clouds = [random_cloud(40, seed=s, scale=0.9) for s in range(3)]
        cov, mmd, jsd = compute_cov_mmd_jsd(clouds, clouds, resolution=8)
        assert cov == pytest.approx(100.0)
        assert mmd == pytest.approx(0.0)
        assert jsd == pytest.approx(0.0, abs=1e-12)

    def test_empty_collection(self):
        """Test an empty collection is refused."""
        with pytest.raises(ContractViolationError):
            compute_cov_mmd_jsd([], [random_cloud(5, seed=0)])


class TestJensenShannon:
    """Tests for the occupancy JSD."""

    def test_disjoint_histograms(self):
        """Test disjoint support gives one bit."""
        assert jensen_shannon_divergence(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(1.0)

    def test_identical_histograms(self):
        """Test equal histograms give zero."""
        hist = np.array([3.0, 1.0, 0.0, 4.0])
        assert jensen_shannon_divergence(hist, hist * 2.0) == pytest.approx(0.0, abs=1e-12)

    def test_negative_counts(self):
        """Test negative entries are rejected."""
        with pytest.raises(ContractViolationError):
            jensen_shannon_divergence(np.array([1.0, -1.0]), np.array([1.0, 1.0]))

    def test_histogram_clips_outliers(self):
        """Test points outside the cube land in boundary cells."""
        counts = occupancy_histogram([np.array([[5.0, 5.0, 5.0], [-5.0, -5.0, -5.0]])], resolution=4)
        assert counts.sum() == 2
        assert counts[0] == 1
        assert counts[-1] == 1


class TestNovelUnique:
    """Tests for hashing, novelty and uniqueness."""

    def test_scaled_copy_has_same_hash(self):
        """Test the hash ignores placement and uniform scale."""
        moved = gen_box(size=(2.0, 2.0, 2.0), center=(5.0, -3.0, 1.0)).to_graph()
        assert solid_hash(moved) == solid_hash(box_graph())

    def test_different_shapes_differ(self):
        """Test a stretched box hashes differently."""
        assert solid_hash(box_graph(size=(1.0, 1.0, 2.0))) != solid_hash(box_graph())

    def test_duplicate_and_training_copy(self):
        """Test one duplicated pair and one memorized solid."""
        box = box_graph()
        novel, unique = novel_unique([box, box, cylinder_graph()], [box])
        assert novel == pytest.approx(100.0 / 3.0)
        assert unique == pytest.approx(200.0 / 3.0)


class TestEvaluateSets:
    """Tests for the full metric report."""

    def test_small_collection(self):
        """Test valid, novel and unique over generator output."""
        solids = [box_graph(), cylinder_graph(normalized=False)]
        report = evaluate_sets(solids, solids, n_points=200, resolution=8, seed=0)
        assert report.valid == pytest.approx(100.0)
        assert report.novel == pytest.approx(0.0)
        assert report.unique == pytest.approx(100.0)
        assert report.generated == report.reference == 2
        assert 50.0 <= report.cov <= 100.0
        assert report.mmd >= 0.0
        assert report.jsd >= 0.0

    def test_seed_is_deterministic(self):
        """Test the same seed yields the same report."""
        solids = [box_graph(), box_graph(size=(2.0, 1.0, 1.0))]
        first = evaluate_sets(solids, solids[:1], n_points=100, resolution=8, seed=4)
        second = evaluate_sets(solids, solids[:1], n_points=100, resolution=8, seed=4)
        assert first == second

    def test_training_set_decides_novelty(self):
        """Test novelty is measured against the training set when given."""
        report = evaluate_sets(
            [box_graph()], [cylinder_graph()], train=[cylinder_graph()],
            n_points=100, resolution=8,
        )
        assert report.novel == pytest.approx(100.0)
        assert report.cov == pytest.approx(100.0)
