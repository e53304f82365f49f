"""
Set-to-set generation metrics over sampled surface point clouds.

COV and MMD follow the lgan convention on a chamfer distance matrix
(rows are generated sets, columns reference sets). JSD compares occupancy
histograms of the two collections over a regular grid on [-1, 1]^3.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import entropy

from app.core.errors import ContractViolationError
from app.evaluation.surface import sample_surface_points
from app.evaluation.validity import DEFAULT_GAP_TOLERANCE, check_validity
from app.schema.reports import MetricsReport
from app.topology.graph import BRepGraph, normalize_graph

logger = logging.getLogger(__name__)

HASH_BITS = 4


def _as_cloud(points: np.ndarray) -> np.ndarray:
    cloud = np.asarray(points, dtype=np.float64)
    if cloud.ndim != 2 or len(cloud) == 0:
        raise ContractViolationError("point sets must be nonempty 2D arrays", shape=list(cloud.shape))
    return cloud


def _nearest_squared(points: np.ndarray, tree: cKDTree) -> np.ndarray:
    """Squared distance from every point to its nearest neighbour in ``tree``."""
    distances, _ = tree.query(points)
    return distances ** 2


def _chamfer(a: np.ndarray, tree_a: cKDTree, b: np.ndarray, tree_b: cKDTree) -> float:
    if a.shape[1] != b.shape[1]:
        raise ContractViolationError(
            "point sets must share their dimensionality",
            left=list(a.shape),
            right=list(b.shape),
        )
    return float(_nearest_squared(a, tree_b).mean() + _nearest_squared(b, tree_a).mean())


def chamfer_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric chamfer distance: mean squared nearest distance both ways."""
    a, b = _as_cloud(a), _as_cloud(b)
    return _chamfer(a, cKDTree(a), b, cKDTree(b))


def pairwise_chamfer(
    gen: Sequence[np.ndarray],
    ref: Sequence[np.ndarray],
    workers: int = 1,
) -> np.ndarray:
    """Distance matrix of shape ``(len(gen), len(ref))``; one KD-tree per cloud."""
    gen = [_as_cloud(c) for c in gen]
    ref = [_as_cloud(c) for c in ref]
    gen_trees = [cKDTree(c) for c in gen]
    ref_trees = [cKDTree(c) for c in ref]
    pairs = [(i, j) for i in range(len(gen)) for j in range(len(ref))]
    matrix = np.empty((len(gen), len(ref)))

    def compute(pair: Tuple[int, int]) -> float:
        i, j = pair
        return _chamfer(gen[i], gen_trees[i], ref[j], ref_trees[j])

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(compute, pairs))
    else:
        values = [compute(pair) for pair in pairs]
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = value
    return matrix


def coverage_and_mmd(distances: np.ndarray) -> Tuple[float, float]:
    """COV in percent and raw MMD from a gen-by-ref distance matrix.

    A reference set is covered when it attains the row minimum of at least
    one generated set; tied minima all count.
    """
    row_min = distances.min(axis=1, keepdims=True)
    covered = (distances == row_min).any(axis=0)
    cov = 100.0 * covered.sum() / distances.shape[1]
    mmd = float(distances.min(axis=0).mean())
    return float(cov), mmd


def occupancy_histogram(clouds: Sequence[np.ndarray], resolution: int) -> np.ndarray:
    """Point counts per cell of a ``resolution``^3 grid spanning [-1, 1]^3."""
    points = np.concatenate([np.asarray(c, dtype=np.float64) for c in clouds])
    edges = [np.linspace(-1.0, 1.0, resolution + 1)] * 3
    counts, _ = np.histogramdd(np.clip(points, -1.0, 1.0), bins=edges)
    return counts.ravel()


def jensen_shannon_divergence(p: np.ndarray, q: np.ndarray) -> float:
    if np.any(p < 0) or np.any(q < 0):
        raise ContractViolationError("histograms must be nonnegative")
    if len(p) != len(q):
        raise ContractViolationError("histograms must have equal size")
    p = p / p.sum()
    q = q / q.sum()
    value = entropy((p + q) / 2.0, base=2) - (entropy(p, base=2) + entropy(q, base=2)) / 2.0
    return max(float(value), 0.0)


def compute_cov_mmd_jsd(
    gen: Sequence[np.ndarray],
    ref: Sequence[np.ndarray],
    resolution: int = 32,
    workers: int = 1,
) -> Tuple[float, float, float]:
    """Return ``(cov %, mmd x 100, jsd x 100)``."""
    if not gen or not ref:
        raise ContractViolationError("generated and reference collections must be nonempty")
    dims = {np.asarray(c).shape[-1] for c in list(gen) + list(ref)}
    if len(dims) != 1:
        raise ContractViolationError("point sets have mismatched dimensionality", dims=sorted(dims))

    distances = pairwise_chamfer(gen, ref, workers=workers)
    cov, mmd = coverage_and_mmd(distances)
    jsd = jensen_shannon_divergence(
        occupancy_histogram(gen, resolution),
        occupancy_histogram(ref, resolution),
    )
    return cov, 100.0 * mmd, 100.0 * jsd


def quantize_bits(points: np.ndarray, bits: int = HASH_BITS) -> np.ndarray:
    levels = 1 << bits
    scaled = np.floor((np.clip(points, -1.0, 1.0) + 1.0) / 2.0 * levels)
    return np.minimum(levels - 1, scaled).astype(np.uint8)


def solid_hash(graph: BRepGraph, bits: int = HASH_BITS) -> str:
    """Order-independent digest of a solid after coarse quantization."""
    if graph.num_faces:
        graph, _ = normalize_graph(graph)
    faces = sorted(quantize_bits(face.grid.points, bits).tobytes() for face in graph.faces)
    digest = hashlib.sha256()
    digest.update(f"{graph.num_faces}:{graph.num_edges}".encode())
    for face in faces:
        digest.update(face)
    return digest.hexdigest()


def novel_unique(
    gen: Sequence[BRepGraph],
    train: Sequence[BRepGraph],
) -> Tuple[float, float]:
    """Return ``(novel %, unique %)``.

    Unique is the share of distinct hashes among the generated solids, so
    one duplicated pair out of n gives (n - 1) / n.
    """
    if not gen:
        raise ContractViolationError("generated collection must be nonempty")
    gen_hashes = [solid_hash(g) for g in gen]
    train_hashes = {solid_hash(g) for g in train}
    unique = 100.0 * len(set(gen_hashes)) / len(gen_hashes)
    novel = 100.0 * sum(h not in train_hashes for h in gen_hashes) / len(gen_hashes)
    return novel, unique


def sample_collection(
    graphs: Sequence[BRepGraph],
    n: int,
    seed: Optional[int],
) -> List[np.ndarray]:
    """Normalize each solid and draw ``n`` surface points with its own child seed."""
    children = np.random.SeedSequence(seed).spawn(len(graphs))
    clouds = []
    for graph, child in zip(graphs, children):
        normalized, _ = normalize_graph(graph)
        rng = np.random.default_rng(child)
        clouds.append(sample_surface_points(normalized, n, rng=rng).points)
    return clouds


def evaluate_sets(
    gen: Sequence[BRepGraph],
    ref: Sequence[BRepGraph],
    train: Optional[Sequence[BRepGraph]] = None,
    n_points: int = 2000,
    resolution: int = 32,
    seed: Optional[int] = 0,
    workers: int = 1,
    gap_tol: float = DEFAULT_GAP_TOLERANCE,
) -> MetricsReport:
    """Full metric report for a generated collection against a reference one."""
    gen_clouds = sample_collection(gen, n_points, seed)
    ref_clouds = sample_collection(ref, n_points, None if seed is None else seed + 1)
    cov, mmd, jsd = compute_cov_mmd_jsd(gen_clouds, ref_clouds, resolution, workers)
    novel, unique = novel_unique(gen, train if train is not None else ref)
    valid = 100.0 * sum(check_validity(g, gap_tol).is_manifold_closed for g in gen) / len(gen)
    logger.info(
        "metrics: cov=%.2f mmd=%.4f jsd=%.4f valid=%.1f over %d/%d solids",
        cov, mmd, jsd, valid, len(gen), len(ref),
    )
    return MetricsReport(
        cov=cov,
        mmd=mmd,
        jsd=jsd,
        novel=novel,
        unique=unique,
        valid=valid,
        generated=len(gen),
        reference=len(ref),
    )
