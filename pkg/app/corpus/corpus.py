"""
Stratified synthetic corpus: one JSON document per solid plus a manifest.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from app.core.errors import GeneratorError
from app.core.logging import log_with_extra
from app.corpus.generators import gen_box, gen_cylinder, gen_plate_with_holes, gen_prism
from app.evaluation.validity import DEFAULT_GAP_TOLERANCE, check_validity
from app.schema.document import BRepDocument, load_document, save_document
from app.tokens.vocabulary import Complexity

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.csv"
STRATA = (Complexity.EASY, Complexity.MEDIUM, Complexity.HARD)

# inclusive ranges of prism sides / plate holes per class
_PRISM_SIDES = {
    Complexity.EASY: (3, 22),
    Complexity.MEDIUM: (23, 48),
    Complexity.HARD: (49, 98),
}
_PLATE_HOLES = {
    Complexity.EASY: (1, 9),
    Complexity.MEDIUM: (10, 22),
    Complexity.HARD: (23, 47),
}


def random_solid(complexity: Complexity, rng: np.random.Generator) -> Tuple[str, BRepDocument]:
    """Draw one solid whose face count falls in ``complexity``."""
    if complexity is Complexity.RANDOM:
        complexity = STRATA[int(rng.integers(len(STRATA)))]
    kinds = ["prism", "plate"]
    if complexity is Complexity.EASY:
        kinds += ["box", "cylinder"]
    kind = kinds[int(rng.integers(len(kinds)))]
    center = tuple(rng.uniform(-1.0, 1.0, size=3))

    if kind == "box":
        return kind, gen_box(size=tuple(rng.uniform(0.5, 2.0, size=3)), center=center)
    if kind == "cylinder":
        return kind, gen_cylinder(radius=rng.uniform(0.3, 1.0), height=rng.uniform(0.5, 2.0), base=center)
    if kind == "prism":
        lo, hi = _PRISM_SIDES[complexity]
        sides = int(rng.integers(lo, hi + 1))
        phase = 0.0 if rng.random() < 0.5 else float(rng.uniform(0.0, 2.0 * np.pi))
        return kind, gen_prism(
            sides=sides,
            radius=rng.uniform(0.5, 2.0),
            height=rng.uniform(0.2, 2.0),
            phase=phase,
            center=center,
        )
    lo, hi = _PLATE_HOLES[complexity]
    count = int(rng.integers(lo, hi + 1))
    return kind, gen_plate_with_holes(count=count, seed=int(rng.integers(2**32)))


def _build_one(
    index: int,
    complexity: Complexity,
    seed: np.random.SeedSequence,
    out_dir: Path,
    gap_tol: float,
) -> Dict[str, object]:
    rng = np.random.default_rng(seed)
    kind, document = random_solid(complexity, rng)
    graph = document.to_graph()
    report = check_validity(graph, gap_tol)
    if not report.is_manifold_closed:
        raise GeneratorError(
            "generated solid failed the validity check",
            index=index,
            generator=kind,
            violations=report.violation_count,
        )
    name = f"solid_{index:05d}.json"
    save_document(document, out_dir / name)
    labels = document.labels
    return {
        "file": name,
        "generator": kind,
        "faces": graph.num_faces,
        "edges": graph.num_edges,
        "complexity": labels.complexity,
        "bolt_holes": len(labels.bolt_holes),
        "hull_planes": len(labels.hull_planes),
    }


def gen_corpus(
    out_dir: Union[str, Path],
    count: int,
    seed: int = 0,
    workers: int = 1,
    gap_tol: float = DEFAULT_GAP_TOLERANCE,
) -> pd.DataFrame:
    """Write ``count`` validated solids cycling through easy, medium and hard.

    Solid ``i`` depends only on ``seed`` and ``i``, so the output does not
    depend on ``workers``.
    """
    if count < 1:
        raise GeneratorError("corpus size must be positive", count=count)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    children = np.random.SeedSequence(seed).spawn(count)
    jobs = [(i, STRATA[i % len(STRATA)], children[i], out_dir, gap_tol) for i in range(count)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows: List[Dict[str, object]] = list(pool.map(lambda job: _build_one(*job), jobs))
    else:
        rows = [_build_one(*job) for job in jobs]

    manifest = pd.DataFrame(rows)
    manifest.to_csv(out_dir / MANIFEST_NAME, index=False)
    log_with_extra(
        logger,
        "info",
        "corpus written",
        path=str(out_dir),
        solids=count,
        per_class={k: int(v) for k, v in manifest["complexity"].value_counts().items()},
    )
    return manifest


def load_corpus(directory: Union[str, Path]) -> List[Tuple[Path, BRepDocument]]:
    """All documents of a directory, sorted by path."""
    paths = sorted(Path(directory).glob("*.json"))
    return [(path, load_document(path)) for path in paths]
