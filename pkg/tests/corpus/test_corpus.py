"""Tests for stratified corpus generation."""
import numpy as np
import pandas as pd
import pytest

from app.core.errors import GeneratorError
from app.corpus.corpus import MANIFEST_NAME, gen_corpus, load_corpus, random_solid
from app.tokens.vocabulary import Complexity


class TestRandomSolid:
    """Tests for random_solid."""

    @pytest.mark.parametrize("complexity", [Complexity.EASY, Complexity.MEDIUM, Complexity.HARD])
    def test_face_count_matches_class(self, complexity):
        """Test drawn solids land in the requested class."""
        rng = np.random.default_rng(5)
        for _ in range(6):
            _, document = random_solid(complexity, rng)
            assert Complexity.from_face_count(len(document.faces)) is complexity
            assert document.labels.complexity == complexity.value

    def test_random_picks_a_stratum(self):
        """Test RANDOM resolves to one of the concrete classes."""
        _, document = random_solid(Complexity.RANDOM, np.random.default_rng(0))
        assert document.labels.complexity in {"easy", "medium", "hard"}


class TestGenCorpus:
    """Tests for gen_corpus and load_corpus."""

    def test_strata_cycle(self, tmp_path):
        """Test solids cycle through easy, medium and hard."""
        manifest = gen_corpus(tmp_path, count=3, seed=1)
        assert list(manifest["complexity"]) == ["easy", "medium", "hard"]
        assert list(manifest.columns) == [
            "file", "generator", "faces", "edges", "complexity", "bolt_holes", "hull_planes",
        ]
        assert (tmp_path / MANIFEST_NAME).exists()
        on_disk = pd.read_csv(tmp_path / MANIFEST_NAME)
        assert list(on_disk["file"]) == ["solid_00000.json", "solid_00001.json", "solid_00002.json"]

    def test_workers_do_not_change_output(self, tmp_path):
        """Test threaded generation writes the same solids."""
        serial = gen_corpus(tmp_path / "serial", count=4, seed=3)
        threaded = gen_corpus(tmp_path / "threaded", count=4, seed=3, workers=2)
        pd.testing.assert_frame_equal(serial, threaded)
        for name in serial["file"]:
            assert (tmp_path / "serial" / name).read_text() == (tmp_path / "threaded" / name).read_text()

    def test_load_corpus(self, tmp_path):
        """Test documents load back sorted by file name."""
        gen_corpus(tmp_path, count=2, seed=0)
        loaded = load_corpus(tmp_path)
        assert [path.name for path, _ in loaded] == ["solid_00000.json", "solid_00001.json"]
        assert all(document.labels is not None for _, document in loaded)

    def test_rejects_empty_corpus(self, tmp_path):
        """Test a nonpositive count is refused."""
        with pytest.raises(GeneratorError):
            gen_corpus(tmp_path, count=0)
