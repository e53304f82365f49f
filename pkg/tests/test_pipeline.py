"""Tests for the tokenize / detokenize pipeline."""
import numpy as np
import pytest

from app.core.errors import LimitExceededError
from app.corpus.corpus import random_solid
from app.corpus.generators import gen_cylinder, gen_prism
from app.pipeline import (
    check_limits,
    detokenize,
    resolve_meta,
    roundtrip_check,
    stream_stats,
    tokenize,
)
from app.topology.graph import extract_user_graph
from app.topology.references import WindowStride
from app.topology.traversal import FaceOrdering
from app.tokens.autocomplete import encode_autocomplete_prefix
from app.tokens.decoder import DecodeMode
from app.tokens.stream import TokenStream
from app.tokens.vocabulary import BREP_END, SEQ_END, Complexity

from tests.fixtures import (
    BOX_USER_FACES,
    CYLINDER_TOKENS,
    CYLINDER_TOKENS_WITH_META,
    box_graph,
    plate_document,
)


class TestTokenize:
    """Tests for tokenize."""

    def test_cylinder_token_count(self):
        """Test the raw cylinder tokenizes after normalization."""
        result = tokenize(gen_cylinder().to_graph())
        assert len(result.stream) == CYLINDER_TOKENS
        assert result.meta is None

    def test_auto_meta(self):
        """Test auto meta picks the class from the face count."""
        result = tokenize(gen_cylinder().to_graph(), meta="auto")
        assert result.meta is Complexity.EASY
        assert len(result.stream) == CYLINDER_TOKENS_WITH_META

    def test_coord_ordering_drops_level_markers(self):
        """Test one coordinate-sorted level replaces the three traversal levels."""
        result = tokenize(gen_cylinder().to_graph(), ordering=FaceOrdering.COORD)
        assert len(result.stream) == CYLINDER_TOKENS - 2
        assert len(result.plan.levels) == 1
        stats = stream_stats(result.stream)
        assert (stats.faces, stats.edges, stats.levels) == (4, 6, 1)

    def test_normalized_graph_returned(self):
        """Test the returned graph is the one the stream describes."""
        result = tokenize(box_graph(size=(4.0, 2.0, 2.0), center=(10.0, 0.0, 0.0)))
        box = result.graph.bounding_box()
        assert box.min_corner[0] == pytest.approx(-1.0)
        assert box.max_corner[0] == pytest.approx(1.0)

    def test_face_limit(self):
        """Test solids over the face limit are refused."""
        with pytest.raises(LimitExceededError) as exc_info:
            check_limits(box_graph(), max_faces=3, max_edges=100)
        assert exc_info.value.details["faces"] == 6

    def test_edge_limit(self):
        """Test solids over the edge limit are refused."""
        with pytest.raises(LimitExceededError):
            check_limits(box_graph(), max_faces=10, max_edges=11)

    @pytest.mark.parametrize("meta,faces,expected", [
        (None, 10, None),
        ("none", 10, None),
        ("auto", 30, Complexity.MEDIUM),
        ("hard", 4, Complexity.HARD),
        (Complexity.RANDOM, 4, Complexity.RANDOM),
    ])
    def test_resolve_meta(self, meta, faces, expected):
        """Test meta options resolve to a class or to no meta block."""
        assert resolve_meta(meta, faces) is expected


class TestRoundTrip:
    """Tests for roundtrip_check."""

    @pytest.mark.parametrize("document", [
        gen_cylinder(),
        gen_prism(sides=5),
        gen_prism(sides=12, phase=0.3),
        plate_document(),
        plate_document(tilt_deg=30.0),
    ])
    def test_topology_and_placement_survive(self, document):
        """Test decoding restores incidence and places boxes within half a bin."""
        report = roundtrip_check(document.to_graph())
        assert report.topology_identical
        assert report.placement_ok
        assert report.ok
        assert report.max_face_box_error <= 1.0 / 1024 + 1e-12

    @pytest.mark.parametrize("stride", list(WindowStride))
    def test_every_stride(self, stride):
        """Test every window stride round trips."""
        assert roundtrip_check(plate_document().to_graph(), stride=stride).ok

    @pytest.mark.parametrize("stride", list(WindowStride))
    @pytest.mark.parametrize("document", [gen_cylinder(), gen_prism(sides=9, phase=0.3), plate_document()])
    def test_coord_ordering(self, document, stride):
        """Test the single-level coordinate ordering round trips under every stride."""
        report = roundtrip_check(document.to_graph(), stride=stride, ordering=FaceOrdering.COORD)
        assert report.topology_identical
        assert report.placement_ok

    def test_face_mapping_is_permutation(self):
        """Test the face mapping covers every original face."""
        report = roundtrip_check(plate_document().to_graph())
        assert sorted(report.face_mapping) == list(range(10))


class TestDetokenize:
    """Tests for detokenize and stream_stats."""

    def test_unconditional_has_nothing_to_merge(self):
        """Test the unconditional decoder reports no merges."""
        stream = tokenize(gen_cylinder().to_graph()).stream
        result = detokenize(stream)
        assert result.graph.num_edges == 6
        assert result.merged == ()
        assert result.is_complete

    def test_cylinder_stats(self):
        """Test counts by kind and recovered structure."""
        stream = tokenize(gen_cylinder().to_graph(), meta="auto").stream
        stats = stream_stats(stream)
        assert stats.tokens == CYLINDER_TOKENS_WITH_META
        assert (stats.faces, stats.edges, stats.levels) == (4, 6, 3)
        assert stats.faces_per_level == [1, 2, 1]
        assert stats.kinds["coord"] == 60
        assert stats.kinds["face_code"] == 16
        assert stats.kinds["edge_code"] == 12
        assert stats.kinds["ref"] == 6
        assert stats.kinds["sentinel"] == 11
        assert stats.kinds["meta"] == 3
        assert stats.meta == "easy"
        assert stats.complexity == "easy"

    def test_prefix_stats(self):
        """Test a prefix is summarized as a partial stream."""
        graph = box_graph()
        prefix = encode_autocomplete_prefix(extract_user_graph(graph, BOX_USER_FACES), graph.bounding_box())
        stats = stream_stats(prefix)
        assert (stats.faces, stats.edges, stats.levels) == (2, 7, 1)
        assert stats.kinds["ref_unassigned"] == 6
        assert stats.meta is None

    def test_autocomplete_detokenize(self):
        """Test detokenize in autocomplete mode reports unmatched edges of a prefix."""
        graph = box_graph()
        prefix = encode_autocomplete_prefix(extract_user_graph(graph, BOX_USER_FACES), graph.bounding_box())
        complete = prefix.tokens + (BREP_END, SEQ_END)
        result = detokenize(TokenStream.of(complete), mode=DecodeMode.AUTOCOMPLETE)
        assert len(result.unmatched) == 6


class TestCorpusRoundTrip:
    """Round trips over a thousand generated solids."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_solids(self, seed):
        """Test fifty random solids per seed keep topology and placement."""
        rng = np.random.default_rng(1000 + seed)
        for _ in range(50):
            kind, document = random_solid(Complexity.RANDOM, rng)
            report = roundtrip_check(document.to_graph())
            assert report.topology_identical, kind
            assert report.placement_ok, kind
