"""Tests for the reference latent encoder."""
import numpy as np
import pytest

from app.core.errors import ContractViolationError
from app.corpus.corpus import random_solid
from app.corpus.generators import gen_box, plane_patch, segment
from app.fsq.encoder import (
    EDGE_CELLS,
    FACE_CELLS,
    ReferenceEncoder,
    Sweep,
    box_half_extents,
    reconstruction_rmse,
    reference_decode_edge,
    reference_decode_face,
    reference_encode_edge,
    reference_encode_face,
)
from app.fsq.quantizer import FsqLevels
from app.geometry.canonical import canonicalize_edge, canonicalize_face, denormalize
from app.geometry.grids import Aabb, EdgeGrid, FaceGrid
from app.tokens.vocabulary import Complexity
from app.topology.graph import normalize_graph

from tests.fixtures import cylinder_graph, prism_graph

# per-point RMSE allowed for corpus faces under the default lattice
FACE_RMSE_BOUND = 0.15

PLACEMENT_BOX = Aabb((2.0, 2.0, 2.0), (4.0, 3.0, 2.5))


def _planar_face() -> FaceGrid:
    return FaceGrid(plane_patch((0.1, -0.4, 0.2), (1.2, 0.3, 0.0), (0.0, 0.4, 0.9)))


def _face_rmse(grid: FaceGrid, encoder: ReferenceEncoder) -> float:
    canonical = canonicalize_face(grid)
    decoded = encoder.decode_face(encoder.encode_face(canonical).indices, canonical.box)
    return reconstruction_rmse(canonical.grid.points, decoded.grid.points)


def _edge_rmse(grid: EdgeGrid, encoder: ReferenceEncoder) -> float:
    canonical = canonicalize_edge(grid)
    decoded = encoder.decode_edge(encoder.encode_edge(canonical).indices, canonical.box)
    return reconstruction_rmse(canonical.grid.points, decoded.grid.points)


class TestFaceCodes:
    """Tests for face encoding and decoding."""

    def test_face_code_shape(self):
        """Test a face compresses to four in-range codebook indices."""
        code = ReferenceEncoder().encode_face(canonicalize_face(_planar_face()))
        assert code.is_face
        assert len(code.indices) == FACE_CELLS
        assert all(0 <= i < 1000 for i in code.indices)
        assert code.cells.shape == (FACE_CELLS, 4)

    def test_corners_stored_in_box_frame(self):
        """Test a flat rectangle stores its corners on the box boundary and a flat sweep."""
        bottom = gen_box(size=(2.0, 1.0, 0.5)).to_graph().faces[0].grid
        code = ReferenceEncoder().encode_face(canonicalize_face(bottom))
        expected = [[-1, -1, 0], [-1, 1, 0], [1, -1, 0], [1, 1, 0]]
        np.testing.assert_allclose(code.cells[:, :3], expected, atol=1e-12)
        assert Sweep.from_code(code.cells[3, 3]) is Sweep.FLAT

    @pytest.mark.parametrize("face", range(6))
    def test_box_faces_reconstruct_exactly(self, face):
        """Test axis-aligned rectangles survive the default lattice without error."""
        grid = gen_box(size=(2.0, 1.0, 0.5), center=(0.3, -0.2, 0.1)).to_graph().faces[face].grid
        assert _face_rmse(grid, ReferenceEncoder()) < 1e-9

    @pytest.mark.parametrize("phase", [0.0, 0.4, 1.3])
    def test_prism_faces_reconstruct_exactly(self, phase):
        """Test slanted prism sides keep their corners on their boxes."""
        encoder = ReferenceEncoder()
        for face in prism_graph(sides=5, phase=phase).faces:
            assert _face_rmse(face.grid, encoder) < 1e-9

    def test_half_cylinder_on_default_lattice(self):
        """Test a half-cylinder decodes as an arc along u within the bound."""
        encoder = ReferenceEncoder()
        grid = cylinder_graph().faces[1].grid
        code = encoder.encode_face(canonicalize_face(grid))
        assert Sweep.from_code(code.cells[3, 3]) is Sweep.ARC_U
        assert _face_rmse(grid, encoder) < 0.01

    def test_skew_planar_face_within_bound(self):
        """Test a plane whose corners leave the box boundary stays within the bound."""
        assert _face_rmse(_planar_face(), ReferenceEncoder()) <= FACE_RMSE_BOUND

    def test_decode_places_into_box(self):
        """Test a decoded face denormalizes into the box it was given."""
        canonical = reference_decode_face((0, 999, 500, 250), PLACEMENT_BOX)
        points = denormalize(canonical).points
        assert canonical.box == PLACEMENT_BOX
        assert np.all(np.isfinite(points))

    def test_flat_axis_collapses(self):
        """Test an axis without extent decodes onto the box center."""
        box = Aabb((0.0, 0.0, 1.0), (2.0, 1.0, 1.0))
        canonical = reference_decode_face((17, 402, 733, 999), box)
        assert np.all(canonical.grid.points[..., 2] == 0.0)
        np.testing.assert_allclose(box_half_extents(box), [1.0, 0.5, 0.0])

    def test_wrong_index_count(self):
        """Test decoding a face from the wrong number of indices is rejected."""
        with pytest.raises(ContractViolationError):
            ReferenceEncoder().decode_face((1, 2, 3), PLACEMENT_BOX)

    def test_levels_need_four_dimensions(self):
        """Test the reference encoder refuses a lattice without a shape channel."""
        with pytest.raises(ContractViolationError):
            ReferenceEncoder(FsqLevels((8, 5, 5)))


class TestEdgeCodes:
    """Tests for edge encoding and decoding."""

    def test_edge_code_shape(self):
        """Test an edge compresses to two codebook indices."""
        code = ReferenceEncoder().encode_edge(canonicalize_edge(EdgeGrid(segment((0, 0, 0), (1, 2, 0)))))
        assert not code.is_face
        assert len(code.indices) == EDGE_CELLS

    def test_straight_edge_reconstructs_exactly(self):
        """Test a segment keeps its endpoints on its box and decodes straight."""
        grid = EdgeGrid(segment((0.3, -1.0, 0.2), (1.0, 1.5, -0.4)))
        assert _edge_rmse(grid, ReferenceEncoder()) < 1e-9

    def test_half_arc_edge(self):
        """Test a cylinder rim decodes as a half arc bulging off its chord."""
        encoder = ReferenceEncoder()
        grid = cylinder_graph().edges[0].grid
        code = encoder.encode_edge(canonicalize_edge(grid))
        assert code.cells[0, 3] > 0
        assert _edge_rmse(grid, encoder) < 0.01

    def test_encoder_rejects_face_grid_as_edge(self):
        """Test the edge encoder refuses a face grid."""
        with pytest.raises(ContractViolationError):
            ReferenceEncoder().encode_edge(canonicalize_face(_planar_face()))

    def test_encoding_is_deterministic(self):
        """Test one grid always yields one code."""
        canonical = canonicalize_edge(EdgeGrid(segment((0, 0, 0), (0.5, 0.5, 1.0))))
        encoder = ReferenceEncoder()
        assert encoder.encode_edge(canonical).indices == encoder.encode_edge(canonical).indices


class TestCorpusReconstruction:
    """Reconstruction error over generated solids on the default lattice."""

    @pytest.mark.parametrize("seed", range(6))
    def test_faces_within_bound(self, seed):
        """Test every face of ten random solids reconstructs within the RMSE bound."""
        rng = np.random.default_rng(seed)
        encoder = ReferenceEncoder()
        for _ in range(10):
            _, document = random_solid(Complexity.RANDOM, rng)
            graph, _ = normalize_graph(document.to_graph())
            errors = [_face_rmse(face.grid, encoder) for face in graph.faces]
            assert max(errors) <= FACE_RMSE_BOUND

    @pytest.mark.parametrize("seed", range(3))
    def test_edges_within_bound(self, seed):
        """Test lines and rims of random solids reconstruct within the same bound."""
        rng = np.random.default_rng(100 + seed)
        encoder = ReferenceEncoder()
        for _ in range(10):
            _, document = random_solid(Complexity.RANDOM, rng)
            graph, _ = normalize_graph(document.to_graph())
            assert max(_edge_rmse(edge.grid, encoder) for edge in graph.edges) <= FACE_RMSE_BOUND


class TestDecodeIdempotence:
    """Decoding a re-encoded reconstruction reproduces it."""

    def test_face_codes(self):
        """Test decode, encode, decode equals decode over random face codes."""
        rng = np.random.default_rng(11)
        for code in rng.integers(0, 1000, size=(100, FACE_CELLS)):
            first = reference_decode_face(tuple(int(i) for i in code), PLACEMENT_BOX)
            again = reference_decode_face(reference_encode_face(first).indices, PLACEMENT_BOX)
            np.testing.assert_allclose(again.grid.points, first.grid.points, atol=1e-9)

    def test_edge_codes(self):
        """Test decode, encode, decode equals decode over random edge codes."""
        rng = np.random.default_rng(12)
        for code in rng.integers(0, 1000, size=(100, EDGE_CELLS)):
            first = reference_decode_edge(tuple(int(i) for i in code), PLACEMENT_BOX)
            again = reference_decode_edge(reference_encode_edge(first).indices, PLACEMENT_BOX)
            np.testing.assert_allclose(again.grid.points, first.grid.points, atol=1e-9)
