"""Tests for the HTTP surface."""

import os

os.environ.setdefault("ENV", "testing")

import httpx
import pytest
from fastapi.testclient import TestClient

from app.corpus.generators import gen_box, gen_cylinder
from app.main import app
from app.topology.graph import extract_user_graph
from app.tokens.autocomplete import encode_autocomplete_prefix
from app.tokens.vocabulary import BREP_END, SEQ_END, VOCAB_SIZE

from tests.fixtures import (
    BOX_USER_FACES,
    CYLINDER_TOKENS,
    CYLINDER_TOKENS_WITH_META,
    PLATE_WALLS,
    box_graph,
    plate_document,
    shifted_face,
)


def _payload(document):
    return document.model_dump(mode="json", exclude_none=True)


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


class TestRootAndHealth:
    """Tests for the service endpoints."""

    def test_root_reports_versions(self, client):
        """Test the root endpoint lists the wire format versions."""
        response = client.get("/")
        assert response.status_code == 200
        body = response.json()
        assert body["schema_version"] == "1"
        assert body["vocabulary_version"] == "1"

    def test_health(self, client):
        """Test the health endpoint."""
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"


class TestTokenizeEndpoint:
    """Tests for POST /tokens/tokenize."""

    def test_cylinder(self, client):
        """Test a cylinder compiles to the expected number of tokens."""
        response = client.post("/tokens/tokenize", json={"document": _payload(gen_cylinder())})
        assert response.status_code == 200
        body = response.json()
        assert len(body["tokens"]) == CYLINDER_TOKENS
        assert body["stats"]["faces"] == 4
        assert body["stats"]["meta"] is None

    def test_auto_meta(self, client):
        """Test auto meta adds the easy block."""
        response = client.post(
            "/tokens/tokenize",
            json={"document": _payload(gen_cylinder()), "meta": "auto", "stride": "global"},
        )
        assert response.status_code == 200
        body = response.json()
        assert len(body["tokens"]) == CYLINDER_TOKENS_WITH_META
        assert body["stats"]["meta"] == "easy"

    def test_coord_ordering(self, client):
        """Test the coordinate ordering emits one level that decodes to the same solid."""
        response = client.post(
            "/tokens/tokenize",
            json={"document": _payload(gen_cylinder()), "ordering": "coord"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["stats"]["levels"] == 1
        decoded = client.post("/tokens/detokenize", json={"tokens": body["tokens"]}).json()
        assert len(decoded["document"]["edges"]) == 6

    def test_unknown_meta(self, client):
        """Test an unknown meta option is a validation error."""
        response = client.post("/tokens/tokenize", json={"document": _payload(gen_box()), "meta": "tiny"})
        assert response.status_code == 422

    def test_bad_document(self, client):
        """Test a face grid of the wrong shape is rejected."""
        document = _payload(gen_box())
        document["faces"][0]["points"] = document["faces"][0]["points"][:3]
        response = client.post("/tokens/tokenize", json={"document": document})
        assert response.status_code == 422


class TestDetokenizeEndpoint:
    """Tests for POST /tokens/detokenize."""

    def test_round_trip(self, client):
        """Test tokens from the tokenizer decode into the same topology."""
        tokens = client.post("/tokens/tokenize", json={"document": _payload(gen_cylinder())}).json()["tokens"]
        response = client.post("/tokens/detokenize", json={"tokens": tokens})
        assert response.status_code == 200
        body = response.json()
        assert len(body["document"]["faces"]) == 4
        assert len(body["document"]["edges"]) == 6
        assert body["document"]["orientation_known"] is False
        assert body["merged_edges"] == 0

    def test_truncated_stream(self, client):
        """Test a parse error is reported with its position."""
        tokens = client.post("/tokens/tokenize", json={"document": _payload(gen_cylinder())}).json()["tokens"]
        response = client.post("/tokens/detokenize", json={"tokens": tokens[:-1]})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["error"] == "unexpected_end"
        assert detail["position"] == len(tokens) - 1

    def test_autocomplete_prefix(self, client):
        """Test a closed-off prefix reports its unassigned edges."""
        graph = box_graph()
        prefix = encode_autocomplete_prefix(extract_user_graph(graph, BOX_USER_FACES), graph.bounding_box())
        tokens = list(prefix) + [BREP_END, SEQ_END]
        response = client.post("/tokens/detokenize", json={"tokens": tokens, "mode": "autocomplete"})
        assert response.status_code == 200
        body = response.json()
        assert len(body["unassigned_edges"]) == 6
        assert sum("unassigned" in edge["faces"] for edge in body["document"]["edges"]) == 6

    def test_unassigned_needs_autocomplete_mode(self, client):
        """Test T_u is refused by the unconditional decoder."""
        graph = box_graph()
        prefix = encode_autocomplete_prefix(extract_user_graph(graph, BOX_USER_FACES), graph.bounding_box())
        response = client.post("/tokens/detokenize", json={"tokens": list(prefix) + [BREP_END, SEQ_END]})
        assert response.status_code == 422
        assert response.json()["detail"]["error"] == "mode_error"


class TestEvaluationEndpoints:
    """Tests for validity and constraint endpoints."""

    def test_validate_closed(self, client):
        """Test a generated box is closed."""
        response = client.post("/tokens/validate", json={"document": _payload(gen_box())})
        assert response.status_code == 200
        assert response.json()["is_manifold_closed"] is True

    def test_validate_gap(self, client):
        """Test a lifted face is reported."""
        document = shifted_face(gen_box(), 1, (0.0, 0.0, 0.05))
        response = client.post("/tokens/validate", json={"document": _payload(document)})
        body = response.json()
        assert body["is_manifold_closed"] is False
        assert len(body["geometric_gap_violations"]) == 4

    def test_constraints(self, client):
        """Test plate hull planes and bolt holes."""
        response = client.post("/tokens/constraints", json={"document": _payload(plate_document())})
        assert response.status_code == 200
        body = response.json()
        assert body["hull_planes"] == [0, 1, 2, 3, 4, 5]
        assert body["bolt_holes"] == PLATE_WALLS

    def test_constraints_tolerance_range(self, client):
        """Test the axis tolerance must be a positive angle."""
        response = client.post(
            "/tokens/constraints", json={"document": _payload(gen_box()), "axis_tol_deg": 0}
        )
        assert response.status_code == 422


class TestVocabularyEndpoint:
    """Tests for GET /tokens/vocabulary over an async client."""

    @pytest.mark.asyncio
    async def test_vocabulary(self):
        """Test the manifest is served."""
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://test") as async_client:
            response = await async_client.get("/tokens/vocabulary")
        assert response.status_code == 200
        body = response.json()
        assert body["size"] == VOCAB_SIZE
        assert body["fsq_levels"] == [8, 5, 5, 5]
