from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from natureseq.metrics import validity_uniqueness
from natureseq.service import create_app
from natureseq.tok import tokenize_smiles


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_ok(self, client):
        assert client.get("/v1/health").json() == {"status": "ok"}


class TestTokenizeEndpoints:
    def test_tokenize_matches_api(self, client):
        response = client.post("/v1/tokenize", json={"domain": "mol", "text": "c1ccccc1"})
        assert response.status_code == 200
        assert response.json()["tokens"] == tokenize_smiles("c1ccccc1")

    def test_wrap_and_detokenize(self, client):
        wrapped = client.post(
            "/v1/tokenize", json={"domain": "mol", "text": "CCO", "wrap": "mol"}
        ).json()["tokens"]
        text = client.post("/v1/detokenize", json={"tokens": wrapped}).json()["text"]
        assert text == "<mol>CCO</mol>"

    def test_tokenize_error_maps_to_422(self, client):
        response = client.post("/v1/tokenize", json={"domain": "rna", "text": "ATGC"})
        assert response.status_code == 422
        payload = response.json()
        assert payload["code"] == "TokenizeError"
        assert "position" in payload["message"] or "T" in payload["message"]


class TestSmilesEndpoints:
    def test_validate(self, client):
        response = client.post(
            "/v1/smiles/validate", json={"smiles": ["CCO", "OCC", "C1CC"]}
        )
        assert response.json() == validity_uniqueness(["CCO", "OCC", "C1CC"]).as_dict()

    def test_canonical(self, client):
        a = client.post("/v1/smiles/canonical", json={"smiles": "OCC"}).json()
        b = client.post("/v1/smiles/canonical", json={"smiles": "C(O)C"}).json()
        assert a == b

    def test_check_failures(self, client):
        payload = client.post("/v1/smiles/check", json={"smiles": "C1CC"}).json()
        assert payload["valid"] is False
        assert payload["failures"][0]["code"] == "UnclosedRing"

    def test_descriptors(self, client):
        payload = client.post("/v1/smiles/descriptors", json={"smiles": "CCO"}).json()
        assert payload["hbd"] == 1 and payload["hba"] == 1


class TestDnaEndpoints:
    def test_revcomp(self, client):
        payload = client.post("/v1/dna/reverse-complement", json={"sequence": "ATGC"}).json()
        assert payload["text"] == "GCAT"

    def test_translate(self, client):
        payload = client.post(
            "/v1/dna/translate", json={"sequence": "ATGAAATAA", "frame": 0}
        ).json()
        assert payload["text"] == "MK"

    def test_crrna(self, client):
        guide = "AGACACAGCGGGTGCTCTGC"
        payload = client.post(
            "/v1/dna/crrna", json={"target": "TTTT" + guide + "AGG", "guide": guide}
        ).json()
        assert payload["valid"] is True and payload["strand"] == "+"


class TestMaterialEndpoints:
    def test_composition_round_trip(self, client):
        tokens = client.post(
            "/v1/material/encode-composition",
            json={"composition": [{"symbol": "Li", "count": 2}, {"symbol": "O", "count": 3}],
                  "space_group": 123},
        ).json()["tokens"]
        assert tokens == ["Li", "Li", "O", "O", "O", "<sg123>"]
        decoded = client.post("/v1/material/decode-composition", json={"tokens": tokens}).json()
        assert decoded == {"composition": [["Li", 2], ["O", 3]], "space_group": 123}

    def test_poscar_and_structure_codec(self, client, re3c_text):
        structure = client.post(
            "/v1/material/parse-poscar", json={"text": re3c_text, "space_group": 1}
        ).json()
        tokens = client.post("/v1/material/encode-structure", json=structure).json()["tokens"]
        assert tokens[:4] == ["Re", "Re", "Re", "C"]
        decoded = client.post("/v1/material/decode-structure", json={"tokens": tokens}).json()
        re_tokens = client.post("/v1/material/encode-structure", json=decoded).json()["tokens"]
        assert re_tokens == tokens

    def test_smact(self, client):
        payload = client.post(
            "/v1/material/smact",
            json={"composition": [{"symbol": "Na", "count": 1}, {"symbol": "Cl", "count": 1}]},
        ).json()
        assert payload["valid"] is True
        assert payload["witness"] == {"Na": 1, "Cl": -1}

    def test_bad_space_group_maps_to_422(self, client):
        response = client.post(
            "/v1/material/encode-composition",
            json={"composition": [{"symbol": "Fe", "count": 1}], "space_group": 231},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "BadSpaceGroup"


class TestCorpusEndpoints:
    def test_render(self, client):
        payload = client.post(
            "/v1/corpus/render-instruction",
            json={"instruction": "Say hi.", "response": "<dna>ACGT</dna>"},
        ).json()
        assert payload["text"] == "Instruction: Say hi.\n\n\nResponse: <dna>ACGT</dna>"
        assert sum(payload["loss_mask"]) == 7

    def test_interleave(self, client):
        payload = client.post(
            "/v1/corpus/interleave",
            json={
                "text": "povidone iodine rocks",
                "spans": [{"start": 0, "end": 15, "domain": "mol", "payload": "C=CN1CCCC1=O.II"}],
            },
        ).json()
        assert payload["text"] == "povidone iodine <mol>C=CN1CCCC1=O.II</mol> rocks"

    def test_preference_duplicate_rejected(self, client):
        response = client.post(
            "/v1/corpus/preference",
            json={"prompt": "p", "accepted": "same", "rejected": "same"},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "DuplicateResponses"


class TestMetricsEndpoints:
    def test_aar(self, client):
        payload = client.post(
            "/v1/metrics/aar", json={"reference": "QQYSNYPWT", "generated": "QQYSNY"}
        ).json()
        assert payload["value"] == pytest.approx(6 / 9)

    def test_spearman(self, client):
        payload = client.post(
            "/v1/metrics/spearman", json={"xs": [1, 2, 3], "ys": [3, 2, 1]}
        ).json()
        assert payload["value"] == pytest.approx(-1.0)

    def test_success_within(self, client):
        payload = client.post(
            "/v1/metrics/success-within",
            json={"values": [390, 394, 360], "targets": [400, 400, 400]},
        ).json()
        assert payload["value"] == pytest.approx(2 / 3)

    def test_stability(self, client):
        payload = client.post(
            "/v1/metrics/stability", json={"ehulls": [0.05, 0.2]}
        ).json()
        assert payload["value"] == 0.5

    def test_diversity(self, client):
        payload = client.post(
            "/v1/metrics/diversity", json={"sequences": ["AAAA", "AAAT", "GGGG"]}
        ).json()
        assert payload["value"] == pytest.approx(2 / 3)

    def test_error_shape(self, client):
        response = client.post("/v1/metrics/spearman", json={"xs": [1], "ys": [1, 2]})
        assert response.status_code == 422
        assert response.json()["code"] == "LengthMismatch"
