"""HTTP clients for out-of-process ML providers.

Each stage speaks the same minimal protocol: one POST with a JSON body,
JSON back, 2-second timeout. Real models (sentence embedders, relation
extractors, CNN classifiers, an LLM rewriter) can then be hosted in
their own processes without entering this codebase.

Failure behavior differs by stage and is part of the contract:

* rewrite    — falls back to the input text, flagged degraded
* extraction — falls back to no triplets
* embedding  — raises ProviderUnavailable (results would be wrong, not
               merely unrefined)
* classify   — raises ProviderUnavailable
"""

from __future__ import annotations

import base64

import httpx

from .embedding import EmbeddingVector
from .errors import ProviderUnavailable
from .extract import Triplet
from .graph import Provenance, normalize_relation

TIMEOUT_SECONDS = 2.0


def _post(url: str, payload: dict) -> dict:
    response = httpx.post(url, json=payload, timeout=TIMEOUT_SECONDS)
    response.raise_for_status()
    return response.json()


class RemoteRewriteProvider:
    name = "remote-rewrite"

    def __init__(self, url: str) -> None:
        self.url = url

    def rewrite(self, text: str) -> tuple[str, bool]:
        """Returns (rewritten_text, degraded)."""
        try:
            body = _post(self.url, {"text": text})
            rewritten = body.get("text")
            if not isinstance(rewritten, str) or not rewritten:
                return text, True
            return rewritten, False
        except (httpx.HTTPError, ValueError):
            return text, True


class IdentityRewriteProvider:
    name = "identity"

    def rewrite(self, text: str) -> tuple[str, bool]:
        return text, False


class RemoteExtractorProvider:
    name = "remote-extractor"

    def __init__(self, url: str) -> None:
        self.url = url

    def extract(self, text: str) -> list[Triplet]:
        try:
            body = _post(self.url, {"text": text})
            raw = body.get("triplets", [])
        except (httpx.HTTPError, ValueError):
            return []
        triplets = []
        for item in raw:
            try:
                triplet = Triplet(
                    subject=str(item["subject"]).strip(),
                    relation=normalize_relation(str(item["relation"])),
                    object=str(item["object"]).strip(),
                    provenance=Provenance(doc=None, start=0, end=0),
                )
                triplet.validate()
            except Exception:
                continue  # skip malformed rows, keep the rest
            triplets.append(triplet)
        return triplets


class RemoteEmbeddingProvider:
    def __init__(self, url: str, name: str = "remote-embedding") -> None:
        self.url = url
        self.name = name
        self._dim: int | None = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            raise ProviderUnavailable("remote embedding dimension unknown before first call")
        return self._dim

    def embed(self, text: str) -> EmbeddingVector:
        try:
            body = _post(self.url, {"text": text})
            values = tuple(float(v) for v in body["values"])
        except (httpx.HTTPError, ValueError, KeyError, TypeError) as exc:
            raise ProviderUnavailable(f"embedding provider at {self.url} failed: {exc}") from exc
        vector = EmbeddingVector(values)
        if self._dim is None:
            self._dim = vector.dim
        return vector


class RemoteClassifierProvider:
    def __init__(self, url: str, name: str = "remote-classifier") -> None:
        self.url = url
        self.name = name
        self._labels: list[str] = []

    @property
    def labels(self) -> list[str]:
        return list(self._labels)

    def classify(self, data: bytes) -> list[tuple[str, float]]:
        payload = {"image_b64": base64.b64encode(data).decode("ascii")}
        try:
            body = _post(self.url, payload)
            scores = [(str(item["label"]), float(item["probability"]))
                      for item in body["scores"]]
        except (httpx.HTTPError, ValueError, KeyError, TypeError) as exc:
            raise ProviderUnavailable(f"classifier provider at {self.url} failed: {exc}") from exc
        self._labels = sorted(label for label, _ in scores)
        return scores
