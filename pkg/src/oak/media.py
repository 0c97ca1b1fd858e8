"""Content-addressed media store with hash-based deduplication.

Objects are keyed by the SHA-256 of their raw bytes, so identical
content is stored exactly once regardless of how often it is uploaded.
With a root directory the store is durable on disk using the layout

    <root>/<first two hex chars>/<digest>          object bytes
    <root>/<first two hex chars>/<digest>.json     sidecar {mime, size, created_at}

and without one it is purely in-memory. Dedup is keyed on bytes only;
the first write wins for the MIME type.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .errors import EmptyMime, MalformedId, NotFound

_HEX64 = re.compile(r"^[0-9a-f]{64}$")


def content_hash(data: bytes) -> str:
    """64-char lowercase hex SHA-256 digest of the raw bytes."""
    return hashlib.sha256(data).hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class MediaStat:
    mime: str
    size: int
    created_at: str


class MediaStore:
    """Hash-keyed blob store; see module docstring for the disk layout."""

    def __init__(self, root: Optional[Path | str] = None, clock: Callable[[], str] = _utc_now) -> None:
        self._root = Path(root) if root is not None else None
        self._clock = clock
        self._lock = threading.RLock()
        self._blobs: dict[str, bytes] = {}
        self._meta: dict[str, MediaStat] = {}
        if self._root is not None:
            self._root.mkdir(parents=True, exist_ok=True)

    # --- paths -----------------------------------------------------------

    def _blob_path(self, media_id: str) -> Path:
        assert self._root is not None
        return self._root / media_id[:2] / media_id

    def _sidecar_path(self, media_id: str) -> Path:
        return self._blob_path(media_id).with_name(media_id + ".json")

    # --- operations --------------------------------------------------------

    def put_media(self, data: bytes, mime: str) -> str:
        if not mime:
            raise EmptyMime("mime type must be nonempty")
        media_id = content_hash(data)
        with self._lock:
            if self._exists(media_id):
                return media_id
            stat = MediaStat(mime=mime, size=len(data), created_at=self._clock())
            if self._root is not None:
                blob = self._blob_path(media_id)
                blob.parent.mkdir(parents=True, exist_ok=True)
                tmp = blob.with_name(blob.name + ".tmp")
                tmp.write_bytes(data)
                os.replace(tmp, blob)
                self._sidecar_path(media_id).write_text(json.dumps(
                    {"mime": stat.mime, "size": stat.size, "created_at": stat.created_at},
                    sort_keys=True))
            self._blobs[media_id] = data
            self._meta[media_id] = stat
            return media_id

    def get_media(self, media_id: str) -> tuple[bytes, str]:
        self._check_id(media_id)
        with self._lock:
            if not self._load(media_id):
                raise NotFound(media_id)
            return self._blobs[media_id], self._meta[media_id].mime

    def stat_media(self, media_id: str) -> MediaStat:
        self._check_id(media_id)
        with self._lock:
            if not self._load(media_id):
                raise NotFound(media_id)
            return self._meta[media_id]

    def contains(self, media_id: str) -> bool:
        if not _HEX64.match(media_id):
            return False
        with self._lock:
            return self._load(media_id)

    def __len__(self) -> int:
        with self._lock:
            if self._root is not None:
                return sum(1 for _ in self._iter_disk_ids())
            return len(self._blobs)

    def media_ids(self) -> list[str]:
        with self._lock:
            if self._root is not None:
                return sorted(self._iter_disk_ids())
            return sorted(self._blobs)

    def scrub(self) -> list[str]:
        """Re-hash every stored object; return ids whose bytes do not match.

        The store is self-verifying: a nonempty result means on-disk
        corruption (or a programming error) and should be treated as fatal.
        """
        bad = []
        for media_id in self.media_ids():
            data, _ = self.get_media(media_id)
            if content_hash(data) != media_id:
                bad.append(media_id)
        return bad

    # --- internals -----------------------------------------------------------

    def _check_id(self, media_id: str) -> None:
        if not _HEX64.match(media_id):
            raise MalformedId(f"media id must be 64 lowercase hex chars, got {media_id!r}")

    def _exists(self, media_id: str) -> bool:
        if media_id in self._blobs:
            return True
        return self._root is not None and self._blob_path(media_id).exists()

    def _load(self, media_id: str) -> bool:
        """Ensure the object is in the in-memory cache; False if absent."""
        if media_id in self._blobs:
            return True
        if self._root is None:
            return False
        blob = self._blob_path(media_id)
        if not blob.exists():
            return False
        data = blob.read_bytes()
        side = json.loads(self._sidecar_path(media_id).read_text())
        self._blobs[media_id] = data
        self._meta[media_id] = MediaStat(mime=side["mime"], size=side["size"],
                                         created_at=side["created_at"])
        return True

    def _iter_disk_ids(self):
        assert self._root is not None
        for shard in self._root.iterdir():
            if not shard.is_dir():
                continue
            for entry in shard.iterdir():
                if _HEX64.match(entry.name):
                    yield entry.name
