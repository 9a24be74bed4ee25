"""JSON disk cache for expensive artifacts (H_D, S_p).

One file per object, ``<root>/<kind>/<key>.json``.  Writes go to a temporary
file in the same directory and are renamed into place, so concurrent
writers never leave a torn file: the last completed write wins.  Each
document carries a SHA-256 checksum of its payload; a mismatch is treated
as a cache miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

__all__ = ["CorruptCache", "DiskCache", "default_cache", "set_default_cache", "ENV_VAR"]

log = logging.getLogger(__name__)

ENV_VAR = "CMCONG_CACHE_DIR"


class CorruptCache(ValueError):
    pass


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


class DiskCache:
    def __init__(self, root):
        self.root = Path(root)

    def path(self, kind: str, key) -> Path:
        return self.root / kind / f"{key}.json"

    def store(self, kind: str, key, payload: dict) -> Path:
        target = self.path(kind, key)
        target.parent.mkdir(parents=True, exist_ok=True)
        doc = dict(payload)
        doc["checksum"] = _checksum(payload)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{key}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def load_strict(self, kind: str, key) -> dict | None:
        """Payload, ``None`` if absent; raises CorruptCache on a bad checksum."""
        target = self.path(kind, key)
        try:
            with open(target) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            return None
        except json.JSONDecodeError as exc:
            raise CorruptCache(f"{target}: {exc}") from exc
        stored = doc.pop("checksum", None)
        if stored != _checksum(doc):
            raise CorruptCache(f"{target}: checksum mismatch")
        return doc

    def load(self, kind: str, key) -> dict | None:
        """Payload or ``None``; corrupt entries are logged and ignored."""
        try:
            return self.load_strict(kind, key)
        except CorruptCache as exc:
            log.warning("ignoring corrupt cache entry (%s); recomputing", exc)
            return None


_default: DiskCache | None = None
_default_set = False


def set_default_cache(root) -> None:
    """Use ``root`` as the process-wide cache (``None`` disables caching)."""
    global _default, _default_set
    _default = DiskCache(root) if root is not None else None
    _default_set = True


def default_cache() -> DiskCache | None:
    if _default_set:
        return _default
    root = os.environ.get(ENV_VAR)
    return DiskCache(root) if root else None
