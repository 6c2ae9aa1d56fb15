"""Content-addressed store for computed reports.

Each entry is one JSON file named by the SHA-256 of its key fields; the file
holds the payload together with a checksum of the payload's canonical text.
Writes go to a temporary file in the same directory and are renamed into
place, so concurrent writers never expose a partial entry.
"""

import hashlib
import json
import os
import tempfile

from . import config
from .errors import CacheCorruption

SCHEMA_VERSION = 1
_SUFFIX = ".json"


def canonical(document):
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def _digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


class ReportCache:
    def __init__(self, root=None):
        self.root = root or config.cache_dir()

    def key(self, family, rank, variant, method):
        return _digest(canonical([family, rank, variant, method, SCHEMA_VERSION]))

    def _path(self, key):
        return os.path.join(self.root, key + _SUFFIX)

    def get(self, key):
        """The stored payload, or ``None``; ``CacheCorruption`` on a bad entry."""
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except FileNotFoundError:
            return None
        try:
            entry = json.loads(text)
            payload, checksum = entry["payload"], entry["checksum"]
        except (ValueError, KeyError, TypeError):
            raise CacheCorruption(f"unreadable cache entry {path}") from None
        if _digest(canonical(payload)) != checksum:
            raise CacheCorruption(f"checksum mismatch in {path}")
        return payload

    def put(self, key, payload):
        os.makedirs(self.root, exist_ok=True)
        entry = {"checksum": _digest(canonical(payload)), "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=_SUFFIX)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical(entry))
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def entries(self):
        if not os.path.isdir(self.root):
            return []
        return sorted(name for name in os.listdir(self.root)
                      if name.endswith(_SUFFIX) and not name.startswith(".tmp-"))

    def stat(self):
        names = self.entries()
        size = sum(os.path.getsize(os.path.join(self.root, n)) for n in names)
        return {"path": os.path.abspath(self.root), "entries": len(names), "bytes": size}

    def clear(self):
        names = self.entries()
        for name in names:
            os.unlink(os.path.join(self.root, name))
        return len(names)
