"""Disk cache for Groebner bases.

Bases are stored as canonical text (order header, cap line, one generator
per line) under a filename derived from a content hash of the input ideal,
its monomial order, and the degree cap.  A sidecar ``.lock`` file per entry
gives advisory locking, so concurrent verifications of different genera can
share one cache directory safely.
"""

import hashlib
import os

from filelock import FileLock

from .groebner import GroebnerBasis

ENV_VAR = "HIGGSC_CACHE_DIR"
_PREFIX = "gb-"
_SUFFIX = ".txt"


def default_cache_dir():
    env = os.environ.get(ENV_VAR)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "higgsc")


def cache_key(ideal, cap):
    """Content hash of (generators, order, cap), hex-truncated."""
    spec = ideal.order.spec
    parts = ["order weighted-graded-lex " + " ".join(
        f"{n}:{w}" for n, w in zip(spec.names, spec.weights))]
    parts.append(f"cap {cap}")
    parts += [p.to_text() for p in ideal.generators]
    digest = hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()
    return digest[:24]


class GroebnerCache:
    def __init__(self, directory=None):
        self.directory = directory or default_cache_dir()

    def _path(self, key):
        return os.path.join(self.directory, _PREFIX + key + _SUFFIX)

    def get_or_compute(self, ideal, cap, compute):
        os.makedirs(self.directory, exist_ok=True)
        key = cache_key(ideal, cap)
        path = self._path(key)
        with FileLock(path + ".lock"):
            if os.path.exists(path):
                with open(path, encoding="utf-8") as fh:
                    return GroebnerBasis.deserialize(ideal.order.spec, fh.read())
            gb = compute()
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(gb.serialize())
            os.replace(tmp, path)
            return gb

    def _entries(self):
        if not os.path.isdir(self.directory):
            return []
        out = []
        for name in sorted(os.listdir(self.directory)):
            if name.startswith(_PREFIX) and name.endswith(_SUFFIX):
                out.append(name)
        return out

    def list_entries(self):
        """Entry names with sizes, as (name, bytes) pairs."""
        out = []
        for name in self._entries():
            out.append((name, os.path.getsize(os.path.join(self.directory, name))))
        return out

    def clear(self):
        """Remove cache entries (and their locks); leaves other files alone."""
        removed = 0
        for name in self._entries():
            os.remove(os.path.join(self.directory, name))
            removed += 1
            lock = os.path.join(self.directory, name + ".lock")
            if os.path.exists(lock):
                os.remove(lock)
        return removed

    def stat(self):
        entries = self.list_entries()
        return {
            "directory": self.directory,
            "entries": len(entries),
            "totalBytes": sum(size for _, size in entries),
        }
