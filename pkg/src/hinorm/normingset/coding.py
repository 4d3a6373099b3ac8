"""The coding function sigma: finite functional tuples -> L2.

A prefix (f_1, ..., f_m) is keyed by the canonical text of its vectors.  A
new key receives the smallest unused element of L2 strictly above the
growth floor of f_m, so values are injective and depend only on the order
in which keys were first seen.  That order is the persisted log, and a
replay recomputes every value from it.
"""
import os
import threading

from ..errors import DomainError, IntegrityError
from ..vectors import FinVec, fmt, to_fraction


def prefix_key(vectors):
    """Canonical text of a tuple of vectors: ``k:n/d,...`` joined by ``;``."""
    parts = []
    for v in vectors:
        if not v:
            raise DomainError("prefix functionals must be nonzero")
        parts.append(",".join(f"{k}:{fmt(c)}" for k, c in v.items()))
    if not parts:
        raise DomainError("empty prefix")
    return ";".join(parts)


def _last_vector(key):
    last = key.rsplit(";", 1)[-1]
    entries = []
    for item in last.split(","):
        k, _, v = item.partition(":")
        entries.append((int(k), to_fraction(v)))
    return FinVec(entries)


def _as_vectors(prefix):
    return [getattr(f, "vec", f) for f in prefix]


class CodingTable:
    """Append-only memo of sigma, optionally persisted to ``path``."""

    def __init__(self, profile, path=None):
        self.profile = profile
        self.path = path
        self._values = {}
        self._used = set()
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            self._replay(path)

    def __len__(self):
        return len(self._values)

    def __contains__(self, key):
        return key in self._values

    def items(self):
        return list(self._values.items())

    def floor(self, key):
        return self.profile.sigma_floor(_last_vector(key))

    def _next_value(self, key):
        for v in self.profile.elements(2, above=self.floor(key)):
            if v not in self._used:
                return v

    def _replay(self, path):
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                key, tab, val = line.partition("\t")
                if not tab:
                    raise IntegrityError(f"{path}:{lineno}: missing TAB separator")
                try:
                    stored = int(val)
                except ValueError:
                    raise IntegrityError(f"{path}:{lineno}: bad sigma value {val!r}") from None
                if key in self._values:
                    raise IntegrityError(f"{path}:{lineno}: duplicate prefix")
                try:
                    expect = self._next_value(key)
                except (ValueError, DomainError) as exc:
                    raise IntegrityError(f"{path}:{lineno}: bad prefix ({exc})") from None
                if stored != expect:
                    raise IntegrityError(
                        f"{path}:{lineno}: replay mismatch, stored {stored}, expected {expect}")
                self._values[key] = stored
                self._used.add(stored)

    def fork(self):
        """In-memory copy; new values land in the copy only."""
        twin = CodingTable(self.profile)
        with self._lock:
            twin._values = dict(self._values)
            twin._used = set(self._used)
        return twin

    def lookup(self, prefix):
        """Stored sigma of a prefix, or None."""
        return self._values.get(prefix_key(_as_vectors(prefix)))

    def peek(self, prefix):
        """The value sigma would return, without committing a new one."""
        key = prefix_key(_as_vectors(prefix))
        got = self._values.get(key)
        if got is not None:
            return got
        with self._lock:
            return self._values.get(key) or self._next_value(key)

    def sigma_key(self, key):
        got = self._values.get(key)
        if got is not None:
            return got
        with self._lock:
            got = self._values.get(key)
            if got is not None:
                return got
            value = self._next_value(key)
            self._values[key] = value
            self._used.add(value)
            if self.path:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(f"{key}\t{value}\n")
            return value


def sigma(prefix, table):
    """sigma(f_1, ..., f_m): functionals (or their vectors) to an element of L2."""
    return table.sigma_key(prefix_key(_as_vectors(prefix)))
