"""In-process memoization of the expensive, s-independent results.

Both caches tolerate concurrent insertion: writes are idempotent, a value
computed twice for the same key is the same value.
"""
from __future__ import annotations

import threading
from typing import TYPE_CHECKING, Any, Generic, TypeVar

if TYPE_CHECKING:
    from collections.abc import Callable

__all__ = ["MemoCache", "OverlapCache", "SpectrumCache", "overlap_cache"]

K = TypeVar("K")
V = TypeVar("V")


class MemoCache(Generic[K, V]):
    """Lock guarded dict."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._store: dict[K, V] = {}

    def __len__(self) -> int:
        return len(self._store)

    def __contains__(self, key: object) -> bool:
        with self._lock:
            return key in self._store

    def get(self, key: K) -> V | None:
        with self._lock:
            return self._store.get(key)

    def put(self, key: K, value: V) -> V:
        """Insert `value` unless the key is present; return the stored value."""
        with self._lock:
            return self._store.setdefault(key, value)

    def get_or_compute(self, key: K, factory: Callable[[], V]) -> V:
        """Return the cached value, computing it outside the lock on a miss."""
        value = self.get(key)
        if value is None:
            value = self.put(key, factory())
        return value

    def clear(self) -> None:
        with self._lock:
            self._store.clear()

    def items(self) -> list[tuple[K, V]]:
        with self._lock:
            return list(self._store.items())


class OverlapCache(MemoCache[tuple[Any, ...], V]):
    """Overlap sets keyed by `(a, N, Λ, rel_tol, abs_tol, detector)`."""


class SpectrumCache(MemoCache[tuple[str, bool, float], V]):
    """Rindler spectrum values keyed by `(packet label, conjugate, k)`."""

    def samples(self, label: str, conjugate: bool) -> list[tuple[float, V]]:
        """Cached `(k, value)` pairs of one spectrum, sorted by k."""
        rows = [(key[2], value) for key, value in self.items() if key[0] == label and key[1] == conjugate]
        return sorted(rows, key=lambda row: row[0])


overlap_cache: OverlapCache = OverlapCache()
"""Process wide overlap memo shared by the sweep and the cli."""
