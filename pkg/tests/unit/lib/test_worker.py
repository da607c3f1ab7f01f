import math

import pytest

from horizon.lib import settings
from horizon.lib.worker import map_ordered, resolve_jobs


def test_resolve_jobs(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings.worker, "CONCURRENCY", 3)
    assert resolve_jobs() == 3
    assert resolve_jobs(0) == 3
    assert resolve_jobs(5) == 5
    assert resolve_jobs(-2) == 1


def test_map_ordered_inline() -> None:
    assert map_ordered(math.sqrt, [4.0, 9.0, 16.0], jobs=1) == [2.0, 3.0, 4.0]


def test_map_ordered_pool_keeps_order() -> None:
    items = [float(i * i) for i in range(12)]
    assert map_ordered(math.sqrt, items, jobs=2) == [float(i) for i in range(12)]


def test_map_ordered_empty() -> None:
    assert map_ordered(math.sqrt, [], jobs=4) == []
