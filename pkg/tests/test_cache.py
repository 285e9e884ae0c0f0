import threading

import pytest

from thurston_torus.cache import DistanceCache
from thurston_torus.farey import INFINITY, Slope
from thurston_torus.metric import DistResult
from thurston_torus.search import SearchBudget
from thurston_torus.stretch_envelope import Sign, stretch_point
from thurston_torus.torus_model import TorusPoint


@pytest.fixture
def distance_cache() -> DistanceCache:
    """Provides a DistanceCache holding at most three entries."""
    return DistanceCache(max_entries=3)


@pytest.fixture
def sample_points(thick_point: TorusPoint) -> list[TorusPoint]:
    """Provides points along a stretch line."""
    return [stretch_point(thick_point, INFINITY, Sign.PLUS, 0.1 * k) for k in range(5)]


def _result(k: int) -> DistResult:
    return DistResult(value=float(k), witness=Slope(k, 1))


def test_get_set(distance_cache: DistanceCache, sample_points: list[TorusPoint]) -> None:
    """Test basic get and set functionality."""
    key = (sample_points[0], sample_points[1], SearchBudget())
    assert distance_cache.get(key) is None

    distance_cache.set(key, _result(1))
    cached = distance_cache.get(key)

    assert cached is not None
    assert cached.value == 1.0
    assert distance_cache.hits == 1
    assert distance_cache.misses == 1


def test_lru_eviction(distance_cache: DistanceCache, sample_points: list[TorusPoint]) -> None:
    """Test that the least recently used entry is evicted first."""
    keys = [(sample_points[0], p, SearchBudget()) for p in sample_points[1:]]
    for k, key in enumerate(keys[:3]):
        distance_cache.set(key, _result(k))

    # Touch the oldest entry so the second one becomes least recent
    assert distance_cache.get(keys[0]) is not None
    distance_cache.set(keys[3], _result(3))

    assert len(distance_cache) == 3
    assert distance_cache.get(keys[1]) is None
    assert distance_cache.get(keys[0]) is not None


def test_budget_is_part_of_the_key(distance_cache: DistanceCache, sample_points: list[TorusPoint]) -> None:
    """Test that results of different budgets are kept apart."""
    X, Y = sample_points[0], sample_points[1]
    distance_cache.set((X, Y, SearchBudget()), _result(1))
    assert distance_cache.get((X, Y, SearchBudget(max_nodes=10))) is None


def test_distance_memoises(sample_points: list[TorusPoint]) -> None:
    """Test that a repeated distance query is served from the cache."""
    cache = DistanceCache()
    X, Y = sample_points[0], sample_points[2]

    first = cache.distance(X, Y)
    second = cache.distance(X, Y)

    assert first is second
    assert cache.hits == 1
    assert first.value == pytest.approx(0.2, abs=1e-6)


def test_invalid_size() -> None:
    """Test that a cache needs room for at least one entry."""
    with pytest.raises(ValueError):
        DistanceCache(max_entries=0)


def test_thread_safety(sample_points: list[TorusPoint]) -> None:
    """Test that the cache is thread-safe under concurrent access."""
    cache = DistanceCache(max_entries=8)
    keys = [(X, Y, SearchBudget()) for X in sample_points for Y in sample_points]
    errors: list[Exception] = []

    def worker(offset: int) -> None:
        try:
            for i in range(200):
                key = keys[(offset + i) % len(keys)]
                cache.set(key, _result(i))
                cache.get(keys[(offset * 7 + i) % len(keys)])
        except Exception as e:
            errors.append(e)

    threads = [threading.Thread(target=worker, args=(n,)) for n in range(10)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert not errors, f"Errors occurred in threads: {errors}"
    assert len(cache) <= 8
    assert cache.hits + cache.misses == 10 * 200
