import threading
from collections import OrderedDict

from .metric import DistResult, thurston_dist
from .search import SearchBudget
from .torus_model import TorusPoint

CacheKey = tuple[TorusPoint, TorusPoint, SearchBudget]


class DistanceCache:
    """
    An in-memory, least-recently-used memo of distance searches.
    All access goes through a lock, so one cache can be shared by threads
    sampling a geodesic in parallel.
    """

    def __init__(self, max_entries: int = 4096):
        if max_entries <= 0:
            raise ValueError("max_entries must be positive")
        self._max_entries = max_entries
        self._cache: OrderedDict[CacheKey, DistResult] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: CacheKey) -> DistResult | None:
        """Return the cached result for ``key`` or None, refreshing its recency."""
        with self._lock:
            if key not in self._cache:
                self.misses += 1
                return None
            self._cache.move_to_end(key)
            self.hits += 1
            return self._cache[key]

    def set(self, key: CacheKey, value: DistResult) -> None:
        """Store a result, evicting the least recently used entry when full."""
        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)
            while len(self._cache) > self._max_entries:
                self._cache.popitem(last=False)

    def distance(self, X: TorusPoint, Y: TorusPoint, budget: SearchBudget | None = None) -> DistResult:
        """Memoised :func:`~thurston_torus.metric.thurston_dist`."""
        key = (X, Y, budget or SearchBudget())
        cached = self.get(key)
        if cached is not None:
            return cached
        result = thurston_dist(X, Y, key[2])
        self.set(key, result)
        return result

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)
