"""Global static classes reusable throughout runtime."""

from collections.abc import Mapping
from types import MappingProxyType

from cachetools import LRUCache
from numpy.typing import NDArray
import numpy as np

RULE = tuple[NDArray[np.float64], NDArray[np.float64]]


class RuleCache:
    """Cache of Gauss-Laguerre rules keyed by (nodes, gamma)."""

    _cache: LRUCache[tuple[int, float], RULE] = LRUCache(maxsize=32)

    @classmethod
    def set_cache(cls, maxsize: int):
        """Set cache."""
        cls._cache = LRUCache(maxsize=maxsize)

    @classmethod
    def get_cache(cls) -> LRUCache[tuple[int, float], RULE]:
        """Get cache."""
        return cls._cache


class Thresholds:
    """Read-only numeric thresholds shared by the whole library.

    The table is frozen at import so concurrent callers always see the
    same screening values.
    """

    # pole: denominators and cylinder values below this are poles
    # boundary: margin around window edges in Re(alpha)
    # integer_order: distance of nu from an integer for Bessel Y
    # drop: series coefficients below this are discarded
    _values: Mapping[str, float] = MappingProxyType(
        {
            "pole": 1e-13,
            "boundary": 1e-9,
            "integer_order": 1e-10,
            "drop": 1e-300,
        }
    )

    @classmethod
    def get(cls, name: str) -> float:
        """Get a threshold by name."""
        return cls._values[name]

    @classmethod
    def names(cls) -> tuple[str, ...]:
        """Names of the known thresholds."""
        return tuple(cls._values)
