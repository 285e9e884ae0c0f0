"""Working precision for trace arithmetic.

Traces along deep Farey walks grow doubly exponentially while the traces we
finally need may be small, so every kernel runs with enough decimal digits to
absorb the cancellation: a fixed guard plus the magnitude of its inputs.
"""

from __future__ import annotations

import logging
from typing import Any

import mpmath
from mpmath import mp

from .constants import PRECISION_GUARD_DIGITS

logger = logging.getLogger(__name__)


def digits(*values: Any) -> int:
    """Largest number of decimal digits before the point among ``values``."""
    most = 0
    for v in values:
        x = abs(getattr(v, "value", v))
        if x >= 10:
            most = max(most, int(mpmath.log10(x)) + 1)
    return most


def working_dps(*values: Any, extra: int = 0) -> int:
    """Digits needed for arithmetic on ``values``; never below the current context."""
    return max(mp.dps, PRECISION_GUARD_DIGITS + digits(*values) + extra)


def extended(*values: Any, extra: int = 0) -> Any:
    """Context manager raising ``mpmath.mp`` to the working precision of ``values``."""
    dps = working_dps(*values, extra=extra)
    if dps > 2 * PRECISION_GUARD_DIGITS:
        logger.debug("escalating working precision to %d digits", dps)
    return mp.workdps(dps)


def to_mpf(value: Any) -> Any:
    """Convert a real number (or numeric string) to ``mpmath.mpf`` without rounding."""
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, str):
        with mp.workdps(max(mp.dps, len(value) + 5)):
            return mpmath.mpf(value)
    return mpmath.mpf(value)
