"""Interfaces for observing the best-first slope search."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from .farey import Slope

logger = logging.getLogger("thurston_torus.search")


class SearchHook(Protocol):
    """A protocol for hooks called while a search runs."""

    def on_layer(self, *, layer: int, nodes: int, value: float, witness: Slope) -> None:
        """A hook to be called after each expanded layer of the frontier."""
        ...

    def on_improvement(self, *, value: float, witness: Slope, nodes: int) -> None:
        """A hook to be called whenever the incumbent changes."""
        ...


class LoggingHook:
    """Forward search events to the ``thurston_torus.search`` logger at debug level."""

    def on_layer(self, *, layer: int, nodes: int, value: float, witness: Slope) -> None:
        logger.debug("layer %d: %d nodes expanded, best %.12g at %s", layer, nodes, value, witness)

    def on_improvement(self, *, value: float, witness: Slope, nodes: int) -> None:
        logger.debug("incumbent %s with value %.12g after %d nodes", witness, value, nodes)
