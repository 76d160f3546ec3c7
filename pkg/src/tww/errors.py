"""Shared exception types and search budgets."""

from __future__ import annotations

import os
import time


class FormatError(ValueError):
    """Malformed input document (graph, matrix, scene, ... files)."""


class ModelError(ValueError):
    """Structurally invalid model (bad tree model, bad embedding, bad division)."""


class GeometryError(ValueError):
    """Geometric precondition violated (non-simple polygon, grid not hitting, ...)."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search ran out of budget; distinct from a definite 'none'."""


class Budget:
    """Node-count and wall-clock budget for backtracking searches.

    ``TWW_BUDGET_MS`` in the environment adds a global deadline on top of
    whatever the caller requests.  ``tick()`` is called once per expanded
    search node and raises :class:`BudgetExceededError` when spent.
    """

    def __init__(self, max_nodes: int | None = None, max_ms: float | None = None):
        env_ms = os.environ.get("TWW_BUDGET_MS")
        if env_ms is not None:
            env_val = float(env_ms)
            max_ms = env_val if max_ms is None else min(max_ms, env_val)
        self.max_nodes = max_nodes
        self.deadline = None if max_ms is None else time.monotonic() + max_ms / 1000.0
        self.nodes = 0

    def tick(self, count: int = 1) -> None:
        self.nodes += count
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceededError(f"search budget exceeded ({self.nodes} nodes)")
        # Check the clock sparsely; time.monotonic() is not free.
        if self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceededError("search deadline exceeded")
