"""Search budget configuration."""

import os

DEFAULT_BUDGET = 10**8


def search_budget(override=None):
    """Return the node cap for backtracking searches.

    An explicit ``override`` wins, then the ``FOUNDRY_BUDGET`` environment
    variable, then ``DEFAULT_BUDGET``.
    """
    if override is not None:
        return int(override)
    value = os.environ.get("FOUNDRY_BUDGET")
    if value:
        return int(float(value))
    return DEFAULT_BUDGET


class Counter:
    """Counts search nodes and raises once the budget is spent."""

    __slots__ = ("limit", "used", "what")

    def __init__(self, limit=None, what="search"):
        self.limit = search_budget(limit)
        self.used = 0
        self.what = what

    def tick(self, amount=1):
        self.used += amount
        if self.used > self.limit:
            from .errors import BudgetExceeded

            raise BudgetExceeded(f"{self.what} exceeded budget of {self.limit} nodes")
