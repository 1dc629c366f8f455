"""Exception taxonomy shared across the package.

Operational failures (bad inputs, oversized runs, lost precision) are kept
distinct from mathematical failures (an exact identity that should hold did
not), so the CLI can map them to different exit codes.
"""


class BudgetExceeded(Exception):
    """An enumeration would exceed the configured item budget."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs budget >= {needed}, configured {budget}")


class PrecisionExceeded(Exception):
    """A Laurent-series coefficient below the tracked precision was requested."""


class CharacteristicError(Exception):
    """Operation requires odd characteristic (p > 2)."""


class IdentityCheckError(AssertionError):
    """An exact mathematical identity was violated; carries a counterexample."""

    def __init__(self, message: str, counterexample=None):
        self.counterexample = counterexample
        if counterexample is not None:
            message = f"{message} [counterexample: {counterexample}]"
        super().__init__(message)
