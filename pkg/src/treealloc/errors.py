"""Exception types shared across the package."""


class TreeAllocError(Exception):
    """Base class for all library errors."""


class StructuralError(TreeAllocError):
    """The node records do not encode a valid laminar tree."""


class InputError(TreeAllocError):
    """Malformed caller input (bad lengths, non-finite entries, bad bounds)."""


class DomainError(TreeAllocError):
    """An objective was evaluated outside its declared domain."""


class InfeasibleError(TreeAllocError):
    """The feasible region is empty, or a required point lies outside it."""


class BudgetError(TreeAllocError):
    """Brute-force enumeration would exceed the configured budget."""


class ConsistencyError(TreeAllocError):
    """An internal debug cross-check failed; indicates a bug, not bad input."""
