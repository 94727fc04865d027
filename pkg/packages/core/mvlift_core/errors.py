from __future__ import annotations


class ShapeMismatchError(ValueError):
    pass


class InapplicableConsistencyError(ValueError):
    """Raised when fewer than two views are available for a consistency term."""
