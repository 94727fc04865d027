from __future__ import annotations


class MissingLabelsError(ValueError):
    """The chosen objective needs labels the dataset does not carry."""
